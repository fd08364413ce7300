#pragma once
// Precomputed interaction kernel and the fast impact path.
//
// 1/g depends only on the coordinate offset between two sites, so it is
// tabulated once over [-(L-1), L-1]^2. The support/persuasion switch depends on
// the target's opinion, which breaks a plain convolution; the fix is to
// accumulate two fields per opinion k (sources holding k weighted by s_j, and
// by p_j) and pick per target: own opinion reads the support field, every other
// opinion reads the persuasion field. Each source touches only the two fields
// of its own opinion, so a full evaluation costs 2 multiply-adds per
// (target, source) pair regardless of K.

#include "core.hpp"

#include <cmath>
#include <vector>

namespace impact_lattice {

class InteractionKernel {
public:
    InteractionKernel(std::size_t L, double alpha, ScalingForm form)
        : L_{L}, width_{2 * L - 1}, alpha_{alpha}, form_{form}, inverse_scaling_(width_ * width_) {
        const auto half = static_cast<std::ptrdiff_t>(L) - 1;
        for (std::ptrdiff_t dr = -half; dr <= half; ++dr)
            for (std::ptrdiff_t dc = -half; dc <= half; ++dc) {
                const double d = std::sqrt(static_cast<double>(dr * dr + dc * dc));
                inverse_scaling_[index(dr, dc)] = 1.0 / scaling(d, alpha, form);
            }
    }

    std::size_t side() const noexcept { return L_; }
    std::size_t width() const noexcept { return width_; }
    double alpha() const noexcept { return alpha_; }
    ScalingForm form() const noexcept { return form_; }

    /// 1/g at offset (dr, dc), |dr|, |dc| < L.
    double at(std::ptrdiff_t dr, std::ptrdiff_t dc) const noexcept { return inverse_scaling_[index(dr, dc)]; }

    /// Row-major (2L-1)^2 table; offset (dr, dc) lives at (dr+L-1, dc+L-1).
    std::span<const double> table() const noexcept { return inverse_scaling_; }

private:
    std::size_t index(std::ptrdiff_t dr, std::ptrdiff_t dc) const noexcept {
        const auto half = static_cast<std::ptrdiff_t>(L_) - 1;
        return static_cast<std::size_t>((dr + half) * static_cast<std::ptrdiff_t>(width_) + dc + half);
    }

    std::size_t L_;
    std::size_t width_;
    double alpha_;
    ScalingForm form_;
    std::vector<double> inverse_scaling_;
};

inline InteractionKernel build_kernel(std::size_t L, double alpha, ScalingForm form = ScalingForm::shifted_power) {
    if (L < 1) throw ParameterError("L", "must be >= 1");
    if (!(std::isfinite(alpha) && alpha >= 0.0)) throw ParameterError("alpha", "must be finite and >= 0");
    return InteractionKernel{L, alpha, form};
}

namespace detail {

inline void require_matching(const Configuration& config, const InteractionKernel& kernel) {
    const auto& p = config.params();
    if (kernel.side() != p.L || kernel.alpha() != p.alpha || kernel.form() != p.scaling)
        throw ParameterError("engine", "interaction kernel was built for different L, alpha or scaling form");
}

// Support and persuasion fields for target rows [row_begin, row_end).
// `weights` is the kernel table, possibly with its centre zeroed.
inline void accumulate_rows(const Configuration& config, std::span<const double> weights, std::size_t row_begin,
                            std::size_t row_end, std::vector<double>& support, std::vector<double>& persuasion) {
    const std::size_t L = config.side();
    const std::size_t N = config.size();
    const std::size_t W = 2 * L - 1;
    for (std::size_t j = 0; j < N; ++j) {
        const Agent& src = config[j];
        const std::size_t rs = j / L, cs = j % L;
        const double sw = src.support, pw = src.persuasion;
        double* s_field = support.data() + src.opinion * N;
        double* p_field = persuasion.data() + src.opinion * N;
        for (std::size_t r = row_begin; r < row_end; ++r) {
            const double* kr = weights.data() + (rs + L - 1 - r) * W + (L - 1 - cs);
            double* srow = s_field + r * L;
            double* prow = p_field + r * L;
            for (std::size_t c = 0; c < L; ++c) {
                srow[c] += sw * kr[c];
                prow[c] += pw * kr[c];
            }
        }
    }
}

}  // namespace detail

/// Impacts for every agent through the tabulated kernel. Matches `impact`
/// per agent up to rounding.
inline ImpactField impact_field(const Configuration& config, const InteractionKernel& kernel,
                                const Executor& exec = Executor::serial(), bool self_support = true) {
    detail::require_matching(config, kernel);
    const auto& p = config.params();
    const std::size_t L = p.L, N = config.size(), K = p.K;

    std::vector<double> centreless;
    std::span<const double> weights = kernel.table();
    if (!self_support) {
        centreless.assign(weights.begin(), weights.end());
        centreless[(L - 1) * (2 * L - 1) + (L - 1)] = 0.0;
        weights = centreless;
    }

    std::vector<double> support(K * N, 0.0), persuasion(K * N, 0.0);
    ImpactField out(N, K);
    exec.parallel_for(L, [&](std::size_t row_begin, std::size_t row_end) {
        detail::accumulate_rows(config, weights, row_begin, row_end, support, persuasion);
        for (std::size_t i = row_begin * L; i < row_end * L; ++i) {
            const Opinion own = config[i].opinion;
            auto dst = out[i];
            for (std::size_t k = 0; k < K; ++k)
                dst[k] = p.impact_scale * (k == own ? support[k * N + i] : persuasion[k * N + i]);
        }
    });
    return out;
}

/// Engine backed by a prebuilt kernel; immutable and shareable across threads.
class KernelEngine {
public:
    static constexpr std::string_view name = "kernel";

    explicit KernelEngine(const ModelParams& params)
        : kernel_{build_kernel(params.L, params.alpha, params.scaling)}, self_support_{params.self_support} {}

    const InteractionKernel& kernel() const noexcept { return kernel_; }

    ImpactField field(const Configuration& config, const Executor& exec = Executor::serial()) const {
        return impact_field(config, kernel_, exec, self_support_);
    }

    void agent_impact(const Configuration& config, std::size_t i, std::span<double> out) const {
        detail::require_matching(config, kernel_);
        const auto& p = config.params();
        const std::size_t L = p.L;
        const auto ri = static_cast<std::ptrdiff_t>(i / L), ci = static_cast<std::ptrdiff_t>(i % L);
        const Opinion own = config[i].opinion;
        std::ranges::fill(out, 0.0);
        for (std::size_t j = 0; j < config.size(); ++j) {
            if (j == i && !self_support_) continue;
            const Agent& src = config[j];
            const double w = src.opinion == own ? src.support : src.persuasion;
            out[src.opinion] +=
                w * kernel_.at(static_cast<std::ptrdiff_t>(j / L) - ri, static_cast<std::ptrdiff_t>(j % L) - ci);
        }
        for (auto& v : out) v *= p.impact_scale;
    }

private:
    InteractionKernel kernel_;
    bool self_support_;
};

}  // namespace impact_lattice
