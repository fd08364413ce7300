#pragma once
// Lattice state, social impact, and the temperature-driven update rule.
//
// Agents sit on an L x L square lattice with open boundaries. Agent i holds
// one of K opinions and two fixed strengths: persuasion p_i and support s_i.
// The impact of opinion k on agent i is
//
//     I_{i,k} = c * sum_{j : opinion_j == k} w_j / g(d_ij)
//
// with w_j = s_j when k is i's own opinion (support, including i itself at
// d = 0) and w_j = p_j otherwise (persuasion). c is `impact_scale`. The new
// opinion is drawn with probability proportional to exp(I_{i,k} / T); at T = 0
// the maximal-impact opinion is adopted.

#include "params.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace impact_lattice {

using Opinion = std::uint32_t;

struct Agent {
    Opinion opinion = 0;
    double persuasion = 0.0;
    double support = 0.0;

    friend bool operator==(const Agent&, const Agent&) = default;
};

struct GridPoint {
    std::size_t row;
    std::size_t col;
};

class Configuration {
public:
    Configuration() = default;

    Configuration(ModelParams params, std::vector<Agent> agents, std::size_t step_index = 0)
        : params_{std::move(params)}, agents_{std::move(agents)}, step_index_{step_index} {
        params_.validate();
        if (agents_.size() != params_.agent_count())
            throw ParameterError("L", "agent count " + std::to_string(agents_.size()) +
                                          " does not match L*L = " + std::to_string(params_.agent_count()));
        for (const auto& a : agents_) {
            if (a.opinion >= params_.K) throw ParameterError("K", "agent opinion out of range");
            if (!(a.persuasion >= 0.0 && a.persuasion <= 1.0)) throw ParameterError("persuasion", "must lie in [0,1]");
            if (!(a.support >= 0.0 && a.support <= 1.0)) throw ParameterError("support", "must lie in [0,1]");
        }
    }

    const ModelParams& params() const noexcept { return params_; }
    std::size_t side() const noexcept { return params_.L; }
    std::size_t size() const noexcept { return agents_.size(); }
    std::size_t step_index() const noexcept { return step_index_; }

    std::span<const Agent> agents() const noexcept { return agents_; }
    const Agent& operator[](std::size_t i) const noexcept { return agents_[i]; }

    GridPoint point(std::size_t i) const noexcept { return {i / params_.L, i % params_.L}; }

    std::vector<Opinion> opinions() const {
        std::vector<Opinion> out(agents_.size());
        std::ranges::transform(agents_, out.begin(), &Agent::opinion);
        return out;
    }

    /// Copy with new opinions (strengths unchanged) at the given step index.
    Configuration with_opinions(std::span<const Opinion> opinions, std::size_t step_index) const {
        assert(opinions.size() == agents_.size());
        Configuration next = *this;
        for (std::size_t i = 0; i < agents_.size(); ++i) next.agents_[i].opinion = opinions[i];
        next.step_index_ = step_index;
        return next;
    }

    /// In-place opinion change, used by sequential update sweeps.
    void set_opinion(std::size_t i, Opinion opinion) noexcept {
        assert(opinion < params_.K);
        agents_[i].opinion = opinion;
    }

    void set_step_index(std::size_t step_index) noexcept { step_index_ = step_index; }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    ModelParams params_{};
    std::vector<Agent> agents_;
    std::size_t step_index_ = 0;
};

/// Random initial state: opinions uniform on {0..K-1}, p and s uniform on [0,1).
inline Configuration init_configuration(const ModelParams& params) {
    params.validate();
    std::vector<Agent> agents(params.agent_count());
    for (std::size_t i = 0; i < agents.size(); ++i) {
        CounterStream rng{params.seed, StreamDomain::init, 0, i};
        agents[i].opinion = static_cast<Opinion>(rng.below(params.K));
        agents[i].persuasion = rng.uniform();
        agents[i].support = rng.uniform();
    }
    return Configuration{params, std::move(agents)};
}

/// Euclidean distance between row-major lattice sites i and j on an L x L grid.
inline double distance(std::size_t i, std::size_t j, std::size_t L) {
    if (i >= L * L || j >= L * L) throw std::out_of_range("lattice index out of range");
    const double dr = static_cast<double>(i / L) - static_cast<double>(j / L);
    const double dc = static_cast<double>(i % L) - static_cast<double>(j % L);
    return std::sqrt(dr * dr + dc * dc);
}

/// Distance scaling g(d); g(0) = 1 for both forms.
inline double scaling(double d, double alpha, ScalingForm form = ScalingForm::shifted_power) noexcept {
    switch (form) {
        case ScalingForm::power_of_shifted:
            return std::pow(1.0 + d, alpha);
        case ScalingForm::shifted_power:
            break;
    }
    return d == 0.0 ? 1.0 : 1.0 + std::pow(d, alpha);
}

using ImpactVector = std::vector<double>;

/// Direct evaluation of I_{i,k} for every k: one pass over all agents with a
/// fresh g(d) per pair. Reference path for the kernel engine.
inline ImpactVector impact(const Configuration& config, std::size_t i) {
    const auto& p = config.params();
    const Opinion own = config[i].opinion;
    ImpactVector out(p.K, 0.0);
    for (std::size_t j = 0; j < config.size(); ++j) {
        if (j == i && !p.self_support) continue;
        const Agent& src = config[j];
        const double w = src.opinion == own ? src.support : src.persuasion;
        out[src.opinion] += w / scaling(distance(i, j, p.L), p.alpha, p.scaling);
    }
    for (auto& v : out) v *= p.impact_scale;
    return out;
}

/// Writes the adoption probabilities for `impacts` at temperature T into `out`.
/// T > 0: Boltzmann weights with the maximum subtracted first. T = 0: uniform
/// over the maximisers.
inline void opinion_probabilities(std::span<const double> impacts, double temperature, std::span<double> out) {
    assert(out.size() == impacts.size() && !impacts.empty());
    const double top = *std::ranges::max_element(impacts);
    if (temperature == 0.0) {
        std::size_t ties = 0;
        for (std::size_t k = 0; k < impacts.size(); ++k) {
            out[k] = impacts[k] == top ? 1.0 : 0.0;
            ties += impacts[k] == top;
        }
        for (auto& v : out) v /= static_cast<double>(ties);
        return;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < impacts.size(); ++k) {
        out[k] = std::exp((impacts[k] - top) / temperature);
        total += out[k];
    }
    for (auto& v : out) v /= total;
}

inline std::vector<double> opinion_probabilities(std::span<const double> impacts, double temperature) {
    std::vector<double> out(impacts.size());
    opinion_probabilities(impacts, temperature, out);
    return out;
}

/// Inverse-CDF draw from a probability vector with u in [0,1).
inline Opinion sample_opinion(std::span<const double> probabilities, double u) noexcept {
    double cumulative = 0.0;
    const std::size_t last = probabilities.size() - 1;
    for (std::size_t k = 0; k < last; ++k) {
        cumulative += probabilities[k];
        if (u < cumulative) return static_cast<Opinion>(k);
    }
    // Zero-probability tail entries are never selected by rounding slack.
    std::size_t k = last;
    while (k > 0 && probabilities[k] == 0.0) --k;
    return static_cast<Opinion>(k);
}

/// Impacts for every agent, K values per agent, agent-major.
class ImpactField {
public:
    ImpactField() = default;
    ImpactField(std::size_t agents, std::size_t opinions)
        : opinions_{opinions}, values_(agents * opinions, 0.0) {}

    std::size_t agents() const noexcept { return opinions_ == 0 ? 0 : values_.size() / opinions_; }
    std::size_t opinions() const noexcept { return opinions_; }

    std::span<const double> operator[](std::size_t i) const noexcept {
        return {values_.data() + i * opinions_, opinions_};
    }
    std::span<double> operator[](std::size_t i) noexcept { return {values_.data() + i * opinions_, opinions_}; }

    std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t opinions_ = 0;
    std::vector<double> values_;
};

/// Engine that evaluates `impact` agent by agent.
class NaiveEngine {
public:
    static constexpr std::string_view name = "naive";

    explicit NaiveEngine(const ModelParams& = {}) {}

    void agent_impact(const Configuration& config, std::size_t i, std::span<double> out) const {
        const auto v = impact(config, i);
        std::ranges::copy(v, out.begin());
    }

    ImpactField field(const Configuration& config, const Executor& exec = Executor::serial()) const {
        ImpactField out(config.size(), config.params().K);
        exec.parallel_for(config.size(), [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) agent_impact(config, i, out[i]);
        });
        return out;
    }
};

template <class E>
concept ImpactEngine = requires(const E& e, const Configuration& c, std::span<double> out, const Executor& x) {
    { e.field(c, x) } -> std::same_as<ImpactField>;
    e.agent_impact(c, std::size_t{}, out);
};

namespace detail {

template <ImpactEngine E>
Configuration step_synchronous(const Configuration& config, const E& engine, const Executor& exec) {
    const auto& p = config.params();
    const ImpactField field = engine.field(config, exec);
    const std::size_t next_index = config.step_index() + 1;
    std::vector<Opinion> next(config.size());
    exec.parallel_for(config.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<double> probs(p.K);
        for (std::size_t i = begin; i < end; ++i) {
            opinion_probabilities(field[i], p.temperature, probs);
            CounterStream rng{p.seed, StreamDomain::update, next_index, i};
            next[i] = sample_opinion(probs, rng.uniform());
        }
    });
    return config.with_opinions(next, next_index);
}

// Random-sequential sweep: agents are visited in a per-step random order and
// each sees the opinions already updated earlier in the same sweep.
template <ImpactEngine E>
Configuration step_asynchronous(const Configuration& config, const E& engine) {
    const auto& p = config.params();
    const std::size_t next_index = config.step_index() + 1;
    std::vector<std::size_t> order(config.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterStream shuffle{p.seed, StreamDomain::order, next_index, 0};
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);

    Configuration current = config;
    std::vector<double> impacts(p.K), probs(p.K);
    for (std::size_t i : order) {
        engine.agent_impact(current, i, impacts);
        opinion_probabilities(impacts, p.temperature, probs);
        CounterStream rng{p.seed, StreamDomain::update, next_index, i};
        current.set_opinion(i, sample_opinion(probs, rng.uniform()));
    }
    current.set_step_index(next_index);
    return current;
}

}  // namespace detail

/// One time step under the configured update scheme. Synchronous steps are
/// bit-identical for any executor width.
template <ImpactEngine E>
Configuration step(const Configuration& config, const E& engine, const Executor& exec = Executor::serial()) {
    if (config.params().update == UpdateScheme::asynchronous) return detail::step_asynchronous(config, engine);
    return detail::step_synchronous(config, engine, exec);
}

struct RunResult {
    Configuration final_state;
    std::vector<Configuration> snapshots;  ///< in schedule order
};

/// Evolves a fresh configuration for `params.steps` steps, capturing a copy at
/// each scheduled step index (0 is the initial state).
template <ImpactEngine E>
RunResult run(const ModelParams& params, std::span<const std::size_t> schedule, const E& engine,
              const Executor& exec = Executor::serial()) {
    for (std::size_t s : schedule)
        if (s > params.steps)
            throw ParameterError("snapshots", "step " + std::to_string(s) + " exceeds steps = " +
                                                  std::to_string(params.steps));
    RunResult result{init_configuration(params), {}};
    result.snapshots.resize(schedule.size());
    auto capture = [&](const Configuration& c) {
        for (std::size_t k = 0; k < schedule.size(); ++k)
            if (schedule[k] == c.step_index()) result.snapshots[k] = c;
    };
    capture(result.final_state);
    for (std::size_t t = 0; t < params.steps; ++t) {
        result.final_state = step(result.final_state, engine, exec);
        capture(result.final_state);
    }
    return result;
}

}  // namespace impact_lattice
