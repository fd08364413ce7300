#pragma once
// Sustain-probability fields and ensemble statistics.

#include "cluster.hpp"
#include "core.hpp"
#include "engine.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace impact_lattice {

/// Per-agent probability of keeping the current opinion at the next update.
struct SustainField {
    std::size_t side = 0;
    std::size_t step_index = 0;
    std::vector<double> values;
};

/// Analytic keep probability: the softmax weight of each agent's own opinion.
template <ImpactEngine E>
SustainField sustain_probability_field(const Configuration& config, const E& engine,
                                       const Executor& exec = Executor::serial()) {
    const auto& p = config.params();
    const ImpactField field = engine.field(config, exec);
    SustainField out{p.L, config.step_index(), std::vector<double>(config.size())};
    std::vector<double> probs(p.K);
    for (std::size_t i = 0; i < config.size(); ++i) {
        opinion_probabilities(field[i], p.temperature, probs);
        out.values[i] = probs[config[i].opinion];
    }
    return out;
}

/// Frequency estimate of the keep probability from `samples` independent
/// synchronous redraws per agent.
template <ImpactEngine E>
SustainField sustain_probability_montecarlo(const Configuration& config, const E& engine, std::size_t samples,
                                            const Executor& exec = Executor::serial()) {
    if (samples == 0) throw ParameterError("sustain-samples", "must be >= 1");
    const auto& p = config.params();
    const ImpactField field = engine.field(config, exec);
    SustainField out{p.L, config.step_index(), std::vector<double>(config.size())};
    exec.parallel_for(config.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<double> probs(p.K);
        for (std::size_t i = begin; i < end; ++i) {
            opinion_probabilities(field[i], p.temperature, probs);
            CounterStream rng{p.seed, StreamDomain::sustain_mc, config.step_index(), i};
            std::size_t kept = 0;
            for (std::size_t s = 0; s < samples; ++s) kept += sample_opinion(probs, rng.uniform()) == config[i].opinion;
            out.values[i] = static_cast<double>(kept) / static_cast<double>(samples);
        }
    });
    return out;
}

/// Mean sustain probability over cluster-boundary agents (at least one von
/// Neumann neighbour holding a different opinion) and over interior agents.
struct BoundarySplit {
    double boundary_mean = 0.0;
    double interior_mean = 0.0;
    std::size_t boundary_count = 0;
    std::size_t interior_count = 0;
};

inline bool is_boundary_agent(const Configuration& config, std::size_t i) {
    const std::size_t L = config.side();
    const std::size_t r = i / L, c = i % L;
    const Opinion own = config[i].opinion;
    return (c > 0 && config[i - 1].opinion != own) || (c + 1 < L && config[i + 1].opinion != own) ||
           (r > 0 && config[i - L].opinion != own) || (r + 1 < L && config[i + L].opinion != own);
}

inline BoundarySplit split_boundary_interior(const Configuration& config, const SustainField& field) {
    BoundarySplit out;
    double bsum = 0.0, isum = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (is_boundary_agent(config, i)) {
            bsum += field.values[i];
            ++out.boundary_count;
        } else {
            isum += field.values[i];
            ++out.interior_count;
        }
    }
    if (out.boundary_count) out.boundary_mean = bsum / static_cast<double>(out.boundary_count);
    if (out.interior_count) out.interior_mean = isum / static_cast<double>(out.interior_count);
    return out;
}

/// Clustering observables of one configuration.
struct RunObservables {
    double largest_fraction = 0.0;
    std::size_t cluster_count = 0;
    std::size_t small_cluster_count = 0;
    std::map<std::size_t, std::size_t> histogram;
};

inline RunObservables observe(const Configuration& config) {
    const ClusterLabeling labeling = label_clusters(config);
    return {largest_cluster_fraction(labeling), labeling.cluster_count(), count_small_clusters(labeling),
            cluster_size_histogram(labeling)};
}

struct EnsembleStats {
    ModelParams params;  ///< seed is the master seed; steps is the measurement step
    std::size_t runs = 0;
    double mean_largest_fraction = 0.0;
    double std_largest_fraction = 0.0;  ///< population standard deviation
    double mean_cluster_count = 0.0;
    double mean_small_cluster_count = 0.0;
    std::map<std::size_t, double> mean_histogram;  ///< size -> mean number of clusters of that size
};

/// Reduces per-run observables in run-index order.
inline EnsembleStats aggregate(const ModelParams& params, std::span<const RunObservables> runs) {
    EnsembleStats out;
    out.params = params;
    out.runs = runs.size();
    if (runs.empty()) return out;
    const double n = static_cast<double>(runs.size());
    for (const auto& r : runs) {
        out.mean_largest_fraction += r.largest_fraction;
        out.mean_cluster_count += static_cast<double>(r.cluster_count);
        out.mean_small_cluster_count += static_cast<double>(r.small_cluster_count);
        for (auto [size, count] : r.histogram) out.mean_histogram[size] += static_cast<double>(count);
    }
    out.mean_largest_fraction /= n;
    out.mean_cluster_count /= n;
    out.mean_small_cluster_count /= n;
    for (auto& [size, total] : out.mean_histogram) total /= n;
    double ss = 0.0;
    for (const auto& r : runs) ss += (r.largest_fraction - out.mean_largest_fraction) * (r.largest_fraction - out.mean_largest_fraction);
    out.std_largest_fraction = std::sqrt(ss / n);
    return out;
}

/// Parameters of ensemble member `run`: same model, seed derived from the master.
inline ModelParams member_params(const ModelParams& params, std::size_t run, std::size_t measure_step) {
    ModelParams p = params;
    p.seed = derive_run_seed(params.seed, run);
    p.steps = measure_step;
    return p;
}

/// Configurations of every ensemble member at `measure_step`, in run order.
/// Runs are spread across the executor; each run steps serially.
template <ImpactEngine E>
std::vector<Configuration> ensemble_states(const ModelParams& params, std::size_t n_runs, std::size_t measure_step,
                                           const E& engine, const Executor& exec = Executor::serial()) {
    params.validate();
    if (n_runs < 1) throw ParameterError("runs", "must be >= 1");
    if (measure_step > params.steps) throw ParameterError("steps", "measurement step exceeds steps");
    std::vector<Configuration> states(n_runs);
    exec.parallel_for(n_runs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const std::size_t schedule[] = {measure_step};
            states[r] = run(member_params(params, r, measure_step), schedule, engine).final_state;
        }
    });
    return states;
}

template <ImpactEngine E>
EnsembleStats ensemble_run(const ModelParams& params, std::size_t n_runs, std::size_t measure_step, const E& engine,
                           const Executor& exec = Executor::serial()) {
    const auto states = ensemble_states(params, n_runs, measure_step, engine, exec);
    std::vector<RunObservables> obs;
    obs.reserve(states.size());
    for (const auto& s : states) obs.push_back(observe(s));
    ModelParams recorded = params;
    recorded.steps = measure_step;
    return aggregate(recorded, obs);
}

enum class TrendAxis { alpha, temperature };

struct TrendStep {
    double from = 0.0;  ///< value of the varied parameter
    double to = 0.0;
    double delta_largest_fraction = 0.0;
    double delta_cluster_count = 0.0;
    bool largest_fraction_non_increasing = true;
    bool cluster_count_non_decreasing = true;
};

struct TrendReport {
    TrendAxis axis = TrendAxis::alpha;
    std::vector<TrendStep> steps;

    bool largest_fraction_non_increasing() const {
        return std::ranges::all_of(steps, &TrendStep::largest_fraction_non_increasing);
    }
    bool cluster_count_non_decreasing() const {
        return std::ranges::all_of(steps, &TrendStep::cluster_count_non_decreasing);
    }
    bool holds() const { return largest_fraction_non_increasing() && cluster_count_non_decreasing(); }
};

/// Pairwise monotonicity along an ordered sweep over alpha (or temperature).
/// All other model parameters must agree.
inline TrendReport trend_check(std::span<const EnsembleStats> stats, TrendAxis axis = TrendAxis::alpha) {
    if (stats.size() < 2) throw ParameterError("stats", "need at least two parameter points");
    auto varied = [axis](const ModelParams& p) { return axis == TrendAxis::alpha ? p.alpha : p.temperature; };
    auto fixed = [axis](ModelParams p) {
        if (axis == TrendAxis::alpha) p.alpha = 0.0;
        else p.temperature = 0.0;
        return p;
    };
    TrendReport report{axis, {}};
    for (std::size_t n = 1; n < stats.size(); ++n) {
        const auto& a = stats[n - 1];
        const auto& b = stats[n];
        if (!(fixed(a.params) == fixed(b.params)))
            throw ParameterError(axis == TrendAxis::alpha ? "alpha" : "temperature",
                                 "parameter points differ in more than the varied parameter");
        TrendStep s;
        s.from = varied(a.params);
        s.to = varied(b.params);
        s.delta_largest_fraction = b.mean_largest_fraction - a.mean_largest_fraction;
        s.delta_cluster_count = b.mean_cluster_count - a.mean_cluster_count;
        s.largest_fraction_non_increasing = s.delta_largest_fraction <= 0.0;
        s.cluster_count_non_decreasing = s.delta_cluster_count >= 0.0;
        report.steps.push_back(s);
    }
    return report;
}

}  // namespace impact_lattice
