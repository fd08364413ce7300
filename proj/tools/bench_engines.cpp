// Times the naive and kernel engines on the same trajectory and reports the speed-up.
//
//   bench_engines [--L 41] [--K 2] [--alpha 3] [--temperature 1] [--steps 1000] [--naive-steps N]
//
// The naive engine is slow (a pow() per pair), so --naive-steps can time a
// shorter prefix; its per-step cost is then extrapolated to --steps.

#include "impact_lattice/core.hpp"
#include "impact_lattice/kernel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>

namespace {

template <class Engine>
double seconds_per_step(const impact_lattice::ModelParams& params, std::size_t steps, const Engine& engine,
                        impact_lattice::Configuration& last) {
    auto config = impact_lattice::init_configuration(params);
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t t = 0; t < steps; ++t) config = impact_lattice::step(config, engine);
    const auto stop = std::chrono::steady_clock::now();
    last = config;
    return std::chrono::duration<double>(stop - start).count() / static_cast<double>(steps);
}

}  // namespace

int main(int argc, char** argv) {
    impact_lattice::ModelParams params{.alpha = 3.0, .temperature = 1.0, .steps = 1000, .seed = 1};
    std::size_t naive_steps = 0;
    CLI::App app{"naive vs kernel engine timing"};
    app.add_option("--L", params.L);
    app.add_option("--K", params.K);
    app.add_option("--alpha", params.alpha);
    app.add_option("--temperature", params.temperature);
    app.add_option("--steps", params.steps);
    app.add_option("--naive-steps", naive_steps, "steps timed for the naive engine (default: --steps)");
    CLI11_PARSE(app, argc, argv);
    if (naive_steps == 0 || naive_steps > params.steps) naive_steps = params.steps;
    if (params.steps == 0) return 2;

    impact_lattice::Configuration kernel_state, naive_state;
    const impact_lattice::KernelEngine kernel{params};
    const impact_lattice::NaiveEngine naive{params};
    const double kernel_step = seconds_per_step(params, params.steps, kernel, kernel_state);
    const double naive_step = seconds_per_step(params, naive_steps, naive, naive_state);

    std::printf("L=%zu K=%zu alpha=%g T=%g steps=%zu\n", params.L, params.K, params.alpha, params.temperature,
                params.steps);
    std::printf("kernel: %.6f s/step, %.3f s/run\n", kernel_step, kernel_step * static_cast<double>(params.steps));
    std::printf("naive:  %.6f s/step, %.3f s/run%s\n", naive_step, naive_step * static_cast<double>(params.steps),
                naive_steps < params.steps ? " (extrapolated)" : "");
    std::printf("speedup: %.1fx\n", naive_step / kernel_step);
    return 0;
}
