#include "impact_lattice/observables.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace impact_lattice;

TEST_CASE("sustain field bounds", "[observables][sustain]") {
    std::mt19937_64 rng(21);
    for (double T : {0.0, 0.3, 1.0, 5.0}) {
        ModelParams p{.L = 9, .K = 3, .alpha = 3.0, .temperature = T};
        const auto c = oracle::random_configuration(p, rng);
        const auto field = sustain_probability_field(c, KernelEngine{p});
        REQUIRE(field.values.size() == c.size());
        for (double v : field.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (T == 0.0) CHECK((v == 0.0 || v == 1.0));
        }
    }
}

TEST_CASE("single agent keeps its opinion with logistic probability", "[observables][sustain]") {
    for (double T : {0.2, 1.0, 4.0}) {
        ModelParams p{.L = 1, .K = 2, .temperature = T};
        p.impact_scale = 1.0;
        const double s = 0.65;
        const Configuration c{p, {Agent{1, 0.1, s}}};
        const auto field = sustain_probability_field(c, NaiveEngine{p});
        const double expected = std::exp(s / T) / (std::exp(s / T) + 1.0);
        CHECK(field.values[0] == Catch::Approx(expected).epsilon(1e-14));
        CHECK(field.values[0] > 0.5);
    }
}

TEST_CASE("analytic sustain probability matches resampled keep frequency", "[observables][sustain][oracle]") {
    ModelParams p{.L = 5, .K = 2, .alpha = 2.0, .temperature = 1.0, .seed = 31};
    p.impact_scale = 1.0;
    const auto c = init_configuration(p);
    const auto analytic = sustain_probability_field(c, NaiveEngine{p});
    constexpr std::size_t samples = 100000;

    // Independent resampling: std::mt19937_64 draws against the softmax of the naive impacts.
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto I = impact(c, i);
        const double keep_weight = std::exp(I[c[i].opinion] / p.temperature);
        double total = 0.0;
        for (double v : I) total += std::exp(v / p.temperature);
        std::size_t kept = 0;
        for (std::size_t s = 0; s < samples; ++s) kept += unit(rng) < keep_weight / total;
        const double freq = static_cast<double>(kept) / samples;
        const double pa = analytic.values[i];
        const double sigma = std::sqrt(pa * (1.0 - pa) / samples);
        CHECK(std::fabs(freq - pa) <= 3.0 * sigma + 1e-12);
    }

    const auto mc = sustain_probability_montecarlo(c, KernelEngine{p}, samples);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double pa = analytic.values[i];
        CHECK(std::fabs(mc.values[i] - pa) <= 3.0 * std::sqrt(pa * (1.0 - pa) / samples) + 1e-12);
    }
    CHECK_THROWS_AS(sustain_probability_montecarlo(c, KernelEngine{p}, 0), ParameterError);
}

TEST_CASE("boundary and interior split", "[observables]") {
    ModelParams p{.L = 4, .K = 2};
    std::vector<Agent> agents(16, Agent{0, 0.5, 0.5});
    for (std::size_t i = 8; i < 16; ++i) agents[i].opinion = 1;
    const Configuration c{p, agents};
    SustainField field{4, 0, std::vector<double>(16)};
    for (std::size_t i = 0; i < 16; ++i) field.values[i] = (i / 4 == 1 || i / 4 == 2) ? 0.2 : 0.9;
    const auto split = split_boundary_interior(c, field);
    CHECK(split.boundary_count == 8);
    CHECK(split.interior_count == 8);
    CHECK(split.boundary_mean == Catch::Approx(0.2));
    CHECK(split.interior_mean == Catch::Approx(0.9));
}

TEST_CASE("ensemble_run", "[observables][ensemble]") {
    const ModelParams p{.L = 12, .K = 2, .alpha = 3.0, .temperature = 1.0, .steps = 20, .seed = 5};
    const KernelEngine engine{p};

    SECTION("one run reproduces that run's observables") {
        const auto stats = ensemble_run(p, 1, 20, engine);
        const auto single = observe(run(member_params(p, 0, 20), {}, engine).final_state);
        CHECK(stats.runs == 1);
        CHECK(stats.std_largest_fraction == 0.0);
        CHECK(stats.mean_largest_fraction == single.largest_fraction);
        CHECK(stats.mean_cluster_count == static_cast<double>(single.cluster_count));
        CHECK(stats.mean_small_cluster_count == static_cast<double>(single.small_cluster_count));
    }
    SECTION("same master seed, any executor width, same statistics") {
        const auto a = ensemble_run(p, 6, 20, engine);
        const auto b = ensemble_run(p, 6, 20, engine, Executor{4});
        CHECK(a.mean_largest_fraction == b.mean_largest_fraction);
        CHECK(a.std_largest_fraction == b.std_largest_fraction);
        CHECK(a.mean_cluster_count == b.mean_cluster_count);
        CHECK(a.mean_histogram == b.mean_histogram);
        CHECK(a.runs == 6);
        CHECK(a.std_largest_fraction >= 0.0);
        double cells = 0.0;
        for (auto [size, mean] : a.mean_histogram) cells += static_cast<double>(size) * mean;
        CHECK(cells == Catch::Approx(144.0));
    }
    SECTION("members use distinct derived seeds") {
        CHECK(derive_run_seed(5, 0) != derive_run_seed(5, 1));
        CHECK(member_params(p, 3, 10).seed == derive_run_seed(5, 3));
        CHECK(member_params(p, 3, 10).steps == 10);
    }
    SECTION("invalid arguments") {
        CHECK_THROWS_AS(ensemble_run(p, 0, 20, engine), ParameterError);
        CHECK_THROWS_AS(ensemble_run(p, 1, 21, engine), ParameterError);
    }
}

TEST_CASE("trend_check", "[observables][trend]") {
    auto stats_at = [](double alpha, double frac, double clusters) {
        EnsembleStats s;
        s.params = {.L = 41, .K = 2, .alpha = alpha, .temperature = 1.0, .steps = 1000};
        s.runs = 10;
        s.mean_largest_fraction = frac;
        s.mean_cluster_count = clusters;
        return s;
    };
    SECTION("identical points hold with zero deltas") {
        const std::vector<EnsembleStats> s{stats_at(2, 0.7, 10), stats_at(2, 0.7, 10)};
        const auto r = trend_check(s);
        CHECK(r.holds());
        CHECK(r.steps.at(0).delta_largest_fraction == 0.0);
        CHECK(r.steps.at(0).delta_cluster_count == 0.0);
    }
    SECTION("rising largest-cluster fraction is a violation") {
        const std::vector<EnsembleStats> s{stats_at(2, 0.5, 10), stats_at(3, 0.9, 12)};
        const auto r = trend_check(s);
        CHECK_FALSE(r.largest_fraction_non_increasing());
        CHECK(r.cluster_count_non_decreasing());
        CHECK(r.steps[0].delta_largest_fraction == Catch::Approx(0.4));
        CHECK(r.steps[0].from == 2.0);
        CHECK(r.steps[0].to == 3.0);
    }
    SECTION("falling cluster count is a violation") {
        const std::vector<EnsembleStats> s{stats_at(1, 1.0, 1), stats_at(3, 0.5, 30), stats_at(6, 0.3, 20)};
        const auto r = trend_check(s);
        CHECK(r.largest_fraction_non_increasing());
        CHECK_FALSE(r.cluster_count_non_decreasing());
        CHECK(r.steps.size() == 2);
    }
    SECTION("points must differ only in the swept parameter") {
        auto a = stats_at(2, 0.9, 3), b = stats_at(3, 0.5, 9);
        b.params.temperature = 2.0;
        const std::vector<EnsembleStats> s{a, b};
        CHECK_THROWS_AS(trend_check(s), ParameterError);
        CHECK_THROWS_AS(trend_check(std::span<const EnsembleStats>(s).first(1)), ParameterError);
        b.params.alpha = 2.0;
        const std::vector<EnsembleStats> t{a, b};
        CHECK(trend_check(t, TrendAxis::temperature).steps.size() == 1);
    }
}
