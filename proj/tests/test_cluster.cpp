#include "impact_lattice/cluster.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

using namespace impact_lattice;

namespace {

std::vector<Opinion> checkerboard(std::size_t n) {
    std::vector<Opinion> g(n * n);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<Opinion>((i / n + i % n) % 2);
    return g;
}

std::vector<Opinion> half_plane() {
    std::vector<Opinion> g(16, 0);
    std::fill(g.begin() + 8, g.end(), 1);
    return g;
}

std::vector<Opinion> random_grid(std::mt19937_64& rng, std::size_t cells, Opinion K) {
    std::uniform_int_distribution<Opinion> d(0, K - 1);
    std::vector<Opinion> g(cells);
    for (auto& v : g) v = d(rng);
    return g;
}

}  // namespace

TEST_CASE("uniform grid is one cluster", "[cluster]") {
    const auto lab = label_clusters(std::vector<Opinion>(9, 1), 3, 3);
    CHECK(lab.sizes == std::vector<std::size_t>{9});
    CHECK(std::ranges::all_of(lab.labels, [](std::size_t l) { return l == 0; }));
    CHECK(largest_cluster_fraction(lab) == 1.0);
    CHECK(cluster_size_histogram(lab) == std::map<std::size_t, std::size_t>{{9, 1}});
    CHECK(count_small_clusters(lab, 5) == 0);
}

TEST_CASE("checkerboard has only singletons", "[cluster]") {
    const auto lab = label_clusters(checkerboard(3), 3, 3);
    CHECK(lab.cluster_count() == 9);
    CHECK(largest_cluster_fraction(lab) == Catch::Approx(1.0 / 9.0));
    CHECK(cluster_size_histogram(lab) == std::map<std::size_t, std::size_t>{{1, 9}});
    CHECK(count_small_clusters(lab, 5) == 9);
    std::vector<std::size_t> expected(9);
    std::iota(expected.begin(), expected.end(), std::size_t{0});
    CHECK(lab.labels == expected);
}

TEST_CASE("half-plane split", "[cluster]") {
    const auto lab = label_clusters(half_plane(), 4, 4);
    CHECK(lab.sizes == std::vector<std::size_t>{8, 8});
    CHECK(largest_cluster_fraction(lab) == 0.5);
    CHECK(cluster_size_histogram(lab) == std::map<std::size_t, std::size_t>{{8, 2}});
    CHECK(count_small_clusters(lab, 5) == 0);
    CHECK(count_small_clusters(lab, 8) == 2);
    CHECK_THROWS_AS(count_small_clusters(lab, 0), ParameterError);
}

TEST_CASE("merging provisional labels", "[cluster]") {
    // A U shape whose arms meet only on the bottom row.
    const std::vector<Opinion> u{
        1, 0, 1,
        1, 0, 1,
        1, 1, 1,
    };
    const auto lab = label_clusters(u, 3, 3);
    CHECK(lab.sizes == std::vector<std::size_t>{7, 2});
    CHECK(lab.labels == std::vector<std::size_t>{0, 1, 0, 0, 1, 0, 0, 0, 0});
}

TEST_CASE("rectangular grids and size mismatch", "[cluster]") {
    const std::vector<Opinion> row{0, 0, 1, 1, 1, 0};
    const auto lab = label_clusters(row, 1, 6);
    CHECK(lab.sizes == std::vector<std::size_t>{2, 3, 1});
    CHECK_THROWS_AS(label_clusters(row, 2, 2), ParameterError);
}

TEST_CASE("Hoshen-Kopelman agrees with flood fill", "[cluster][oracle]") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> side(1, 10);
    std::uniform_int_distribution<Opinion> ks(1, 4);
    for (int n = 0; n < 200; ++n) {
        const std::size_t rows = side(rng), cols = side(rng);
        const auto grid = random_grid(rng, rows * cols, ks(rng));
        const auto lab = label_clusters(grid, rows, cols);
        const auto ref = oracle::flood_fill_components(grid, int(rows), int(cols));
        REQUIRE(oracle::same_partition(lab.labels, ref));
        REQUIRE(lab.cluster_count() == static_cast<std::size_t>(*std::ranges::max_element(ref) + 1));

        // Invariants: sizes sum to the grid, adjacency respects opinions, labels canonical.
        REQUIRE(std::accumulate(lab.sizes.begin(), lab.sizes.end(), std::size_t{0}) == grid.size());
        std::size_t total = 0;
        for (auto [size, count] : cluster_size_histogram(lab)) total += size * count;
        REQUIRE(total == grid.size());
        std::size_t next = 0;
        for (std::size_t l : lab.labels) {
            REQUIRE(l <= next);
            if (l == next) ++next;
        }
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c + 1 < cols; ++c) {
                const std::size_t i = r * cols + c;
                REQUIRE((lab.labels[i] == lab.labels[i + 1]) == (grid[i] == grid[i + 1]));
            }
    }
}

TEST_CASE("8x8 three-opinion grids match flood fill", "[cluster][oracle]") {
    std::mt19937_64 rng(88);
    for (int n = 0; n < 50; ++n) {
        const auto grid = random_grid(rng, 64, 3);
        REQUIRE(oracle::same_partition(label_clusters(grid, 8, 8).labels, oracle::flood_fill_components(grid, 8, 8)));
    }
}

TEST_CASE("relabelling opinions leaves the partition unchanged", "[cluster][property]") {
    std::mt19937_64 rng(6);
    for (int n = 0; n < 100; ++n) {
        const auto grid = random_grid(rng, 49, 4);
        std::vector<Opinion> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Opinion> permuted(grid.size());
        std::ranges::transform(grid, permuted.begin(), [&](Opinion o) { return perm[o]; });
        REQUIRE(label_clusters(grid, 7, 7) == label_clusters(permuted, 7, 7));
    }
}
