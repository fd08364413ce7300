#pragma once
// Hoshen-Kopelman labelling of same-opinion clusters under von Neumann
// (4-neighbour) adjacency with open boundaries.

#include "core.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <vector>

namespace impact_lattice {

struct ClusterLabeling {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> labels;  ///< row-major, canonical: 0,1,2,... in first-encounter order
    std::vector<std::size_t> sizes;   ///< sizes[label]

    std::size_t cluster_count() const noexcept { return sizes.size(); }

    friend bool operator==(const ClusterLabeling&, const ClusterLabeling&) = default;
};

namespace detail {

class UnionFind {
public:
    std::size_t make() {
        parent_.push_back(parent_.size());
        size_.push_back(1);
        return parent_.size() - 1;
    }

    std::size_t find(std::size_t x) {
        std::size_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) x = std::exchange(parent_[x], root);
        return root;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

}  // namespace detail

/// Labels a rows x cols grid of opinions (row-major).
inline ClusterLabeling label_clusters(std::span<const Opinion> opinions, std::size_t rows, std::size_t cols) {
    if (opinions.size() != rows * cols) throw ParameterError("grid", "opinion count does not match rows*cols");
    ClusterLabeling out{rows, cols, std::vector<std::size_t>(opinions.size()), {}};
    detail::UnionFind uf;

    // Raster pass: provisional label from the left/up neighbours, merging when both match.
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t i = r * cols + c;
            const bool left = c > 0 && opinions[i - 1] == opinions[i];
            const bool up = r > 0 && opinions[i - cols] == opinions[i];
            if (left && up) {
                out.labels[i] = out.labels[i - 1];
                uf.unite(out.labels[i - 1], out.labels[i - cols]);
            } else if (left) {
                out.labels[i] = out.labels[i - 1];
            } else if (up) {
                out.labels[i] = out.labels[i - cols];
            } else {
                out.labels[i] = uf.make();
            }
        }
    }

    // Canonical relabel in row-major first-encounter order.
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> canonical;
    for (auto& label : out.labels) {
        const std::size_t root = uf.find(label);
        if (root >= canonical.size()) canonical.resize(root + 1, unset);
        if (canonical[root] == unset) {
            canonical[root] = out.sizes.size();
            out.sizes.push_back(0);
        }
        label = canonical[root];
        ++out.sizes[label];
    }
    return out;
}

inline ClusterLabeling label_clusters(const Configuration& config) {
    return label_clusters(config.opinions(), config.side(), config.side());
}

/// S_max / L^2.
inline double largest_cluster_fraction(const ClusterLabeling& labeling) {
    if (labeling.sizes.empty()) return 0.0;
    return static_cast<double>(*std::ranges::max_element(labeling.sizes)) /
           static_cast<double>(labeling.labels.size());
}

/// Number of clusters of each size.
inline std::map<std::size_t, std::size_t> cluster_size_histogram(const ClusterLabeling& labeling) {
    std::map<std::size_t, std::size_t> hist;
    for (std::size_t s : labeling.sizes) ++hist[s];
    return hist;
}

inline constexpr std::size_t kSmallClusterThreshold = 5;

/// Clusters with at most `threshold` members.
inline std::size_t count_small_clusters(const ClusterLabeling& labeling,
                                        std::size_t threshold = kSmallClusterThreshold) {
    if (threshold < 1) throw ParameterError("threshold", "must be >= 1");
    return static_cast<std::size_t>(std::ranges::count_if(labeling.sizes, [&](std::size_t s) { return s <= threshold; }));
}

}  // namespace impact_lattice
