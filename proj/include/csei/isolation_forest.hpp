#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "csei/errors.hpp"
#include "csei/matrix.hpp"
#include "csei/rng.hpp"

namespace csei {

// Expected unsuccessful-search path length in a BST of m nodes; the
// standard leaf adjustment and score denominator.
inline double avg_path_length(std::size_t m) {
  if (m <= 1) return 0.0;
  if (m == 2) return 1.0;
  constexpr double kEulerGamma = 0.5772156649;
  const double h = std::log(static_cast<double>(m - 1)) + kEulerGamma;
  return 2.0 * h - 2.0 * static_cast<double>(m - 1) / static_cast<double>(m);
}

struct IsolationForest {
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double split = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t size = 0;  // sample count at a leaf
  };
  struct Tree {
    std::vector<Node> nodes;  // nodes[0] is the root
  };

  std::vector<Tree> trees;
  std::size_t n_features = 0;
  std::size_t subsample_size = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline int isolation_depth_limit(std::size_t subsample_size) {
  int d = 0;
  std::size_t p = 1;
  while (p < subsample_size) {
    p <<= 1;
    ++d;
  }
  return d;  // ceil(log2(subsample_size))
}

struct TreeBuilder {
  const Matrix& data;
  std::mt19937_64 rng;
  int depth_limit;
  IsolationForest::Tree tree;

  std::int32_t leaf(std::size_t size) {
    tree.nodes.push_back(
        {-1, 0.0, -1, -1, static_cast<std::int32_t>(size)});
    return static_cast<std::int32_t>(tree.nodes.size() - 1);
  }

  std::int32_t build(std::vector<std::size_t>& rows, std::size_t begin,
                     std::size_t end, int depth) {
    const std::size_t count = end - begin;
    if (count <= 1 || depth >= depth_limit) return leaf(count);

    // Feature draw is uniform over all columns, re-drawn while the chosen
    // column is constant in this sample; a wholly constant sample is a leaf.
    bool any_spread = false;
    for (std::size_t c = 0; c < data.cols && !any_spread; ++c) {
      const double first = data.at(rows[begin], c);
      for (std::size_t i = begin + 1; i < end; ++i) {
        if (data.at(rows[i], c) != first) {
          any_spread = true;
          break;
        }
      }
    }
    if (!any_spread) return leaf(count);

    std::size_t feature = 0;
    double lo = 0.0, hi = 0.0;
    do {
      feature = uniform_below(rng, data.cols);
      lo = hi = data.at(rows[begin], feature);
      for (std::size_t i = begin + 1; i < end; ++i) {
        const double v = data.at(rows[i], feature);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    } while (lo == hi);

    const double split = uniform_range(rng, lo, hi);
    std::size_t mid = begin;
    for (std::size_t i = begin; i < end; ++i) {
      if (data.at(rows[i], feature) < split) {
        std::swap(rows[mid], rows[i]);
        ++mid;
      }
    }
    if (mid == begin || mid == end) return leaf(count);  // degenerate cut

    tree.nodes.push_back({static_cast<std::int32_t>(feature), split, -1, -1, 0});
    const std::int32_t self = static_cast<std::int32_t>(tree.nodes.size() - 1);
    const std::int32_t left = build(rows, begin, mid, depth + 1);
    const std::int32_t right = build(rows, mid, end, depth + 1);
    tree.nodes[self].left = left;
    tree.nodes[self].right = right;
    return self;
  }
};

// The root is node 0: build() appends a node before recursing into children.
inline double tree_path_length(const IsolationForest::Tree& tree,
                               const Matrix& data, std::size_t row) {
  double depth = 0.0;
  std::int32_t at = 0;
  while (true) {
    const IsolationForest::Node& node = tree.nodes[static_cast<std::size_t>(at)];
    if (node.feature < 0) {
      return depth + avg_path_length(static_cast<std::size_t>(node.size));
    }
    at = data.at(row, static_cast<std::size_t>(node.feature)) < node.split
             ? node.left
             : node.right;
    depth += 1.0;
  }
}

}  // namespace detail

// Fits n_trees isolation trees, each on a seeded uniform subsample drawn
// without replacement. Splits pick a random feature and a uniform value
// between the sample's min and max for it; building stops at isolation or
// at depth ceil(log2(subsample_size)).
inline IsolationForest fit_isolation_forest(const Matrix& data,
                                            std::size_t n_trees,
                                            std::size_t subsample_size,
                                            std::uint64_t seed) {
  if (data.rows < 2) {
    throw Error(ErrorKind::data, "isolation forest needs at least 2 rows");
  }
  if (n_trees < 1) {
    throw Error(ErrorKind::config, "isolation forest needs n_trees >= 1");
  }
  if (subsample_size < 2 || subsample_size > data.rows) {
    throw Error(ErrorKind::config,
                "subsample_size must lie in [2, row count]");
  }

  IsolationForest forest;
  forest.n_features = data.cols;
  forest.subsample_size = subsample_size;
  forest.seed = seed;
  forest.trees.reserve(n_trees);

  std::uint64_t derive_state = seed;
  std::vector<std::size_t> indices(data.rows);
  for (std::size_t t = 0; t < n_trees; ++t) {
    detail::TreeBuilder builder{
        data, std::mt19937_64(splitmix64(derive_state)),
        detail::isolation_depth_limit(subsample_size),
        {}};

    std::iota(indices.begin(), indices.end(), std::size_t{0});
    for (std::size_t i = 0; i < subsample_size; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(
                  uniform_below(builder.rng, data.rows - i));
      std::swap(indices[i], indices[j]);
    }
    std::vector<std::size_t> sample(indices.begin(),
                                    indices.begin() + subsample_size);
    builder.build(sample, 0, sample.size(), 0);
    forest.trees.push_back(std::move(builder.tree));
  }
  return forest;
}

// score(x) = 2^(-E[h(x)] / c(subsample_size)), E over trees.
inline std::vector<double> anomaly_scores(const IsolationForest& forest,
                                          const Matrix& data) {
  if (data.cols != forest.n_features) {
    throw Error(ErrorKind::dimension,
                "anomaly_scores: column count differs from fit");
  }
  const double denom = avg_path_length(forest.subsample_size);
  std::vector<double> scores(data.rows, 0.0);
  for (std::size_t r = 0; r < data.rows; ++r) {
    // Normalize each path before averaging: when every tree returns the
    // same path (a single root leaf), h/denom is exactly 1 and the score
    // lands on 0.5 with no rounding drift.
    double total = 0.0;
    for (const IsolationForest::Tree& tree : forest.trees) {
      total += detail::tree_path_length(tree, data, r) / denom;
    }
    const double mean_ratio = total / static_cast<double>(forest.trees.size());
    scores[r] = std::exp2(-mean_ratio);
  }
  return scores;
}

}  // namespace csei
