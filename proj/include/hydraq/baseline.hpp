// Copyright 2026 The hydraq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hydraq/matrix.hpp"

namespace hydraq {

/// Leaf when `feature` < 0. Rows with x[feature] <= threshold go left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes; // nodes[0] is the root

    [[nodiscard]] double predict(std::span<const double> x) const;
    [[nodiscard]] std::size_t depth() const;
};

struct BoostParams {
    std::size_t num_trees = 100;
    std::size_t max_depth = 3;
    double shrinkage = 0.1;
    std::size_t min_leaf = 1;
    double subsample = 1.0;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

struct BoostedEnsemble {
    std::size_t num_features = 0;
    double base_prediction = 0.0;
    double shrinkage = 0.1;
    std::vector<RegressionTree> trees;

    [[nodiscard]] double predict(std::span<const double> x) const;
};

/**
 * Least-squares gradient boosting. Each tree's splits are searched on a
 * seeded row subsample; its leaf values are then set to the mean residual of
 * all training rows reaching the leaf, so training MSE never increases.
 */
BoostedEnsemble fit_boosted(const Matrix &x, std::span<const double> y,
                            const BoostParams &params, std::uint64_t seed);

/// Throws ShapeError on a feature-count mismatch.
std::vector<double> predict(const BoostedEnsemble &model, const Matrix &x);

template <typename T> struct Range {
    T lo;
    T hi;
};

struct SearchSpace {
    Range<std::size_t> trees{50, 400};
    Range<std::size_t> depth{2, 6};
    Range<double> shrinkage{0.03, 0.3};
    Range<std::size_t> min_leaf{1, 10};
    Range<double> subsample{0.6, 1.0};
    std::size_t budget = 40;
    std::uint64_t seed = 7;

    void validate() const;
};

struct SearchTrial {
    std::size_t index = 0;
    BoostParams params;
    double validation_mse = 0.0;
};

struct SearchResult {
    BoostParams best;
    std::size_t best_index = 0;
    std::vector<SearchTrial> trials; // ordered by index
};

/// Uniform random sampling of `space`; every trial trains on the same
/// seeded inner split and is scored by validation MSE. Ties go to the
/// lowest trial index.
SearchResult random_search(const SearchSpace &space, const Matrix &x,
                           std::span<const double> y,
                           double validation_fraction = 0.2);

} // namespace hydraq
