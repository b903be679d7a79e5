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

#include "hydraq/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <gtest/gtest.h>
#include <random>

#include "hydraq/errors.hpp"

namespace hydraq {
namespace {

struct Problem {
    Matrix x;
    std::vector<double> y;
};

Problem random_problem(std::uint64_t seed, std::size_t n, std::size_t d) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Problem p{Matrix(n, d), {}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            p.x(i, j) = u(rng);
        }
        p.y.push_back(std::sin(3.0 * p.x(i, 0)) + p.x(i, 1 % d) * p.x(i, 0) +
                      0.1 * u(rng));
    }
    return p;
}

double train_mse(const BoostedEnsemble &m, const Problem &p) {
    const auto yhat = predict(m, p.x);
    double s = 0.0;
    for (std::size_t i = 0; i < p.y.size(); ++i) {
        s += (p.y[i] - yhat[i]) * (p.y[i] - yhat[i]);
    }
    return s / static_cast<double>(p.y.size());
}

TEST(Boosted, ConstantTarget) {
    auto p = random_problem(1, 40, 3);
    std::fill(p.y.begin(), p.y.end(), 4.25);
    const auto m = fit_boosted(p.x, p.y, {}, 1);
    for (double v : predict(m, p.x)) {
        EXPECT_DOUBLE_EQ(v, 4.25);
    }
    for (const auto &t : m.trees) {
        EXPECT_EQ(t.nodes.size(), 1u);
    }
}

TEST(Boosted, StepFunctionWithStumps) {
    Problem p{Matrix(41, 1), {}};
    for (int i = 0; i <= 40; ++i) {
        const double x = -1.0 + i / 20.0;
        p.x(static_cast<std::size_t>(i), 0) = x;
        p.y.push_back(x > 0.0 ? 1.0 : 0.0);
    }
    BoostParams bp;
    bp.num_trees = 50;
    bp.max_depth = 1;
    const auto m = fit_boosted(p.x, p.y, bp, 2);
    EXPECT_LT(train_mse(m, p), 1e-3);

    // Hand-built stump oracle: the first tree splits exactly at the step.
    const auto &root = m.trees[0].nodes[0];
    EXPECT_EQ(root.feature, 0);
    EXPECT_GE(root.threshold, 0.0);
    EXPECT_LT(root.threshold, 0.05);
}

TEST(Boosted, SingleTreeMemorizes) {
    const auto p = random_problem(3, 24, 4);
    BoostParams bp;
    bp.num_trees = 1;
    bp.max_depth = 8;
    bp.min_leaf = 1;
    bp.shrinkage = 1.0;
    const auto m = fit_boosted(p.x, p.y, bp, 3);
    const auto yhat = predict(m, p.x);
    for (std::size_t i = 0; i < p.y.size(); ++i) {
        EXPECT_NEAR(yhat[i], p.y[i], 1e-12);
    }
    EXPECT_LE(m.trees[0].depth(), 8u);
}

TEST(Boosted, TrainingMseNonIncreasing) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = random_problem(seed, 80, 3);
        BoostParams bp;
        bp.num_trees = 30;
        bp.subsample = 0.7;
        bp.min_leaf = 3;
        auto full = fit_boosted(p.x, p.y, bp, seed);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k <= 30; ++k) {
            BoostedEnsemble prefix = full;
            prefix.trees.resize(k);
            const double now = train_mse(prefix, p);
            EXPECT_LE(now, prev + 1e-12);
            prev = now;
        }
    }
}

TEST(Boosted, DepthBound) {
    const auto p = random_problem(4, 100, 3);
    BoostParams bp;
    bp.max_depth = 2;
    bp.num_trees = 10;
    for (const auto &t : fit_boosted(p.x, p.y, bp, 4).trees) {
        EXPECT_LE(t.depth(), 2u);
    }
}

TEST(Boosted, ZeroShrinkageIsMeanPredictor) {
    const auto p = random_problem(5, 30, 2);
    BoostParams bp;
    bp.shrinkage = 0.0;
    const auto m = fit_boosted(p.x, p.y, bp, 5);
    for (double v : predict(m, p.x)) {
        EXPECT_DOUBLE_EQ(v, m.base_prediction);
    }
}

TEST(Boosted, ZeroTrees) {
    const auto p = random_problem(6, 20, 2);
    BoostParams bp;
    bp.num_trees = 0;
    const auto m = fit_boosted(p.x, p.y, bp, 6);
    EXPECT_TRUE(m.trees.empty());
    for (double v : predict(m, p.x)) {
        EXPECT_DOUBLE_EQ(v, m.base_prediction);
    }
}

TEST(Boosted, ColumnPermutationInvariance) {
    const auto p = random_problem(7, 50, 3);
    const auto m = fit_boosted(p.x, p.y, {}, 7);
    const std::size_t perm[] = {2, 0, 1}; // new column c holds old perm[c]
    Matrix xp(p.x.rows(), 3);
    for (std::size_t i = 0; i < p.x.rows(); ++i) {
        for (std::size_t c = 0; c < 3; ++c) {
            xp(i, c) = p.x(i, perm[c]);
        }
    }
    auto mp = m;
    for (auto &t : mp.trees) {
        for (auto &node : t.nodes) {
            if (node.feature >= 0) {
                for (int c = 0; c < 3; ++c) {
                    if (perm[c] == static_cast<std::size_t>(node.feature)) {
                        node.feature = c;
                        break;
                    }
                }
            }
        }
    }
    EXPECT_EQ(predict(m, p.x), predict(mp, xp));
}

TEST(Boosted, Deterministic) {
    const auto p = random_problem(8, 70, 3);
    BoostParams bp;
    bp.subsample = 0.6;
    EXPECT_EQ(predict(fit_boosted(p.x, p.y, bp, 11), p.x),
              predict(fit_boosted(p.x, p.y, bp, 11), p.x));
}

TEST(Boosted, Errors) {
    EXPECT_THROW(fit_boosted(Matrix(0, 2), {}, {}, 1), DataError);
    const auto p = random_problem(9, 10, 2);
    EXPECT_THROW(predict(fit_boosted(p.x, p.y, {}, 1), Matrix(2, 3)),
                 ShapeError);
    BoostParams bad;
    bad.subsample = 0.0;
    EXPECT_THROW(fit_boosted(p.x, p.y, bad, 1), ConfigError);
}

TEST(Search, SingleTrial) {
    const auto p = random_problem(10, 60, 3);
    SearchSpace s;
    s.budget = 1;
    s.trees = {10, 20};
    const auto r = random_search(s, p.x, p.y);
    ASSERT_EQ(r.trials.size(), 1u);
    EXPECT_EQ(r.best_index, 0u);
    EXPECT_EQ(r.best.num_trees, r.trials[0].params.num_trees);
}

TEST(Search, DeterministicAndArgmin) {
    const auto p = random_problem(12, 80, 3);
    SearchSpace s;
    s.budget = 8;
    s.trees = {10, 60};
    const auto a = random_search(s, p.x, p.y);
    const auto b = random_search(s, p.x, p.y);
    EXPECT_EQ(a.best_index, b.best_index);
    std::vector<double> v;
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        EXPECT_EQ(a.trials[i].validation_mse, b.trials[i].validation_mse);
        EXPECT_EQ(a.trials[i].index, i);
        v.push_back(a.trials[i].validation_mse);
        const auto &tp = a.trials[i].params;
        EXPECT_GE(tp.num_trees, 10u);
        EXPECT_LE(tp.num_trees, 60u);
        EXPECT_GE(tp.shrinkage, 0.03);
        EXPECT_LE(tp.subsample, 1.0);
    }
    std::sort(v.begin(), v.end());
    EXPECT_LE(a.trials[a.best_index].validation_mse, v[v.size() / 2]);
    EXPECT_EQ(a.trials[a.best_index].validation_mse, v.front());
}

TEST(Search, InvalidSpace) {
    const auto p = random_problem(13, 20, 2);
    SearchSpace s;
    s.budget = 0;
    EXPECT_THROW(random_search(s, p.x, p.y), ConfigError);
    s.budget = 2;
    s.depth = {5, 2};
    EXPECT_THROW(random_search(s, p.x, p.y), ConfigError);
    s.depth = {2, 3};
    EXPECT_THROW(random_search(s, p.x, p.y, 1.0), ConfigError);
}

} // namespace
} // namespace hydraq
