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
#include <limits>
#include <numeric>
#include <random>

#include "hydraq/datasets.hpp"
#include "hydraq/errors.hpp"

namespace hydraq {

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

class TreeBuilder {
  public:
    TreeBuilder(const Matrix &x, std::span<const double> residual,
                const BoostParams &params)
        : x_(x), r_(residual), params_(params), goes_left_(x.rows(), 0) {}

    /// `sorted[f]` lists the node's rows ordered by feature f.
    RegressionTree build(std::vector<std::vector<std::size_t>> sorted) {
        RegressionTree tree;
        grow(tree, std::move(sorted), 0);
        return tree;
    }

  private:
    int grow(RegressionTree &tree, std::vector<std::vector<std::size_t>> sorted,
             std::size_t depth) {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        const auto &rows = sorted[0];
        const auto n = rows.size();
        double sum = 0.0;
        for (auto r : rows) {
            sum += r_[r];
        }
        tree.nodes[id].value = sum / static_cast<double>(n);
        if (depth >= params_.max_depth || n < 2 * params_.min_leaf) {
            return id;
        }
        const auto choice = best_split(sorted, sum);
        if (choice.feature < 0) {
            return id;
        }
        const auto f = static_cast<std::size_t>(choice.feature);
        for (auto r : rows) {
            goes_left_[r] = x_(r, f) <= choice.threshold ? 1 : 0;
        }
        std::vector<std::vector<std::size_t>> left(sorted.size());
        std::vector<std::vector<std::size_t>> right(sorted.size());
        for (std::size_t g = 0; g < sorted.size(); ++g) {
            for (auto r : sorted[g]) {
                (goes_left_[r] ? left[g] : right[g]).push_back(r);
            }
        }
        sorted.clear();
        const int l = grow(tree, std::move(left), depth + 1);
        const int rr = grow(tree, std::move(right), depth + 1);
        auto &node = tree.nodes[id];
        node.feature = choice.feature;
        node.threshold = choice.threshold;
        node.left = l;
        node.right = rr;
        return id;
    }

    SplitChoice best_split(const std::vector<std::vector<std::size_t>> &sorted,
                           double total) const {
        const double n = static_cast<double>(sorted[0].size());
        const double parent = total * total / n;
        SplitChoice best;
        // Gains below this are rounding noise on a pure node.
        const double floor = 1e-12 * (1.0 + std::abs(parent));
        for (std::size_t f = 0; f < sorted.size(); ++f) {
            const auto &order = sorted[f];
            double left_sum = 0.0;
            for (std::size_t i = 1; i < order.size(); ++i) {
                left_sum += r_[order[i - 1]];
                const double a = x_(order[i - 1], f);
                const double b = x_(order[i], f);
                if (!(a < b) || i < params_.min_leaf ||
                    order.size() - i < params_.min_leaf) {
                    continue;
                }
                const double nl = static_cast<double>(i);
                const double nr = n - nl;
                const double right_sum = total - left_sum;
                const double gain = left_sum * left_sum / nl +
                                    right_sum * right_sum / nr - parent;
                if (gain > floor && gain > best.gain) {
                    best.gain = gain;
                    best.feature = static_cast<int>(f);
                    double mid = a + (b - a) / 2.0;
                    if (!(mid < b)) {
                        mid = a;
                    }
                    best.threshold = mid;
                }
            }
        }
        return best;
    }

    const Matrix &x_;
    std::span<const double> r_;
    const BoostParams &params_;
    std::vector<char> goes_left_;
};

std::size_t leaf_of(const RegressionTree &tree, std::span<const double> x) {
    std::size_t i = 0;
    while (tree.nodes[i].feature >= 0) {
        const auto &n = tree.nodes[i];
        i = static_cast<std::size_t>(
            x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                  : n.right);
    }
    return i;
}

double mse_of(std::span<const double> y, std::span<const double> yhat) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - yhat[i];
        s += d * d;
    }
    return s / static_cast<double>(y.size());
}

} // namespace

double RegressionTree::predict(std::span<const double> x) const {
    return nodes[leaf_of(*this, x)].value;
}

std::size_t RegressionTree::depth() const {
    std::vector<std::size_t> d(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return deepest;
}

void BoostParams::validate() const {
    if (!(shrinkage >= 0.0 && shrinkage <= 1.0)) {
        throw ConfigError("shrinkage must lie in [0, 1]");
    }
    if (!(subsample > 0.0 && subsample <= 1.0)) {
        throw ConfigError("subsample must lie in (0, 1]");
    }
    if (min_leaf < 1) {
        throw ConfigError("min_leaf must be >= 1");
    }
}

double BoostedEnsemble::predict(std::span<const double> x) const {
    double s = 0.0;
    for (const auto &t : trees) {
        s += t.predict(x);
    }
    return base_prediction + shrinkage * s;
}

BoostedEnsemble fit_boosted(const Matrix &x, std::span<const double> y,
                            const BoostParams &params, std::uint64_t seed) {
    params.validate();
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n == 0 || d == 0) {
        throw DataError("boosting needs at least one row and one feature");
    }
    if (y.size() != n) {
        throw ShapeError("boosting: " + std::to_string(n) + " rows but " +
                         std::to_string(y.size()) + " targets");
    }

    BoostedEnsemble model;
    model.num_features = d;
    model.shrinkage = params.shrinkage;
    model.base_prediction =
        std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

    std::vector<std::vector<std::size_t>> presorted(d);
    for (std::size_t f = 0; f < d; ++f) {
        auto &order = presorted[f];
        order.resize(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
            return x(a, f) < x(b, f);
        });
    }

    std::vector<double> pred(n, model.base_prediction);
    std::vector<double> residual(n);
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::vector<char> sampled(n, 1);
    const auto n_sub = std::clamp<std::size_t>(
        static_cast<std::size_t>(
            std::llround(params.subsample * static_cast<double>(n))),
        1, n);
    std::mt19937_64 rng(seed);

    for (std::size_t t = 0; t < params.num_trees; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] = y[i] - pred[i];
        }
        if (n_sub < n) {
            std::shuffle(rows.begin(), rows.end(), rng);
            std::fill(sampled.begin(), sampled.end(), 0);
            for (std::size_t i = 0; i < n_sub; ++i) {
                sampled[rows[i]] = 1;
            }
        }
        std::vector<std::vector<std::size_t>> sorted(d);
        for (std::size_t f = 0; f < d; ++f) {
            sorted[f].reserve(n_sub);
            for (auto r : presorted[f]) {
                if (sampled[r]) {
                    sorted[f].push_back(r);
                }
            }
        }
        TreeBuilder builder(x, residual, params);
        auto tree = builder.build(std::move(sorted));

        // Refit leaves on every training row.
        std::vector<double> sums(tree.nodes.size(), 0.0);
        std::vector<std::size_t> counts(tree.nodes.size(), 0);
        std::vector<std::size_t> leaf(n);
        for (std::size_t i = 0; i < n; ++i) {
            leaf[i] = leaf_of(tree, x.row(i));
            sums[leaf[i]] += residual[i];
            ++counts[leaf[i]];
        }
        for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
            if (tree.nodes[k].feature < 0 && counts[k] > 0) {
                tree.nodes[k].value = sums[k] / static_cast<double>(counts[k]);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] += params.shrinkage * tree.nodes[leaf[i]].value;
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

std::vector<double> predict(const BoostedEnsemble &model, const Matrix &x) {
    if (x.cols() != model.num_features) {
        throw ShapeError("ensemble expects " +
                         std::to_string(model.num_features) +
                         " features, got " + std::to_string(x.cols()));
    }
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out[i] = model.predict(x.row(i));
    }
    return out;
}

void SearchSpace::validate() const {
    if (budget < 1) {
        throw ConfigError("search budget must be >= 1");
    }
    if (trees.lo > trees.hi || depth.lo > depth.hi ||
        min_leaf.lo > min_leaf.hi || !(shrinkage.lo <= shrinkage.hi) ||
        !(subsample.lo <= subsample.hi)) {
        throw ConfigError("search space has an empty range");
    }
    if (min_leaf.lo < 1 || !(subsample.lo > 0.0) || subsample.hi > 1.0 ||
        shrinkage.lo < 0.0 || shrinkage.hi > 1.0) {
        throw ConfigError("search space range out of bounds");
    }
}

SearchResult random_search(const SearchSpace &space, const Matrix &x,
                           std::span<const double> y,
                           double validation_fraction) {
    space.validate();
    if (y.size() != x.rows()) {
        throw ShapeError("search: row and target counts differ");
    }
    if (x.rows() < 2) {
        throw ConfigError("search: validation split needs at least 2 rows");
    }
    const auto parts = split(x.rows(), validation_fraction, space.seed);
    const Matrix x_fit = x.select_rows(parts.train);
    const Matrix x_val = x.select_rows(parts.test);
    std::vector<double> y_fit;
    std::vector<double> y_val;
    for (auto i : parts.train) {
        y_fit.push_back(y[i]);
    }
    for (auto i : parts.test) {
        y_val.push_back(y[i]);
    }

    std::mt19937_64 rng(space.seed);
    const auto draw_int = [&](Range<std::size_t> r) {
        return std::uniform_int_distribution<std::size_t>(r.lo, r.hi)(rng);
    };
    const auto draw_real = [&](Range<double> r) {
        return r.lo == r.hi
                   ? r.lo
                   : std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
    };

    SearchResult result;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < space.budget; ++t) {
        SearchTrial trial;
        trial.index = t;
        trial.params.num_trees = draw_int(space.trees);
        trial.params.max_depth = draw_int(space.depth);
        trial.params.shrinkage = draw_real(space.shrinkage);
        trial.params.min_leaf = draw_int(space.min_leaf);
        trial.params.subsample = draw_real(space.subsample);
        const auto model = fit_boosted(x_fit, y_fit, trial.params, space.seed + t);
        trial.validation_mse = mse_of(y_val, predict(model, x_val));
        if (trial.validation_mse < best) {
            best = trial.validation_mse;
            result.best = trial.params;
            result.best_index = t;
        }
        result.trials.push_back(trial);
    }
    return result;
}

} // namespace hydraq
