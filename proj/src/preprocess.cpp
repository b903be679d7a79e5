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

#include "hydraq/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hydraq/errors.hpp"

namespace hydraq {

namespace {

constexpr double kPi = std::numbers::pi;

void require_columns(const Matrix &data, std::size_t expected,
                     const char *what) {
    if (data.cols() != expected) {
        throw ShapeError(std::string(what) + " expects " +
                         std::to_string(expected) + " columns, got " +
                         std::to_string(data.cols()));
    }
}

std::string column_label(std::size_t j, const std::vector<std::string> &names) {
    if (j < names.size()) {
        return "'" + names[j] + "' (column " + std::to_string(j) + ")";
    }
    return "column " + std::to_string(j);
}

double off_diagonal_norm(const Matrix &a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) {
                sum += a(i, j) * a(i, j);
            }
        }
    }
    return std::sqrt(sum);
}

} // namespace

StandardizerParams fit_standardizer(const Matrix &data,
                                    const std::vector<std::string> &names) {
    const std::size_t n = data.rows();
    if (n < 2) {
        throw DataError("standardizer needs at least 2 rows, got " +
                        std::to_string(n));
    }
    StandardizerParams p;
    p.means.assign(data.cols(), 0.0);
    p.stds.assign(data.cols(), 0.0);
    for (std::size_t j = 0; j < data.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += data(i, j);
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = data(i, j) - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);
        if (!(var > 0.0)) {
            throw DegenerateFeatureError("feature " + column_label(j, names) +
                                         " has zero variance");
        }
        p.means[j] = mean;
        p.stds[j] = std::sqrt(var);
    }
    return p;
}

Matrix standardize(const StandardizerParams &params, const Matrix &data) {
    require_columns(data, params.means.size(), "standardizer");
    Matrix out(data.rows(), data.cols());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            out(i, j) = (data(i, j) - params.means[j]) / params.stds[j];
        }
    }
    return out;
}

EigenDecomposition jacobi_eigen(const Matrix &symmetric, double tolerance) {
    const std::size_t d = symmetric.rows();
    if (symmetric.cols() != d) {
        throw ShapeError("eigendecomposition needs a square matrix");
    }
    Matrix a = symmetric;
    Matrix v(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        v(i, i) = 1.0;
    }

    constexpr int kMaxSweeps = 100;
    int sweeps = 0;
    while (off_diagonal_norm(a) >= tolerance && sweeps < kMaxSweeps) {
        ++sweeps;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                // Rotation angle that zeroes a(p, q).
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) {
        return a(x, x) > a(y, y);
    });

    EigenDecomposition out;
    out.sweeps = sweeps;
    out.values.resize(d);
    out.vectors = Matrix(d, d);
    for (std::size_t col = 0; col < d; ++col) {
        const std::size_t src = order[col];
        out.values[col] = a(src, src);
        std::size_t argmax = 0;
        for (std::size_t k = 1; k < d; ++k) {
            if (std::abs(v(k, src)) > std::abs(v(argmax, src))) {
                argmax = k;
            }
        }
        const double sign = v(argmax, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < d; ++k) {
            out.vectors(k, col) = sign * v(k, src);
        }
    }
    return out;
}

double PcaParams::explained_ratio() const {
    const double total =
        std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
    const double kept = std::accumulate(
        eigenvalues.begin(),
        eigenvalues.begin() + static_cast<std::ptrdiff_t>(retained), 0.0);
    return total > 0.0 ? kept / total : 1.0;
}

Matrix covariance(const Matrix &data, const std::vector<double> &mean) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    Matrix cov(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            const double da = data(i, a) - mean[a];
            for (std::size_t b = a; b < d; ++b) {
                cov(a, b) += da * (data(i, b) - mean[b]);
            }
        }
    }
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            cov(a, b) /= static_cast<double>(n);
            cov(b, a) = cov(a, b);
        }
    }
    return cov;
}

std::size_t select_components(const std::vector<double> &eigenvalues,
                              double alpha) {
    const double total =
        std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
    double cumulative = 0.0;
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
        cumulative += eigenvalues[k];
        if (cumulative >= alpha * total) {
            return k + 1;
        }
    }
    return eigenvalues.size();
}

PcaParams fit_pca(const Matrix &standardized, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ConfigError("variance ratio alpha must lie in (0, 1], got " +
                          std::to_string(alpha));
    }
    const std::size_t n = standardized.rows();
    const std::size_t d = standardized.cols();
    if (n < 2 || d == 0) {
        throw DataError("PCA needs at least 2 rows and 1 column");
    }
    PcaParams p;
    p.alpha = alpha;
    p.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            p.mean[j] += standardized(i, j);
        }
    }
    for (auto &m : p.mean) {
        m /= static_cast<double>(n);
    }
    const auto eig = jacobi_eigen(covariance(standardized, p.mean));
    p.eigenvalues = eig.values;
    for (auto &l : p.eigenvalues) {
        // Covariance is PSD; negative values are rounding noise.
        l = std::max(l, 0.0);
    }
    p.retained = select_components(p.eigenvalues, alpha);
    p.components = Matrix(d, p.retained);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < p.retained; ++c) {
            p.components(r, c) = eig.vectors(r, c);
        }
    }
    return p;
}

Matrix pca_project(const PcaParams &params, const Matrix &data) {
    const std::size_t d = params.mean.size();
    require_columns(data, d, "PCA projection");
    const std::size_t k = params.retained;
    Matrix out(data.rows(), k);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                s += (data(i, j) - params.mean[j]) * params.components(j, c);
            }
            out(i, c) = s;
        }
    }
    return out;
}

Matrix pca_reconstruct(const PcaParams &params, const Matrix &projected) {
    const std::size_t d = params.mean.size();
    const std::size_t k = params.retained;
    require_columns(projected, k, "PCA reconstruction");
    Matrix out(projected.rows(), d);
    for (std::size_t i = 0; i < projected.rows(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double s = params.mean[j];
            for (std::size_t c = 0; c < k; ++c) {
                s += projected(i, c) * params.components(j, c);
            }
            out(i, j) = s;
        }
    }
    return out;
}

AngleScalerParams fit_angle_scaler(const Matrix &data) {
    if (data.rows() == 0) {
        throw DataError("angle scaler needs data");
    }
    AngleScalerParams p;
    for (std::size_t j = 0; j < data.cols(); ++j) {
        const auto col = data.column(j);
        const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        if (!(*hi > *lo)) {
            throw DegenerateFeatureError("angle scaler: column " +
                                         std::to_string(j) +
                                         " has an empty range");
        }
        p.mins.push_back(*lo);
        p.maxs.push_back(*hi);
    }
    return p;
}

Matrix scale_to_angles(const AngleScalerParams &params, const Matrix &data) {
    require_columns(data, params.mins.size(), "angle scaler");
    Matrix out(data.rows(), data.cols());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            const double u =
                (data(i, j) - params.mins[j]) / (params.maxs[j] - params.mins[j]);
            out(i, j) = std::clamp(-kPi + 2.0 * kPi * u, -kPi, kPi);
        }
    }
    return out;
}

std::size_t PreprocessPipeline::output_dimension() const {
    return pca ? pca->retained : input_dimension();
}

PreprocessPipeline fit_pipeline(const Matrix &raw, const PipelineOptions &opts,
                                const std::vector<std::string> &names) {
    PreprocessPipeline pipe;
    pipe.feature_names = names;
    pipe.standardizer = fit_standardizer(raw, names);
    Matrix current = standardize(pipe.standardizer, raw);
    if (opts.use_pca) {
        auto pca = fit_pca(current, opts.alpha);
        const std::size_t floor = std::min(opts.min_components, raw.cols());
        if (pca.retained < floor) {
            // Widen to the floor with the next eigenvectors.
            const auto eig = jacobi_eigen(covariance(current, pca.mean));
            pca.retained = floor;
            pca.components = Matrix(raw.cols(), floor);
            for (std::size_t r = 0; r < raw.cols(); ++r) {
                for (std::size_t c = 0; c < floor; ++c) {
                    pca.components(r, c) = eig.vectors(r, c);
                }
            }
        }
        current = pca_project(pca, current);
        pipe.pca = std::move(pca);
    }
    if (opts.use_angles) {
        pipe.angles = fit_angle_scaler(current);
    }
    return pipe;
}

Matrix transform(const PreprocessPipeline &pipeline, const Matrix &raw) {
    Matrix current = standardize(pipeline.standardizer, raw);
    if (pipeline.pca) {
        current = pca_project(*pipeline.pca, current);
    }
    if (pipeline.angles) {
        current = scale_to_angles(*pipeline.angles, current);
    }
    return current;
}

} // namespace hydraq
