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
#include <optional>
#include <string>
#include <vector>

#include "hydraq/matrix.hpp"

namespace hydraq {

inline constexpr double kDefaultVarianceRatio = 0.97;

/// Per-column z-score parameters (population statistics, divide by N).
struct StandardizerParams {
    std::vector<double> means;
    std::vector<double> stds;
};

/// Throws DataError for N < 2 and DegenerateFeatureError naming the first
/// constant column. `names`, when given, labels columns in errors.
StandardizerParams fit_standardizer(const Matrix &data,
                                    const std::vector<std::string> &names = {});

Matrix standardize(const StandardizerParams &params, const Matrix &data);

struct EigenDecomposition {
    std::vector<double> values; // descending
    Matrix vectors;             // column j pairs with values[j]
    int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix until the off-diagonal
/// Frobenius norm drops below `tolerance`. Each eigenvector's largest-
/// magnitude entry is made positive.
EigenDecomposition jacobi_eigen(const Matrix &symmetric,
                                double tolerance = 1e-12);

struct PcaParams {
    std::vector<double> mean;        // d
    Matrix components;               // d x k, orthonormal columns
    std::vector<double> eigenvalues; // all d, descending, clamped at 0
    std::size_t retained = 0;        // k
    double alpha = kDefaultVarianceRatio;

    [[nodiscard]] double explained_ratio() const;
};

/// Covariance (1/N) sum (x - mu)(x - mu)^T of the rows.
Matrix covariance(const Matrix &data, const std::vector<double> &mean);

/// Smallest k with sum_{j<=k} lambda_j >= alpha * sum_j lambda_j.
std::size_t select_components(const std::vector<double> &eigenvalues,
                              double alpha);

/// Throws ConfigError unless 0 < alpha <= 1, DataError for N < 2.
PcaParams fit_pca(const Matrix &standardized,
                  double alpha = kDefaultVarianceRatio);

/// (x - mu)^T P for every row: N x k.
Matrix pca_project(const PcaParams &params, const Matrix &data);
/// z P^T + mu: back to d columns.
Matrix pca_reconstruct(const PcaParams &params, const Matrix &projected);

/// Per-column training range, mapped affinely onto [-pi, pi].
struct AngleScalerParams {
    std::vector<double> mins;
    std::vector<double> maxs;
};

AngleScalerParams fit_angle_scaler(const Matrix &data);
/// Values outside the fitted range clamp to the interval ends.
Matrix scale_to_angles(const AngleScalerParams &params, const Matrix &data);

struct PipelineOptions {
    bool use_pca = true;
    double alpha = kDefaultVarianceRatio;
    bool use_angles = true;
    /// PCA keeps at least this many components when d allows.
    std::size_t min_components = 1;
};

/// Standardize, then optionally PCA and angle scaling. Fitted once on a
/// training split and replayed unchanged on any later data.
struct PreprocessPipeline {
    std::vector<std::string> feature_names;
    StandardizerParams standardizer;
    std::optional<PcaParams> pca;
    std::optional<AngleScalerParams> angles;

    [[nodiscard]] std::size_t input_dimension() const {
        return standardizer.means.size();
    }
    [[nodiscard]] std::size_t output_dimension() const;
};

PreprocessPipeline fit_pipeline(const Matrix &raw, const PipelineOptions &opts,
                                const std::vector<std::string> &names = {});

/// Throws ShapeError when the column count differs from the fit.
Matrix transform(const PreprocessPipeline &pipeline, const Matrix &raw);

} // namespace hydraq
