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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hydraq/datasets.hpp"
#include "hydraq/models.hpp"

namespace hydraq {

using Deltas = std::array<double, 3>;

/// 1 - SS_res / SS_tot. Throws UndefinedVarianceError for constant y and
/// ShapeError for mismatched or short inputs.
double r_squared(std::span<const double> y, std::span<const double> yhat);
double mae(std::span<const double> y, std::span<const double> yhat);
/// Fraction with |y - yhat| <= delta, for each delta. Deltas must be
/// positive and strictly increasing (ConfigError).
Deltas tolerance_accuracy(std::span<const double> y,
                          std::span<const double> yhat, const Deltas &deltas);

/// (1, 2, 3) for usg and conductivity, (25, 50, 75) for volume.
Deltas task_deltas(Task task);

struct ResidualSet {
    std::vector<double> residuals; // y - yhat
    double mean = 0.0;
    double std = 0.0; // population
    std::array<double, 5> quantiles{}; // 5, 25, 50, 75, 95 %
};

/// Quantiles interpolate linearly between order statistics.
ResidualSet summarize_residuals(std::span<const double> y,
                                std::span<const double> yhat);

struct MetricRow {
    Task task = Task::Usg;
    ModelKind model = ModelKind::Boosted;
    bool failed = false;
    std::string failure; // error text when failed
    double r2 = 0.0;
    double mae = 0.0;
    Deltas accuracy{};
    std::size_t n_test = 0;
};

MetricRow score(Task task, ModelKind model, std::span<const double> y,
                std::span<const double> yhat);

struct DataSource {
    enum class Kind { Synthetic, Csv };
    Kind kind = Kind::Synthetic;
    std::string path; // Csv: resolved path
    std::size_t n = 500;
    std::uint64_t seed = 7;
    double noise = 0.05;
};

struct BenchConfig {
    DataSource data;
    std::vector<Task> tasks{Task::Usg, Task::Conductivity, Task::Volume};
    std::vector<ModelKind> models{ModelKind::Boosted, ModelKind::Qsm,
                                  ModelKind::SuSymmetric};
    std::string out = "report";
    ModelConfig model;
};

/// Adds [data] and [bench] to the model sections. A relative csv path is
/// taken relative to the config file's directory.
BenchConfig bench_config_from(const KvDocument &doc);
BenchConfig load_bench_config(const std::string &path);
Dataset load_data(const DataSource &source);

struct OrderingIssue {
    Task task;
    ModelKind better; // expected to score at least as high
    ModelKind worse;
    double gap = 0.0; // R2(worse) - R2(better), > 0
};

/// Gaps above this fail the ordering check; smaller ones only warn.
inline constexpr double kOrderingTolerance = 0.05;

struct BenchReport {
    std::vector<MetricRow> rows; // ordered by (task, model) as configured
    std::vector<OrderingIssue> ordering;

    [[nodiscard]] bool ordering_failed() const;
};

/// Trains every task x model cell on one shared split, scores the held-out
/// rows and writes the report directory. Divergent cells become "-" rows.
BenchReport run_benchmark(const BenchConfig &config, const Dataset &data);

struct ReferenceRow {
    Task task;
    ModelKind model;
    std::optional<std::array<double, 5>> values; // R2, MAE, Acc x3
};

/// Published comparison values on the original clinical data.
const std::vector<ReferenceRow> &reference_rows();

std::vector<OrderingIssue> check_ordering(std::span<const MetricRow> rows);

std::string metrics_csv(std::span<const MetricRow> rows);
std::string metrics_text(const BenchReport &report);
std::string residuals_csv(std::span<const std::size_t> rows,
                          std::span<const double> y,
                          std::span<const double> yhat);
std::string reference_csv();

struct PlotSeries {
    ModelKind model;
    std::vector<double> y;
    std::vector<double> yhat;
};

std::string scatter_csv(std::span<const PlotSeries> series);
std::string scatter_svg(Task task, std::span<const PlotSeries> series);
std::string errors_csv(std::span<const PlotSeries> series);
std::string errors_svg(Task task, std::span<const PlotSeries> series);

struct GradcheckSummary {
    std::size_t circuits = 0;
    std::size_t draws = 0;
    std::size_t gradients = 0;
    double max_deviation = 0.0;
};

/// Parameter-shift against central finite differences on random QSM
/// circuits (2-4 qubits, 1-3 layers, 1-3 re-uploads, any entangler).
GradcheckSummary gradient_check(std::size_t circuits, std::size_t draws,
                                std::uint64_t seed, double h = 1e-4);

} // namespace hydraq
