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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hydraq/baseline.hpp"
#include "hydraq/circuit.hpp"
#include "hydraq/datasets.hpp"
#include "hydraq/kvconfig.hpp"
#include "hydraq/learn.hpp"
#include "hydraq/preprocess.hpp"

namespace hydraq {

enum class ModelKind { Boosted, Qsm, SuSymmetric };

std::string_view to_string(ModelKind kind);
/// Also accepts "classical" and "su".
ModelKind parse_model_kind(std::string_view text);

struct ModelConfig {
    double test_fraction = 0.2;
    std::uint64_t split_seed = 7;
    double pca_alpha = kDefaultVarianceRatio;

    std::size_t qsm_layers = 3;
    std::size_t qsm_reuploads = 2;
    EntanglerPattern qsm_entangler = EntanglerPattern::RingCnot;
    HeadKind qsm_head = HeadKind::Linear;

    std::size_t su_reuploads = 3;
    std::size_t su_blocks = 2;
    HeadKind su_head = HeadKind::Linear;

    TrainConfig train;

    SearchSpace search;
    double validation_fraction = 0.2;
};

/// Reads [split], [preprocess], [train], [qsm], [su] and [boosted]; missing
/// keys keep their defaults, unknown keys are a ConfigError.
ModelConfig model_config_from(const KvDocument &doc);
/// Canonical text of every field, in the same section layout.
std::string to_config_text(const ModelConfig &config);
/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const ModelConfig &config);

struct BundleMetadata {
    std::uint64_t seed = 0;
    std::uint64_t split_seed = 0;
    double test_fraction = 0.2;
    std::size_t num_rows = 0;  // dataset rows the split was drawn from
    std::size_t num_train = 0;
    std::string config_hash;
    std::vector<double> loss_history;
};

/// Everything needed to predict from raw sensor features.
struct ModelBundle {
    ModelKind kind = ModelKind::Boosted;
    Task task = Task::Conductivity;
    PreprocessPipeline preprocessing;
    std::optional<HybridModel> quantum;
    std::optional<BoostedEnsemble> ensemble;
    BundleMetadata metadata;
    /// Hyperparameter trials behind a boosted fit; not serialized.
    std::vector<SearchTrial> search_log;
};

inline constexpr int kBundleVersion = 1;

/// Fits preprocessing and the model on the training split only.
ModelBundle build_and_train(ModelKind kind, const Dataset &data, Task task,
                            const ModelConfig &config);

/// The split recorded in the bundle, replayed on an n-row dataset.
DatasetSplit bundle_split(const ModelBundle &bundle, std::size_t n);

/// Throws ShapeError on a feature mismatch, IntegrityError when the bundle
/// lacks the model its kind requires.
std::vector<double> predict(const ModelBundle &bundle, const Matrix &raw);
double predict_one(const ModelBundle &bundle, std::span<const double> raw);

/// Output calibration mapping [-m_sum, m_sum] onto [min(y), max(y)].
void calibrate_head(HeadSpec &head, const CircuitSpec &circuit,
                    std::span<const double> targets);

std::string bundle_to_json(const ModelBundle &bundle);
/// Throws IntegrityError on a missing field or unsupported version.
ModelBundle bundle_from_json(std::string_view text);
void save_bundle(const std::string &path, const ModelBundle &bundle);
ModelBundle load_bundle(const std::string &path);

} // namespace hydraq
