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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hydraq/statevector.hpp"

namespace hydraq {

enum class Axis { X, Y, Z };

enum class EntanglerPattern { None, RingCnot, FullCnot, SymmetricZZ };

std::string_view to_string(EntanglerPattern pattern);
EntanglerPattern parse_entangler(std::string_view text);

/// Feature `feature` drives RY(x_feature) on every qubit in `qubits`.
struct FeatureAssignment {
    std::size_t feature = 0;
    std::vector<std::size_t> qubits;
};

/// Angle-embedding layer. With no explicit assignments, feature j drives RY on
/// qubit j for every supplied feature.
struct EncodingLayer {
    std::vector<FeatureAssignment> assignments;
};

/// Trainable single-qubit rotations, applied per qubit in `axes` order. With
/// `shared`, one parameter per axis drives every qubit identically.
struct VariationalLayer {
    std::vector<Axis> axes{Axis::X, Axis::Y, Axis::Z};
    bool shared = false;
    std::size_t first_slot = 0; // assigned by CircuitSpec
};

struct EntanglerLayer {
    EntanglerPattern pattern = EntanglerPattern::RingCnot;
    std::size_t first_slot = 0; // assigned by CircuitSpec; used by SymmetricZZ
};

struct MeasurementLayer {
    std::vector<Observable> observables;
};

using LayerSpec = std::variant<EncodingLayer, VariationalLayer, EntanglerLayer,
                               MeasurementLayer>;

enum class LayerKind { Encoding, Variational, Entangler, Measurement };

LayerKind layer_kind(const LayerSpec &layer);

/// Number of trainable angles a layer owns on a register of `num_qubits`.
std::size_t layer_parameter_count(const LayerSpec &layer,
                                  std::size_t num_qubits);

/// Builder arguments a CircuitSpec was produced from; enough to rebuild it.
struct CircuitRecipe {
    enum class Family { Custom, Qsm, SuSymmetric };
    Family family = Family::Custom;
    std::size_t qubits = 0;
    std::size_t layers = 0; // QSM variational layers, or SU blocks
    std::size_t reuploads = 1;
    std::size_t features = 0; // SU only
    EntanglerPattern entangler = EntanglerPattern::None;
    std::vector<Observable> observables;
};

/**
 * Immutable, validated layer program.
 *
 * Parameter slots are assigned in layer order at construction, so slot
 * indices are contiguous and unique. The single Measurement layer is last.
 */
class CircuitSpec {
  public:
    /// Validates `layers` and assigns parameter slots. `num_features` = 0
    /// means the feature count is checked only against the qubit count at
    /// evaluation time.
    CircuitSpec(std::size_t num_qubits, std::vector<LayerSpec> layers,
                std::size_t num_reuploads, std::size_t num_features = 0,
                CircuitRecipe recipe = {});

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t num_reuploads() const noexcept {
        return num_reuploads_;
    }
    [[nodiscard]] std::size_t num_parameters() const noexcept {
        return num_parameters_;
    }
    /// 0 when the encoding accepts any count up to num_qubits.
    [[nodiscard]] std::size_t num_features() const noexcept {
        return num_features_;
    }
    [[nodiscard]] std::span<const LayerSpec> layers() const noexcept {
        return layers_;
    }
    [[nodiscard]] const MeasurementLayer &measurement() const;
    [[nodiscard]] std::size_t num_observables() const {
        return measurement().observables.size();
    }
    [[nodiscard]] const CircuitRecipe &recipe() const noexcept {
        return recipe_;
    }

    /// Throws ShapeError unless `count` features are acceptable.
    void check_feature_count(std::size_t count) const;

  private:
    std::size_t num_qubits_;
    std::vector<LayerSpec> layers_;
    std::size_t num_reuploads_;
    std::size_t num_features_;
    std::size_t num_parameters_ = 0;
    CircuitRecipe recipe_;
};

/// Hardware-efficient sequential model: per re-upload block, Encoding then
/// (Variational, Entangler) x num_layers; one Measurement layer at the end.
CircuitSpec build_qsm(std::size_t num_qubits, std::size_t num_layers,
                      std::size_t num_reuploads, EntanglerPattern pattern,
                      std::vector<Observable> observables);

/// One unit-weight Z observable per qubit.
std::vector<Observable> per_qubit_z(std::size_t num_qubits);

/// Two-qubit permutation-symmetric regressor. Every block acts identically
/// on both qubits, so the state stays in the symmetric subspace.
CircuitSpec build_su_symmetric(std::size_t num_features,
                               std::size_t num_reuploads,
                               std::size_t num_blocks);

/// Features encoded by re-upload block `block` of the symmetric family:
/// positions block, block + L, ... below max(F, L), taken modulo F.
std::vector<std::size_t> su_block_features(std::size_t num_features,
                                           std::size_t num_reuploads,
                                           std::size_t block);

struct LatentVector {
    std::vector<double> values;
};

/// Where a tape operation takes its angle from.
enum class AngleSource { Fixed, Feature, Parameter };

struct TapeOp {
    Gate gate;
    AngleSource source = AngleSource::Fixed;
    std::size_t index = 0; // feature index or parameter slot
    std::size_t layer = 0;
};

/// Called with (layer index, state) after every non-measurement layer.
using LayerObserver = std::function<void(std::size_t, const StateVector &)>;

/**
 * A CircuitSpec flattened to a gate tape for a fixed feature count.
 */
class CompiledCircuit {
  public:
    CompiledCircuit(const CircuitSpec &circuit, std::size_t num_features);

    [[nodiscard]] std::span<const TapeOp> ops() const noexcept { return ops_; }
    [[nodiscard]] const CircuitSpec &circuit() const noexcept {
        return *circuit_;
    }

    /// Rotation angle of `op` for the given inputs.
    [[nodiscard]] double angle(const TapeOp &op,
                               std::span<const double> features,
                               std::span<const double> params) const;

    /// Runs the tape from |0...0>.
    [[nodiscard]] StateVector
    prepare(std::span<const double> features, std::span<const double> params,
            const LayerObserver &observer = {}) const;

    /// Applies ops [begin, end) to `state`.
    void run(StateVector &state, std::size_t begin, std::size_t end,
             std::span<const double> features,
             std::span<const double> params) const;

    [[nodiscard]] LatentVector measure(const StateVector &state) const;

    /// Throws ShapeError on feature or parameter count mismatch.
    void check_inputs(std::span<const double> features,
                      std::span<const double> params) const;

  private:

    const CircuitSpec *circuit_;
    std::size_t num_features_;
    std::vector<TapeOp> ops_;
};

/// z(x) = (<O_1>, ..., <O_m>). Deterministic; throws ShapeError on
/// feature or parameter count mismatch.
LatentVector evaluate(const CircuitSpec &circuit,
                      std::span<const double> features,
                      std::span<const double> params);

/// Key-value section body for qsm and su_symmetric circuits: qubits, layers,
/// reuploads, entangler, observables (plus features for su_symmetric).
std::string circuit_to_config(const CircuitSpec &circuit);
CircuitSpec circuit_from_config(std::string_view text);

std::string format_observable(const Observable &obs);
Observable parse_observable(std::string_view text);

} // namespace hydraq
