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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hydraq/circuit.hpp"
#include "hydraq/head.hpp"
#include "hydraq/matrix.hpp"

namespace hydraq {

struct LossValue {
    double mse = 0.0;
};

/// (1/N) sum (y - yhat)^2. Throws ShapeError on length mismatch or N = 0.
LossValue mse_loss(std::span<const double> targets,
                   std::span<const double> predictions);

/// d z_j / d theta_i for every observable j and circuit parameter i, stored
/// row-major with one row per observable.
struct Jacobian {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    [[nodiscard]] double operator()(std::size_t j, std::size_t i) const {
        return values[j * cols + i];
    }
};

/// Latent vector and its exact Jacobian from the +-pi/2 shift rule, applied
/// to each gate occurrence separately so shared parameters sum correctly.
std::pair<LatentVector, Jacobian>
shift_rule_jacobian(const CompiledCircuit &compiled,
                    std::span<const double> features,
                    std::span<const double> circuit_params);

/// Central-difference Jacobian (f(theta + h) - f(theta - h)) / 2h.
Jacobian finite_difference_jacobian(const CircuitSpec &circuit,
                                    std::span<const double> features,
                                    std::span<const double> circuit_params,
                                    double h);

/// Gradient of the per-sample loss term (target - yhat)^2 with respect to the
/// full parameter vector (circuit parameters, then head parameters). Circuit
/// derivatives use the parameter-shift rule; head derivatives are analytic.
std::vector<double> parameter_shift_gradient(const CircuitSpec &circuit,
                                             std::span<const double> features,
                                             std::span<const double> params,
                                             const HeadSpec &head,
                                             double target);

/// Independent oracle for parameter_shift_gradient: central differences on
/// every coordinate of the full parameter vector.
std::vector<double> finite_difference_gradient(const CircuitSpec &circuit,
                                               std::span<const double> features,
                                               std::span<const double> params,
                                               const HeadSpec &head,
                                               double target, double h);

struct AdamState {
    std::int64_t step_count = 0;
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState for_size(std::size_t n, double learning_rate);
};

/// One bias-corrected Adam update. Returns the advanced state and new
/// parameters; inputs are left untouched.
std::pair<AdamState, std::vector<double>>
adam_step(const AdamState &state, std::span<const double> params,
          std::span<const double> gradient);

/// In-place form used by the training loop.
void adam_update(AdamState &state, std::span<double> params,
                 std::span<const double> gradient);

/// Circuit plus head plus the concatenated parameter vector
/// [circuit params..., head params...].
struct HybridModel {
    CircuitSpec circuit;
    HeadSpec head;
    std::vector<double> params;

    [[nodiscard]] std::size_t num_circuit_parameters() const noexcept {
        return circuit.num_parameters();
    }
    [[nodiscard]] std::span<const double> circuit_params() const {
        return std::span<const double>(params).first(num_circuit_parameters());
    }
    [[nodiscard]] std::span<const double> head_params() const {
        return std::span<const double>(params).subspan(
            num_circuit_parameters());
    }

    [[nodiscard]] double predict(std::span<const double> features) const;
    [[nodiscard]] std::vector<double> predict(const Matrix &features) const;
};

/// Circuit angles uniform on [-pi/100, pi/100]; head at its initial values.
std::vector<double> initial_parameters(const CircuitSpec &circuit,
                                       const HeadSpec &head,
                                       std::uint64_t seed);

struct TrainConfig {
    int epochs = 100;
    std::size_t batch_size = 32;
    double learning_rate = 0.05;
    std::uint64_t seed = 7;
    int patience = 0; // 0 disables early stopping

    void validate() const;
};

struct TrainResult {
    std::vector<double> params;
    std::vector<double> loss_history; // training-set MSE after each epoch
};

/**
 * Mini-batch Adam over `config.epochs` epochs, starting from `model.params`.
 *
 * Batches are drawn from a seeded shuffle each epoch; the full set is one
 * batch when it is smaller than batch_size. Early stopping restores the best
 * parameters seen. Throws DataError on an empty dataset and DivergenceError
 * when an epoch's loss is not finite.
 */
TrainResult train(const HybridModel &model, const Matrix &features,
                  std::span<const double> targets, const TrainConfig &config);

/// "epoch,train_mse" CSV, one row per epoch starting at 1.
std::string loss_history_csv(std::span<const double> history);

} // namespace hydraq
