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

#include "hydraq/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <limits>
#include <sstream>

#include "hydraq/errors.hpp"
#include "hydraq/kvconfig.hpp"

namespace hydraq {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_split(const CircuitSpec &circuit, const HeadSpec &head,
                 std::span<const double> params) {
    head.validate();
    if (head.num_outputs != circuit.num_observables()) {
        throw ShapeError("head expects " + std::to_string(head.num_outputs) +
                         " latents but circuit measures " +
                         std::to_string(circuit.num_observables()));
    }
    const std::size_t expected = circuit.num_parameters() + head.num_parameters();
    if (params.size() != expected) {
        throw ShapeError("expected " + std::to_string(expected) +
                         " parameters (circuit + head), got " +
                         std::to_string(params.size()));
    }
}

// Loss term (target - yhat)^2 for one sample.
double sample_loss(const CircuitSpec &circuit, std::span<const double> features,
                   std::span<const double> params, const HeadSpec &head,
                   double target) {
    const std::size_t nc = circuit.num_parameters();
    const auto z = evaluate(circuit, features, params.first(nc));
    const double residual = target - head.apply(z.values, params.subspan(nc));
    return residual * residual;
}

// Gradient of (target - yhat)^2 given z and dz/dtheta.
std::vector<double> chain_rule(const LatentVector &z, const Jacobian &jac,
                               std::span<const double> head_params,
                               const HeadSpec &head, double target) {
    const std::size_t nc = jac.cols;
    std::vector<double> grad(nc + head.num_parameters(), 0.0);
    const double yhat = head.apply(z.values, head_params);
    // d/dyhat of (target - yhat)^2, times d yhat / d raw.
    const double upstream = -2.0 * (target - yhat) * head.scale;
    for (std::size_t j = 0; j < jac.rows; ++j) {
        const double w =
            head.kind == HeadKind::Identity ? 1.0 : head_params[j];
        for (std::size_t i = 0; i < nc; ++i) {
            grad[i] += upstream * w * jac(j, i);
        }
    }
    if (head.kind == HeadKind::Linear) {
        for (std::size_t j = 0; j < head.num_outputs; ++j) {
            grad[nc + j] = upstream * z.values[j];
        }
        grad[nc + head.num_outputs] = upstream;
    }
    return grad;
}

} // namespace

LossValue mse_loss(std::span<const double> targets,
                   std::span<const double> predictions) {
    if (targets.size() != predictions.size() || targets.empty()) {
        throw ShapeError("mse needs equal nonzero lengths, got " +
                         std::to_string(targets.size()) + " and " +
                         std::to_string(predictions.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double r = targets[i] - predictions[i];
        sum += r * r;
    }
    return {sum / static_cast<double>(targets.size())};
}

std::pair<LatentVector, Jacobian>
shift_rule_jacobian(const CompiledCircuit &compiled,
                    std::span<const double> features,
                    std::span<const double> circuit_params) {
    const auto &circuit = compiled.circuit();
    compiled.check_inputs(features, circuit_params);
    const auto ops = compiled.ops();
    Jacobian jac;
    jac.rows = circuit.num_observables();
    jac.cols = circuit.num_parameters();
    jac.values.assign(jac.rows * jac.cols, 0.0);

    // Walk the tape once; at each trainable gate, branch off the shifted
    // evaluations from the cached prefix state.
    StateVector state(circuit.num_qubits());
    for (std::size_t i = 0; i < ops.size(); ++i) {
        Gate g = ops[i].gate;
        g.angle = compiled.angle(ops[i], features, circuit_params);
        if (ops[i].source == AngleSource::Parameter) {
            const std::size_t slot = ops[i].index;
            for (const double sign : {1.0, -1.0}) {
                StateVector shifted = state;
                Gate sg = g;
                sg.angle += sign * kHalfPi;
                apply_gate(shifted, sg);
                compiled.run(shifted, i + 1, ops.size(), features,
                             circuit_params);
                const auto z = compiled.measure(shifted);
                for (std::size_t j = 0; j < jac.rows; ++j) {
                    jac.values[j * jac.cols + slot] += 0.5 * sign * z.values[j];
                }
            }
        }
        apply_gate(state, g);
    }
    return {compiled.measure(state), std::move(jac)};
}

Jacobian finite_difference_jacobian(const CircuitSpec &circuit,
                                    std::span<const double> features,
                                    std::span<const double> circuit_params,
                                    double h) {
    if (!(h > 0.0)) {
        throw ConfigError("finite-difference step must be positive");
    }
    Jacobian jac;
    jac.rows = circuit.num_observables();
    jac.cols = circuit.num_parameters();
    jac.values.assign(jac.rows * jac.cols, 0.0);
    std::vector<double> p(circuit_params.begin(), circuit_params.end());
    if (p.size() != circuit.num_parameters()) {
        throw ShapeError("circuit has " +
                         std::to_string(circuit.num_parameters()) +
                         " parameters, got " + std::to_string(p.size()));
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double orig = p[i];
        p[i] = orig + h;
        const auto up = evaluate(circuit, features, p);
        p[i] = orig - h;
        const auto down = evaluate(circuit, features, p);
        p[i] = orig;
        for (std::size_t j = 0; j < jac.rows; ++j) {
            jac.values[j * jac.cols + i] =
                (up.values[j] - down.values[j]) / (2.0 * h);
        }
    }
    return jac;
}

std::vector<double> parameter_shift_gradient(const CircuitSpec &circuit,
                                             std::span<const double> features,
                                             std::span<const double> params,
                                             const HeadSpec &head,
                                             double target) {
    check_split(circuit, head, params);
    const std::size_t nc = circuit.num_parameters();
    const CompiledCircuit compiled(circuit, features.size());
    const auto [z, jac] =
        shift_rule_jacobian(compiled, features, params.first(nc));
    return chain_rule(z, jac, params.subspan(nc), head, target);
}

std::vector<double> finite_difference_gradient(const CircuitSpec &circuit,
                                               std::span<const double> features,
                                               std::span<const double> params,
                                               const HeadSpec &head,
                                               double target, double h) {
    check_split(circuit, head, params);
    if (!(h > 0.0)) {
        throw ConfigError("finite-difference step must be positive");
    }
    std::vector<double> p(params.begin(), params.end());
    std::vector<double> grad(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double orig = p[i];
        p[i] = orig + h;
        const double up = sample_loss(circuit, features, p, head, target);
        p[i] = orig - h;
        const double down = sample_loss(circuit, features, p, head, target);
        p[i] = orig;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

AdamState AdamState::for_size(std::size_t n, double learning_rate) {
    AdamState s;
    s.first_moment.assign(n, 0.0);
    s.second_moment.assign(n, 0.0);
    s.learning_rate = learning_rate;
    return s;
}

void adam_update(AdamState &state, std::span<double> params,
                 std::span<const double> gradient) {
    const std::size_t n = params.size();
    if (gradient.size() != n || state.first_moment.size() != n ||
        state.second_moment.size() != n) {
        throw ShapeError("adam: parameter, gradient and moment sizes differ (" +
                         std::to_string(n) + ", " +
                         std::to_string(gradient.size()) + ", " +
                         std::to_string(state.first_moment.size()) + ")");
    }
    ++state.step_count;
    const double t = static_cast<double>(state.step_count);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = gradient[i];
        auto &m = state.first_moment[i];
        auto &v = state.second_moment[i];
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g * g;
        const double m_hat = m / c1;
        const double v_hat = v / c2;
        params[i] -= state.learning_rate * m_hat /
                     (std::sqrt(v_hat) + state.epsilon);
    }
}

std::pair<AdamState, std::vector<double>>
adam_step(const AdamState &state, std::span<const double> params,
          std::span<const double> gradient) {
    AdamState next = state;
    std::vector<double> out(params.begin(), params.end());
    adam_update(next, out, gradient);
    return {std::move(next), std::move(out)};
}

double HybridModel::predict(std::span<const double> features) const {
    const auto z = evaluate(circuit, features, circuit_params());
    return head.apply(z.values, head_params());
}

std::vector<double> HybridModel::predict(const Matrix &features) const {
    const CompiledCircuit compiled(circuit, features.cols());
    std::vector<double> out(features.rows());
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto z = compiled.measure(
            compiled.prepare(features.row(r), circuit_params()));
        out[r] = head.apply(z.values, head_params());
    }
    return out;
}

std::vector<double> initial_parameters(const CircuitSpec &circuit,
                                       const HeadSpec &head,
                                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-std::numbers::pi / 100.0,
                                                std::numbers::pi / 100.0);
    std::vector<double> p(circuit.num_parameters());
    for (auto &v : p) {
        v = dist(rng);
    }
    const auto hp = head.initial_parameters();
    p.insert(p.end(), hp.begin(), hp.end());
    return p;
}

void TrainConfig::validate() const {
    if (epochs < 1) {
        throw ConfigError("epochs must be >= 1");
    }
    if (batch_size < 1) {
        throw ConfigError("batch_size must be >= 1");
    }
    if (!(learning_rate > 0.0)) {
        throw ConfigError("learning_rate must be positive");
    }
    if (patience < 0) {
        throw ConfigError("patience must be >= 0");
    }
}

TrainResult train(const HybridModel &model, const Matrix &features,
                  std::span<const double> targets, const TrainConfig &config) {
    config.validate();
    if (features.rows() == 0 || targets.empty()) {
        throw DataError("training set is empty");
    }
    if (features.rows() != targets.size()) {
        throw ShapeError("features have " + std::to_string(features.rows()) +
                         " rows but there are " +
                         std::to_string(targets.size()) + " targets");
    }
    check_split(model.circuit, model.head, model.params);

    const std::size_t n = features.rows();
    const std::size_t nc = model.circuit.num_parameters();
    const std::size_t np = model.params.size();
    const std::size_t batch = std::min(config.batch_size, n);
    const CompiledCircuit compiled(model.circuit, features.cols());

    HybridModel current = model;
    AdamState adam = AdamState::for_size(np, config.learning_rate);
    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainResult result;
    std::vector<double> best = current.params;
    double best_loss = std::numeric_limits<double>::infinity();
    int since_best = 0;

    std::vector<double> grad(np);
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(start + batch, n);
            std::fill(grad.begin(), grad.end(), 0.0);
            const std::span<const double> params(current.params);
            for (std::size_t b = start; b < stop; ++b) {
                const std::size_t r = order[b];
                const auto [z, jac] = shift_rule_jacobian(
                    compiled, features.row(r), params.first(nc));
                const auto g = chain_rule(z, jac, params.subspan(nc),
                                          current.head, targets[r]);
                for (std::size_t i = 0; i < np; ++i) {
                    grad[i] += g[i];
                }
            }
            const double inv = 1.0 / static_cast<double>(stop - start);
            for (auto &g : grad) {
                g *= inv;
            }
            adam_update(adam, current.params, grad);
        }

        const double loss =
            mse_loss(targets, current.predict(features)).mse;
        if (!std::isfinite(loss)) {
            throw DivergenceError("training loss became non-finite at epoch " +
                                      std::to_string(epoch),
                                  epoch);
        }
        result.loss_history.push_back(loss);
        if (loss < best_loss) {
            best_loss = loss;
            best = current.params;
            since_best = 0;
        } else if (config.patience > 0 && ++since_best >= config.patience) {
            break;
        }
    }
    result.params = config.patience > 0 ? best : current.params;
    return result;
}

std::string loss_history_csv(std::span<const double> history) {
    std::ostringstream out;
    out << "epoch,train_mse\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
        out << (i + 1) << "," << format_double(history[i]) << "\n";
    }
    return out.str();
}

} // namespace hydraq
