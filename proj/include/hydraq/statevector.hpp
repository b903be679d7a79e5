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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hydraq {

using Complex = std::complex<double>;

/// Largest register the simulator accepts.
inline constexpr std::size_t kMaxQubits = 12;

/**
 * Dense statevector of a k-qubit register.
 *
 * Basis labels are big-endian in qubit index: qubit 0 is the most
 * significant bit of the amplitude index, so |q0 q1 ... q(k-1)>.
 */
class StateVector {
  public:
    /// |0...0> on `num_qubits` qubits. Throws CapacityError when out of range.
    explicit StateVector(std::size_t num_qubits);

    /// Wraps explicit amplitudes. Length must be a power of two.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return amplitudes_.size();
    }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] std::span<Complex> mutable_amplitudes() noexcept {
        return amplitudes_;
    }
    [[nodiscard]] double norm_squared() const noexcept;

    /// Bit mask selecting `qubit` inside an amplitude index.
    [[nodiscard]] std::size_t mask(std::size_t qubit) const noexcept {
        return std::size_t{1} << (num_qubits_ - 1 - qubit);
    }

  private:
    StateVector() = default;

    std::size_t num_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

StateVector init_zero_state(std::size_t num_qubits);

enum class GateKind { RX, RY, RZ, CNOT, ZZ };

/// Rotations follow R_G(theta) = exp(-i theta G / 2); ZZ(theta) =
/// exp(-i theta Z(x)Z / 2). `partner` is the CNOT control or the ZZ second
/// qubit.
struct Gate {
    GateKind kind = GateKind::RY;
    std::size_t target = 0;
    std::optional<std::size_t> partner;
    double angle = 0.0;

    static Gate rx(std::size_t q, double theta) {
        return {GateKind::RX, q, std::nullopt, theta};
    }
    static Gate ry(std::size_t q, double theta) {
        return {GateKind::RY, q, std::nullopt, theta};
    }
    static Gate rz(std::size_t q, double theta) {
        return {GateKind::RZ, q, std::nullopt, theta};
    }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, target, control, 0.0};
    }
    static Gate zz(std::size_t a, std::size_t b, double theta) {
        return {GateKind::ZZ, a, b, theta};
    }
};

/// Applies `gate` in place. Throws IndexError on bad qubit indices.
void apply_gate(StateVector &state, const Gate &gate);

/// Value-returning form: consumes the input state.
[[nodiscard]] StateVector apply_gate(StateVector &&state, const Gate &gate);

/// One term of a real linear combination of Pauli-Z strings.
struct ZTerm {
    double coefficient = 1.0;
    std::vector<std::size_t> support;
};

/// Real linear combination of Z-strings. An empty term list is the zero
/// observable.
struct Observable {
    std::vector<ZTerm> terms;

    static Observable z(std::size_t qubit) { return {{{1.0, {qubit}}}}; }
    static Observable zz(std::size_t a, std::size_t b) {
        return {{{1.0, {a, b}}}};
    }

    /// Sum of |coefficient| over terms: the bound on |<O>|.
    [[nodiscard]] double coefficient_bound() const noexcept;
};

/// <psi|O|psi>. Throws IndexError when a support qubit is out of range.
[[nodiscard]] double expectation(const StateVector &state,
                                 const Observable &obs);

/// Exchanges the basis-label bits of qubits a and b.
void swap_qubits(StateVector &state, std::size_t a, std::size_t b);
[[nodiscard]] StateVector swap_qubits(StateVector &&state, std::size_t a,
                                      std::size_t b);

} // namespace hydraq
