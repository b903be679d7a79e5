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

#include "hydraq/statevector.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "hydraq/errors.hpp"

namespace hydraq {

namespace {

void check_qubit(const StateVector &state, std::size_t q) {
    if (q >= state.num_qubits()) {
        throw IndexError("qubit index " + std::to_string(q) +
                         " out of range for " +
                         std::to_string(state.num_qubits()) + "-qubit state");
    }
}

// Applies the 2x2 matrix [[m00, m01], [m10, m11]] to `qubit`.
void apply_single(std::span<Complex> amps, std::size_t bit, Complex m00,
                  Complex m01, Complex m10, Complex m11) {
    const std::size_t dim = amps.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) {
            continue;
        }
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | bit];
        amps[i] = m00 * a0 + m01 * a1;
        amps[i | bit] = m10 * a0 + m11 * a1;
    }
}

} // namespace

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw CapacityError("num_qubits must be in [1, " +
                            std::to_string(kMaxQubits) + "], got " +
                            std::to_string(num_qubits));
    }
    amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw ShapeError("amplitude count must be a power of two >= 2, got " +
                         std::to_string(dim));
    }
    const auto k = static_cast<std::size_t>(std::countr_zero(dim));
    if (k > kMaxQubits) {
        throw CapacityError("state exceeds " + std::to_string(kMaxQubits) +
                            " qubits");
    }
    StateVector out;
    out.num_qubits_ = k;
    out.amplitudes_ = std::move(amplitudes);
    return out;
}

double StateVector::norm_squared() const noexcept {
    double sum = 0.0;
    for (const auto &a : amplitudes_) {
        sum += std::norm(a);
    }
    return sum;
}

StateVector init_zero_state(std::size_t num_qubits) {
    return StateVector(num_qubits);
}

void apply_gate(StateVector &state, const Gate &gate) {
    check_qubit(state, gate.target);
    auto amps = state.mutable_amplitudes();
    const std::size_t tbit = state.mask(gate.target);
    const double c = std::cos(gate.angle / 2.0);
    const double s = std::sin(gate.angle / 2.0);

    switch (gate.kind) {
    case GateKind::RX:
        apply_single(amps, tbit, {c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0});
        return;
    case GateKind::RY:
        apply_single(amps, tbit, {c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0});
        return;
    case GateKind::RZ: {
        const Complex p0{c, -s};
        const Complex p1{c, s};
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] *= (i & tbit) ? p1 : p0;
        }
        return;
    }
    case GateKind::CNOT:
    case GateKind::ZZ:
        break;
    }

    if (!gate.partner) {
        throw IndexError("two-qubit gate is missing its second qubit");
    }
    const std::size_t other = *gate.partner;
    check_qubit(state, other);
    if (other == gate.target) {
        throw IndexError("two-qubit gate acts twice on qubit " +
                         std::to_string(other));
    }
    const std::size_t obit = state.mask(other);

    if (gate.kind == GateKind::CNOT) {
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if ((i & obit) && !(i & tbit)) {
                std::swap(amps[i], amps[i | tbit]);
            }
        }
        return;
    }

    // ZZ eigenvalue is +1 on even parity, -1 on odd parity.
    const Complex even{c, -s};
    const Complex odd{c, s};
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const bool parity = ((i & tbit) != 0) != ((i & obit) != 0);
        amps[i] *= parity ? odd : even;
    }
}

StateVector apply_gate(StateVector &&state, const Gate &gate) {
    apply_gate(state, gate);
    return std::move(state);
}

double Observable::coefficient_bound() const noexcept {
    double sum = 0.0;
    for (const auto &t : terms) {
        sum += std::abs(t.coefficient);
    }
    return sum;
}

double expectation(const StateVector &state, const Observable &obs) {
    const auto amps = state.amplitudes();
    double total = 0.0;
    for (const auto &term : obs.terms) {
        std::size_t mask = 0;
        for (std::size_t q : term.support) {
            check_qubit(state, q);
            // Z_q Z_q = I, so repeated qubits cancel.
            mask ^= state.mask(q);
        }
        double value = 0.0;
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const double p = std::norm(amps[i]);
            value += (std::popcount(i & mask) & 1U) ? -p : p;
        }
        total += term.coefficient * value;
    }
    return total;
}

void swap_qubits(StateVector &state, std::size_t a, std::size_t b) {
    check_qubit(state, a);
    check_qubit(state, b);
    if (a == b) {
        throw IndexError("swap requires distinct qubits, got " +
                         std::to_string(a) + " twice");
    }
    auto amps = state.mutable_amplitudes();
    const std::size_t abit = state.mask(a);
    const std::size_t bbit = state.mask(b);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & abit) && !(i & bbit)) {
            std::swap(amps[i], amps[(i & ~abit) | bbit]);
        }
    }
}

StateVector swap_qubits(StateVector &&state, std::size_t a, std::size_t b) {
    swap_qubits(state, a, b);
    return std::move(state);
}

} // namespace hydraq
