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

#include "hydraq/circuit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "hydraq/errors.hpp"
#include "oracles.hpp"
#include "spectra.hpp"

using namespace hydraq;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<LayerKind> kinds(const CircuitSpec &c) {
    std::vector<LayerKind> out;
    for (const auto &l : c.layers()) {
        out.push_back(layer_kind(l));
    }
    return out;
}

// Counts distinct parameter slots referenced by the compiled tape.
std::size_t referenced_slots(const CircuitSpec &c, std::size_t features) {
    std::set<std::size_t> slots;
    for (const auto &op : CompiledCircuit(c, features).ops()) {
        if (op.source == AngleSource::Parameter) {
            slots.insert(op.index);
        }
    }
    return slots.size();
}

} // namespace

TEST(BuildQsm, single_qubit_layer_order) {
    const auto c = build_qsm(1, 1, 1, EntanglerPattern::None, per_qubit_z(1));
    EXPECT_EQ(c.num_parameters(), 3U);
    EXPECT_EQ(kinds(c), (std::vector<LayerKind>{LayerKind::Encoding,
                                                LayerKind::Variational,
                                                LayerKind::Measurement}));
}

TEST(BuildQsm, eight_qubit_parameter_count) {
    const auto c =
        build_qsm(8, 3, 2, EntanglerPattern::RingCnot, per_qubit_z(8));
    EXPECT_EQ(c.num_parameters(), 144U);
    EXPECT_EQ(referenced_slots(c, 8), 144U);
    // Per block: Enc, then (Var, Ent) x 3; two blocks; one measurement.
    EXPECT_EQ(c.layers().size(), 2U * (1 + 2 * 3) + 1);
}

TEST(BuildQsm, symmetric_zz_adds_entangler_angles) {
    const auto c =
        build_qsm(4, 2, 1, EntanglerPattern::SymmetricZZ, per_qubit_z(4));
    EXPECT_EQ(c.num_parameters(), 2U * (4 * 3 + 4));
    EXPECT_EQ(referenced_slots(c, 4), c.num_parameters());
}

TEST(BuildQsm, rejects_empty_measurement) {
    EXPECT_THROW(build_qsm(2, 1, 1, EntanglerPattern::RingCnot, {}),
                 ConfigError);
    EXPECT_THROW(build_qsm(2, 0, 1, EntanglerPattern::RingCnot,
                           per_qubit_z(2)),
                 ConfigError);
    EXPECT_THROW(build_qsm(2, 1, 0, EntanglerPattern::RingCnot,
                           per_qubit_z(2)),
                 ConfigError);
    EXPECT_THROW(build_qsm(2, 1, 1, EntanglerPattern::RingCnot,
                           {Observable::z(2)}),
                 IndexError);
}

TEST(CircuitSpec, measurement_must_be_last_and_unique) {
    const MeasurementLayer meas{{Observable::z(0)}};
    EXPECT_THROW(CircuitSpec(1, {meas, EncodingLayer{}}, 1), ConfigError);
    EXPECT_THROW(CircuitSpec(1, {meas, meas}, 1), ConfigError);
    EXPECT_THROW(CircuitSpec(1, {EncodingLayer{}}, 1), ConfigError);
    EXPECT_NO_THROW(CircuitSpec(1, {EncodingLayer{}, meas}, 1));
}

TEST(BuildSuSymmetric, parameter_counts) {
    EXPECT_EQ(build_su_symmetric(3, 1, 1).num_parameters(), 4U);
    EXPECT_EQ(build_su_symmetric(3, 2, 2).num_parameters(), 16U);
    EXPECT_EQ(build_su_symmetric(3, 2, 2).num_qubits(), 2U);
    EXPECT_THROW(build_su_symmetric(0, 1, 1), ConfigError);
}

TEST(BuildSuSymmetric, pure_encoding_gives_cosine) {
    const auto c = build_su_symmetric(1, 1, 0);
    EXPECT_EQ(c.num_parameters(), 0U);
    for (double x : {-2.5, -0.3, 0.0, 0.9, 3.1}) {
        const std::vector<double> f{x};
        EXPECT_NEAR(evaluate(c, f, {}).values.at(0), std::cos(x), 1e-12);
    }
}

TEST(BuildSuSymmetric, round_robin_feature_schedule) {
    EXPECT_EQ(su_block_features(3, 3, 0), (std::vector<std::size_t>{0}));
    EXPECT_EQ(su_block_features(3, 3, 2), (std::vector<std::size_t>{2}));
    EXPECT_EQ(su_block_features(3, 1, 0), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(su_block_features(4, 3, 0), (std::vector<std::size_t>{0, 3}));
    EXPECT_EQ(su_block_features(2, 3, 2), (std::vector<std::size_t>{0}));
    EXPECT_EQ(su_block_features(1, 3, 1), (std::vector<std::size_t>{0}));
}

TEST(BuildSuSymmetric, state_stays_swap_invariant_after_every_layer) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> small(1, 4);
    double worst = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
        const auto c = build_su_symmetric(small(rng), small(rng), small(rng));
        const auto f = oracle::uniform_vector(rng, c.num_features(), -kPi, kPi);
        const auto p =
            oracle::uniform_vector(rng, c.num_parameters(), -kPi, kPi);
        const CompiledCircuit compiled(c, f.size());
        (void)compiled.prepare(f, p, [&](std::size_t, const StateVector &s) {
            auto swapped = s;
            swap_qubits(swapped, 0, 1);
            double diff = 0.0;
            for (std::size_t i = 0; i < s.dimension(); ++i) {
                diff += std::norm(swapped.amplitudes()[i] - s.amplitudes()[i]);
            }
            worst = std::max(worst, std::sqrt(diff));
        });
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(Evaluate, encoding_only_single_qubit) {
    const CircuitSpec c(1, {EncodingLayer{}, MeasurementLayer{{Observable::z(0)}}},
                        1);
    const std::vector<double> x{0.0};
    EXPECT_EQ(evaluate(c, x, {}).values, std::vector<double>{1.0});
}

TEST(Evaluate, coaxial_reuploading_adds_angles) {
    const auto c = spectra::coaxial_model(2);
    ASSERT_EQ(c.num_parameters(), 2U);
    const std::vector<double> x{kPi / 4};
    EXPECT_NEAR(evaluate(c, x, std::vector<double>{0.0, 0.0}).values[0], 0.0,
                1e-12);

    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
        const auto p = oracle::uniform_vector(rng, 2, -kPi, kPi);
        const auto f = oracle::uniform_vector(rng, 1, -kPi, kPi);
        EXPECT_NEAR(evaluate(c, f, p).values[0],
                    std::cos(p[0] + p[1] + 2 * f[0]), 1e-12);
    }
}

TEST(Evaluate, matches_dense_product_oracle) {
    std::mt19937_64 rng(31);
    for (auto pattern : {EntanglerPattern::RingCnot, EntanglerPattern::FullCnot,
                         EntanglerPattern::SymmetricZZ,
                         EntanglerPattern::None}) {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Observable> obs = per_qubit_z(3);
            obs.push_back(Observable{{{0.7, {0, 2}}, {-0.2, {1}}}});
            const auto c = build_qsm(3, 2, 2, pattern, obs);
            const auto f = oracle::uniform_vector(rng, 3, -kPi, kPi);
            const auto p =
                oracle::uniform_vector(rng, c.num_parameters(), -kPi, kPi);
            const auto got = evaluate(c, f, p).values;
            const auto want = oracle::dense_evaluate(c, f, p);
            ASSERT_EQ(got.size(), want.size());
            for (std::size_t j = 0; j < got.size(); ++j) {
                EXPECT_NEAR(got[j], want[j], 1e-10);
            }
        }
    }
    for (int trial = 0; trial < 10; ++trial) {
        const auto c = build_su_symmetric(3, 2, 2);
        const auto f = oracle::uniform_vector(rng, 3, -kPi, kPi);
        const auto p = oracle::uniform_vector(rng, c.num_parameters(), -kPi, kPi);
        EXPECT_NEAR(evaluate(c, f, p).values[0],
                    oracle::dense_evaluate(c, f, p)[0], 1e-10);
    }
}

TEST(Evaluate, fewer_features_than_qubits_leaves_rest_unencoded) {
    std::mt19937_64 rng(4);
    const auto c = build_qsm(4, 1, 1, EntanglerPattern::RingCnot, per_qubit_z(4));
    const auto p = oracle::uniform_vector(rng, c.num_parameters(), -kPi, kPi);
    const std::vector<double> two{0.4, -1.1};
    const std::vector<double> padded{0.4, -1.1, 0.0, 0.0};
    const auto a = evaluate(c, two, p).values;
    const auto b = evaluate(c, padded, p).values;
    for (std::size_t j = 0; j < a.size(); ++j) {
        EXPECT_NEAR(a[j], b[j], 1e-14);
    }
}

TEST(Evaluate, shape_errors) {
    const auto c = build_qsm(2, 1, 1, EntanglerPattern::RingCnot, per_qubit_z(2));
    const std::vector<double> p(c.num_parameters(), 0.0);
    EXPECT_THROW(evaluate(c, std::vector<double>{0, 0, 0}, p), ShapeError);
    EXPECT_THROW(evaluate(c, std::vector<double>{0, 0},
                          std::vector<double>(5, 0.0)),
                 ShapeError);
    const auto su = build_su_symmetric(3, 1, 1);
    EXPECT_THROW(evaluate(su, std::vector<double>{0, 0},
                          std::vector<double>(4, 0.0)),
                 ShapeError);
}

TEST(Evaluate, single_reupload_equals_plain_vqc) {
    std::mt19937_64 rng(12);
    const auto qsm = build_qsm(3, 2, 1, EntanglerPattern::RingCnot, per_qubit_z(3));
    // Same program written out by hand: U = V2 V1 S(x), no re-uploading.
    const CircuitSpec plain(
        3,
        {EncodingLayer{}, VariationalLayer{}, EntanglerLayer{},
         VariationalLayer{}, EntanglerLayer{},
         MeasurementLayer{per_qubit_z(3)}},
        1);
    ASSERT_EQ(plain.num_parameters(), qsm.num_parameters());
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = oracle::uniform_vector(rng, 3, -kPi, kPi);
        const auto p =
            oracle::uniform_vector(rng, qsm.num_parameters(), -kPi, kPi);
        EXPECT_EQ(evaluate(qsm, f, p).values, evaluate(plain, f, p).values);
    }
}

TEST(Evaluate, deterministic_and_bounded) {
    std::mt19937_64 rng(13);
    const auto c = build_qsm(4, 3, 2, EntanglerPattern::FullCnot, per_qubit_z(4));
    const auto f = oracle::uniform_vector(rng, 4, -kPi, kPi);
    const auto p = oracle::uniform_vector(rng, c.num_parameters(), -kPi, kPi);
    const auto first = evaluate(c, f, p).values;
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(evaluate(c, f, p).values, first);
    }
    for (int trial = 0; trial < 200; ++trial) {
        const auto ff = oracle::uniform_vector(rng, 4, -kPi, kPi);
        const auto pp =
            oracle::uniform_vector(rng, c.num_parameters(), -kPi, kPi);
        for (double z : evaluate(c, ff, pp).values) {
            EXPECT_LE(std::abs(z), 1.0 + 1e-12);
        }
    }
}

TEST(Evaluate, reuploading_raises_fourier_degree_to_l) {
    for (std::size_t L = 1; L <= 3; ++L) {
        std::mt19937_64 rng(40 + L);
        const auto c = spectra::coaxial_model(L);
        const auto p = oracle::uniform_vector(rng, L, -kPi, kPi);
        EXPECT_EQ(spectra::highest_frequency(c, p, 256), L);
    }
}

TEST(CircuitConfig, round_trip_rebuilds_identical_circuit) {
    const auto qsm =
        build_qsm(4, 3, 2, EntanglerPattern::RingCnot, per_qubit_z(4));
    const auto text = circuit_to_config(qsm);
    EXPECT_EQ(text, "family = qsm\nqubits = 4\nlayers = 3\nreuploads = 2\n"
                    "entangler = ring_cnot\nobservables = Z0; Z1; Z2; Z3\n");
    const auto back = circuit_from_config(text);
    EXPECT_EQ(circuit_to_config(back), text);
    EXPECT_EQ(back.num_parameters(), qsm.num_parameters());

    const auto su = build_su_symmetric(3, 3, 2);
    const auto su_back = circuit_from_config(circuit_to_config(su));
    EXPECT_EQ(su_back.num_parameters(), 24U);
    EXPECT_EQ(su_back.num_features(), 3U);

    EXPECT_THROW(circuit_from_config("family = qsm\nqubits = 2\n"), ConfigError);
    EXPECT_THROW(circuit_from_config("family = tree\n"), ConfigError);
}

TEST(CircuitConfig, observable_text_form) {
    const Observable o{{{0.5, {0}}, {-1e-20, {1, 2}}, {1.0, {3}}}};
    const auto text = format_observable(o);
    const auto back = parse_observable(text);
    ASSERT_EQ(back.terms.size(), 3U);
    EXPECT_EQ(back.terms[1].coefficient, -1e-20);
    EXPECT_EQ(back.terms[1].support, (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(format_observable(back), text);
    EXPECT_TRUE(parse_observable("0").terms.empty());
    EXPECT_EQ(parse_observable("Z0+Z1").terms.size(), 2U);
    EXPECT_THROW(parse_observable("X0"), ConfigError);
}
