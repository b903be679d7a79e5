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

#include <algorithm>
#include <sstream>
#include <utility>

#include "hydraq/errors.hpp"
#include "hydraq/kvconfig.hpp"

namespace hydraq {

namespace {

template <class... Ts> struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::pair<std::size_t, std::size_t>>
entangler_pairs(EntanglerPattern pattern, std::size_t k) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    switch (pattern) {
    case EntanglerPattern::None:
        break;
    case EntanglerPattern::RingCnot:
    case EntanglerPattern::SymmetricZZ:
        if (k == 2 && pattern == EntanglerPattern::SymmetricZZ) {
            // (0,1) and (1,0) are the same ZZ interaction.
            pairs.emplace_back(0, 1);
        } else if (k >= 2) {
            for (std::size_t q = 0; q < k; ++q) {
                pairs.emplace_back(q, (q + 1) % k);
            }
        }
        break;
    case EntanglerPattern::FullCnot:
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                pairs.emplace_back(i, j);
            }
        }
        break;
    }
    return pairs;
}

GateKind rotation_kind(Axis axis) {
    switch (axis) {
    case Axis::X:
        return GateKind::RX;
    case Axis::Y:
        return GateKind::RY;
    case Axis::Z:
        return GateKind::RZ;
    }
    return GateKind::RY;
}

} // namespace

std::string_view to_string(EntanglerPattern pattern) {
    switch (pattern) {
    case EntanglerPattern::None:
        return "none";
    case EntanglerPattern::RingCnot:
        return "ring_cnot";
    case EntanglerPattern::FullCnot:
        return "full_cnot";
    case EntanglerPattern::SymmetricZZ:
        return "symmetric_zz";
    }
    return "none";
}

EntanglerPattern parse_entangler(std::string_view text) {
    text = trim(text);
    for (auto p : {EntanglerPattern::None, EntanglerPattern::RingCnot,
                   EntanglerPattern::FullCnot, EntanglerPattern::SymmetricZZ}) {
        if (text == to_string(p)) {
            return p;
        }
    }
    throw ConfigError("unknown entangler pattern '" + std::string(text) + "'");
}

LayerKind layer_kind(const LayerSpec &layer) {
    return std::visit(
        Overloaded{[](const EncodingLayer &) { return LayerKind::Encoding; },
                   [](const VariationalLayer &) {
                       return LayerKind::Variational;
                   },
                   [](const EntanglerLayer &) { return LayerKind::Entangler; },
                   [](const MeasurementLayer &) {
                       return LayerKind::Measurement;
                   }},
        layer);
}

std::size_t layer_parameter_count(const LayerSpec &layer,
                                  std::size_t num_qubits) {
    if (const auto *v = std::get_if<VariationalLayer>(&layer)) {
        return v->shared ? v->axes.size() : v->axes.size() * num_qubits;
    }
    if (const auto *e = std::get_if<EntanglerLayer>(&layer)) {
        if (e->pattern == EntanglerPattern::SymmetricZZ) {
            return entangler_pairs(e->pattern, num_qubits).size();
        }
    }
    return 0;
}

CircuitSpec::CircuitSpec(std::size_t num_qubits, std::vector<LayerSpec> layers,
                         std::size_t num_reuploads, std::size_t num_features,
                         CircuitRecipe recipe)
    : num_qubits_(num_qubits), layers_(std::move(layers)),
      num_reuploads_(num_reuploads), num_features_(num_features),
      recipe_(std::move(recipe)) {
    if (num_qubits_ == 0 || num_qubits_ > kMaxQubits) {
        throw CapacityError("circuit needs 1.." + std::to_string(kMaxQubits) +
                            " qubits, got " + std::to_string(num_qubits_));
    }
    if (num_reuploads_ == 0) {
        throw ConfigError("num_reuploads must be >= 1");
    }
    if (layers_.empty() ||
        layer_kind(layers_.back()) != LayerKind::Measurement) {
        throw ConfigError("the last layer must be a Measurement layer");
    }
    const auto measurements =
        std::count_if(layers_.begin(), layers_.end(), [](const auto &l) {
            return layer_kind(l) == LayerKind::Measurement;
        });
    if (measurements != 1) {
        throw ConfigError("circuit must contain exactly one Measurement layer");
    }

    std::size_t slot = 0;
    for (auto &layer : layers_) {
        std::visit(
            Overloaded{
                [&](EncodingLayer &enc) {
                    for (const auto &a : enc.assignments) {
                        if (num_features_ > 0 && a.feature >= num_features_) {
                            throw IndexError("encoding references feature " +
                                             std::to_string(a.feature) +
                                             " of " +
                                             std::to_string(num_features_));
                        }
                        for (std::size_t q : a.qubits) {
                            if (q >= num_qubits_) {
                                throw IndexError("encoding targets qubit " +
                                                 std::to_string(q));
                            }
                        }
                    }
                },
                [&](VariationalLayer &var) {
                    if (var.axes.empty()) {
                        throw ConfigError("variational layer has no axes");
                    }
                    var.first_slot = slot;
                },
                [&](EntanglerLayer &ent) { ent.first_slot = slot; },
                [&](MeasurementLayer &meas) {
                    if (meas.observables.empty()) {
                        throw ConfigError(
                            "measurement layer needs at least one observable");
                    }
                    for (const auto &obs : meas.observables) {
                        for (const auto &term : obs.terms) {
                            for (std::size_t q : term.support) {
                                if (q >= num_qubits_) {
                                    throw IndexError(
                                        "observable acts on qubit " +
                                        std::to_string(q) + " of a " +
                                        std::to_string(num_qubits_) +
                                        "-qubit circuit");
                                }
                            }
                        }
                    }
                }},
            layer);
        slot += layer_parameter_count(layer, num_qubits_);
    }
    num_parameters_ = slot;
    recipe_.qubits = num_qubits_;
    recipe_.reuploads = num_reuploads_;
}

const MeasurementLayer &CircuitSpec::measurement() const {
    return std::get<MeasurementLayer>(layers_.back());
}

void CircuitSpec::check_feature_count(std::size_t count) const {
    if (num_features_ > 0) {
        if (count != num_features_) {
            throw ShapeError("circuit expects " + std::to_string(num_features_) +
                             " features, got " + std::to_string(count));
        }
        return;
    }
    if (count > num_qubits_) {
        throw ShapeError("feature count " + std::to_string(count) +
                         " exceeds qubit count " + std::to_string(num_qubits_));
    }
    for (const auto &layer : layers_) {
        if (const auto *enc = std::get_if<EncodingLayer>(&layer)) {
            for (const auto &a : enc->assignments) {
                if (a.feature >= count) {
                    throw ShapeError("encoding needs feature " +
                                     std::to_string(a.feature) + " but only " +
                                     std::to_string(count) + " supplied");
                }
            }
        }
    }
}

std::vector<Observable> per_qubit_z(std::size_t num_qubits) {
    std::vector<Observable> out;
    for (std::size_t q = 0; q < num_qubits; ++q) {
        out.push_back(Observable::z(q));
    }
    return out;
}

CircuitSpec build_qsm(std::size_t num_qubits, std::size_t num_layers,
                      std::size_t num_reuploads, EntanglerPattern pattern,
                      std::vector<Observable> observables) {
    if (num_layers == 0) {
        throw ConfigError("QSM needs at least one variational layer");
    }
    if (observables.empty()) {
        throw ConfigError("QSM needs at least one observable");
    }
    std::vector<LayerSpec> layers;
    for (std::size_t r = 0; r < num_reuploads; ++r) {
        layers.emplace_back(EncodingLayer{});
        for (std::size_t l = 0; l < num_layers; ++l) {
            layers.emplace_back(VariationalLayer{});
            if (pattern != EntanglerPattern::None) {
                layers.emplace_back(EntanglerLayer{pattern});
            }
        }
    }
    CircuitRecipe recipe;
    recipe.family = CircuitRecipe::Family::Qsm;
    recipe.layers = num_layers;
    recipe.entangler = pattern;
    recipe.observables = observables;
    layers.emplace_back(MeasurementLayer{std::move(observables)});
    return CircuitSpec(num_qubits, std::move(layers), num_reuploads, 0,
                       std::move(recipe));
}

std::vector<std::size_t> su_block_features(std::size_t num_features,
                                           std::size_t num_reuploads,
                                           std::size_t block) {
    std::vector<std::size_t> out;
    const std::size_t limit = std::max(num_features, num_reuploads);
    for (std::size_t t = block; t < limit; t += num_reuploads) {
        out.push_back(t % num_features);
    }
    return out;
}

CircuitSpec build_su_symmetric(std::size_t num_features,
                               std::size_t num_reuploads,
                               std::size_t num_blocks) {
    if (num_features == 0) {
        throw ConfigError("symmetric circuit needs at least one feature");
    }
    if (num_reuploads == 0) {
        throw ConfigError("num_reuploads must be >= 1");
    }
    std::vector<LayerSpec> layers;
    for (std::size_t r = 0; r < num_reuploads; ++r) {
        EncodingLayer enc;
        for (std::size_t f : su_block_features(num_features, num_reuploads, r)) {
            enc.assignments.push_back({f, {0, 1}});
        }
        layers.emplace_back(std::move(enc));
        for (std::size_t b = 0; b < num_blocks; ++b) {
            VariationalLayer var;
            var.shared = true;
            layers.emplace_back(var);
            layers.emplace_back(EntanglerLayer{EntanglerPattern::SymmetricZZ});
        }
    }
    const Observable symmetric_z{{{0.5, {0}}, {0.5, {1}}}};
    CircuitRecipe recipe;
    recipe.family = CircuitRecipe::Family::SuSymmetric;
    recipe.layers = num_blocks;
    recipe.features = num_features;
    recipe.entangler = EntanglerPattern::SymmetricZZ;
    recipe.observables = {symmetric_z};
    layers.emplace_back(MeasurementLayer{{symmetric_z}});
    return CircuitSpec(2, std::move(layers), num_reuploads, num_features,
                       std::move(recipe));
}

CompiledCircuit::CompiledCircuit(const CircuitSpec &circuit,
                                 std::size_t num_features)
    : circuit_(&circuit), num_features_(num_features) {
    circuit.check_feature_count(num_features);
    const std::size_t k = circuit.num_qubits();
    const auto layers = circuit.layers();
    for (std::size_t li = 0; li + 1 < layers.size(); ++li) {
        const auto &layer = layers[li];
        if (const auto *enc = std::get_if<EncodingLayer>(&layer)) {
            if (enc->assignments.empty()) {
                for (std::size_t j = 0; j < num_features; ++j) {
                    ops_.push_back(
                        {Gate::ry(j, 0.0), AngleSource::Feature, j, li});
                }
            }
            for (const auto &a : enc->assignments) {
                for (std::size_t q : a.qubits) {
                    ops_.push_back(
                        {Gate::ry(q, 0.0), AngleSource::Feature, a.feature, li});
                }
            }
        } else if (const auto *var = std::get_if<VariationalLayer>(&layer)) {
            const std::size_t n_axes = var->axes.size();
            for (std::size_t q = 0; q < k; ++q) {
                for (std::size_t a = 0; a < n_axes; ++a) {
                    const std::size_t slot =
                        var->first_slot + (var->shared ? a : q * n_axes + a);
                    Gate g{rotation_kind(var->axes[a]), q, std::nullopt, 0.0};
                    ops_.push_back({g, AngleSource::Parameter, slot, li});
                }
            }
        } else if (const auto *ent = std::get_if<EntanglerLayer>(&layer)) {
            const auto pairs = entangler_pairs(ent->pattern, k);
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                const auto [a, b] = pairs[p];
                if (ent->pattern == EntanglerPattern::SymmetricZZ) {
                    ops_.push_back({Gate::zz(a, b, 0.0), AngleSource::Parameter,
                                    ent->first_slot + p, li});
                } else {
                    ops_.push_back({Gate::cnot(a, b), AngleSource::Fixed, 0, li});
                }
            }
        }
    }
}

void CompiledCircuit::check_inputs(std::span<const double> features,
                                   std::span<const double> params) const {
    if (features.size() != num_features_) {
        throw ShapeError("compiled for " + std::to_string(num_features_) +
                         " features, got " + std::to_string(features.size()));
    }
    if (params.size() != circuit_->num_parameters()) {
        throw ShapeError("circuit has " +
                         std::to_string(circuit_->num_parameters()) +
                         " parameters, got " + std::to_string(params.size()));
    }
}

double CompiledCircuit::angle(const TapeOp &op,
                              std::span<const double> features,
                              std::span<const double> params) const {
    switch (op.source) {
    case AngleSource::Feature:
        return features[op.index];
    case AngleSource::Parameter:
        return params[op.index];
    case AngleSource::Fixed:
        break;
    }
    return op.gate.angle;
}

void CompiledCircuit::run(StateVector &state, std::size_t begin,
                          std::size_t end, std::span<const double> features,
                          std::span<const double> params) const {
    for (std::size_t i = begin; i < end; ++i) {
        Gate g = ops_[i].gate;
        g.angle = angle(ops_[i], features, params);
        apply_gate(state, g);
    }
}

StateVector CompiledCircuit::prepare(std::span<const double> features,
                                     std::span<const double> params,
                                     const LayerObserver &observer) const {
    check_inputs(features, params);
    StateVector state(circuit_->num_qubits());
    if (!observer) {
        run(state, 0, ops_.size(), features, params);
        return state;
    }
    const std::size_t n_layers = circuit_->layers().size() - 1;
    std::size_t i = 0;
    for (std::size_t li = 0; li < n_layers; ++li) {
        const std::size_t begin = i;
        while (i < ops_.size() && ops_[i].layer == li) {
            ++i;
        }
        run(state, begin, i, features, params);
        observer(li, state);
    }
    return state;
}

LatentVector CompiledCircuit::measure(const StateVector &state) const {
    LatentVector z;
    for (const auto &obs : circuit_->measurement().observables) {
        z.values.push_back(expectation(state, obs));
    }
    return z;
}

LatentVector evaluate(const CircuitSpec &circuit,
                      std::span<const double> features,
                      std::span<const double> params) {
    const CompiledCircuit compiled(circuit, features.size());
    return compiled.measure(compiled.prepare(features, params));
}

std::string format_observable(const Observable &obs) {
    if (obs.terms.empty()) {
        return "0";
    }
    std::string out;
    for (std::size_t t = 0; t < obs.terms.size(); ++t) {
        const auto &term = obs.terms[t];
        if (t > 0) {
            out += " + ";
        }
        if (term.coefficient != 1.0 || term.support.empty()) {
            out += format_double(term.coefficient);
            if (!term.support.empty()) {
                out += "*";
            }
        }
        for (std::size_t q : term.support) {
            out += "Z" + std::to_string(q);
        }
    }
    return out;
}

Observable parse_observable(std::string_view text) {
    text = trim(text);
    Observable obs;
    if (text == "0") {
        return obs;
    }
    // Split on '+' that is not an exponent sign.
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '+' && i > 0 && text[i - 1] != 'e' &&
            text[i - 1] != 'E') {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(text.substr(start));

    for (auto part : parts) {
        part = trim(part);
        ZTerm term;
        const auto star = part.find('*');
        std::string_view zs = part;
        if (star != std::string_view::npos) {
            const auto coef = parse_double(part.substr(0, star));
            if (!coef) {
                throw ConfigError("bad observable coefficient in '" +
                                  std::string(part) + "'");
            }
            term.coefficient = *coef;
            zs = trim(part.substr(star + 1));
        } else if (!zs.empty() && zs.front() != 'Z') {
            const auto coef = parse_double(zs);
            if (!coef) {
                throw ConfigError("bad observable term '" + std::string(part) +
                                  "'");
            }
            term.coefficient = *coef;
            zs = {};
        }
        while (!zs.empty()) {
            if (zs.front() != 'Z') {
                throw ConfigError("expected Z<index> in observable term '" +
                                  std::string(part) + "'");
            }
            zs.remove_prefix(1);
            std::size_t n = 0;
            while (n < zs.size() && zs[n] >= '0' && zs[n] <= '9') {
                ++n;
            }
            const auto q = parse_int(zs.substr(0, n));
            if (!q || *q < 0) {
                throw ConfigError("missing qubit index in observable term '" +
                                  std::string(part) + "'");
            }
            term.support.push_back(static_cast<std::size_t>(*q));
            zs.remove_prefix(n);
        }
        obs.terms.push_back(std::move(term));
    }
    return obs;
}

std::string circuit_to_config(const CircuitSpec &circuit) {
    const auto &r = circuit.recipe();
    if (r.family == CircuitRecipe::Family::Custom) {
        throw ConfigError("custom circuits have no config form");
    }
    std::ostringstream out;
    out << "family = "
        << (r.family == CircuitRecipe::Family::Qsm ? "qsm" : "su_symmetric")
        << "\n";
    out << "qubits = " << r.qubits << "\n";
    if (r.family == CircuitRecipe::Family::SuSymmetric) {
        out << "features = " << r.features << "\n";
    }
    out << "layers = " << r.layers << "\n";
    out << "reuploads = " << r.reuploads << "\n";
    out << "entangler = " << to_string(r.entangler) << "\n";
    out << "observables = ";
    for (std::size_t i = 0; i < r.observables.size(); ++i) {
        out << (i ? "; " : "") << format_observable(r.observables[i]);
    }
    out << "\n";
    return out.str();
}

CircuitSpec circuit_from_config(std::string_view text) {
    const auto doc = KvDocument::parse(text, "<circuit>");
    const auto family = doc.get_string("", "family");
    const auto count = [&](const char *key) {
        const auto v = doc.get_int("", key);
        if (v < 0) {
            throw ConfigError(doc.where("", key) + ": must be >= 0");
        }
        return static_cast<std::size_t>(v);
    };
    std::vector<Observable> observables;
    {
        const auto obs_text = doc.get_string("", "observables");
        std::size_t pos = 0;
        while (pos <= obs_text.size()) {
            auto semi = obs_text.find(';', pos);
            if (semi == std::string::npos) {
                semi = obs_text.size();
            }
            const auto item =
                trim(std::string_view(obs_text).substr(pos, semi - pos));
            if (!item.empty()) {
                observables.push_back(parse_observable(item));
            }
            pos = semi + 1;
        }
    }
    if (family == "qsm") {
        return build_qsm(count("qubits"), count("layers"), count("reuploads"),
                         parse_entangler(doc.get_string("", "entangler")),
                         std::move(observables));
    }
    if (family == "su_symmetric") {
        if (count("qubits") != 2) {
            throw ConfigError(doc.where("", "qubits") +
                              ": symmetric family is fixed at 2 qubits");
        }
        auto circuit = build_su_symmetric(count("features"), count("reuploads"),
                                          count("layers"));
        const auto &expected = circuit.recipe().observables;
        if (observables.size() != expected.size() ||
            format_observable(observables[0]) !=
                format_observable(expected[0])) {
            throw ConfigError(doc.where("", "observables") +
                              ": symmetric family measures 0.5*Z0 + 0.5*Z1");
        }
        return circuit;
    }
    throw ConfigError(doc.where("", "family") + ": unknown family '" + family +
                      "'");
}

} // namespace hydraq
