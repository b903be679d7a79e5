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

#include "hydraq/head.hpp"

#include <string>

#include "hydraq/errors.hpp"

namespace hydraq {

std::string_view to_string(HeadKind kind) {
    return kind == HeadKind::Identity ? "identity" : "linear";
}

HeadKind parse_head_kind(std::string_view text) {
    if (text == "identity") {
        return HeadKind::Identity;
    }
    if (text == "linear") {
        return HeadKind::Linear;
    }
    throw ConfigError("unknown head kind '" + std::string(text) + "'");
}

void HeadSpec::validate() const {
    if (num_outputs == 0) {
        throw ConfigError("head needs at least one latent input");
    }
    if (kind == HeadKind::Identity && num_outputs != 1) {
        throw ConfigError("identity head requires exactly one observable, got " +
                          std::to_string(num_outputs));
    }
}

double HeadSpec::raw(std::span<const double> z,
                     std::span<const double> head_params) const {
    if (z.size() != num_outputs || head_params.size() != num_parameters()) {
        throw ShapeError("head expects " + std::to_string(num_outputs) +
                         " latents and " + std::to_string(num_parameters()) +
                         " parameters");
    }
    if (kind == HeadKind::Identity) {
        return z[0];
    }
    double out = head_params[num_outputs];
    for (std::size_t j = 0; j < num_outputs; ++j) {
        out += head_params[j] * z[j];
    }
    return out;
}

std::vector<double> HeadSpec::initial_parameters() const {
    if (kind == HeadKind::Identity) {
        return {};
    }
    std::vector<double> p(num_outputs + 1, 1.0);
    p.back() = 0.0;
    return p;
}

} // namespace hydraq
