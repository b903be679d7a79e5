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
#include <span>
#include <string_view>
#include <vector>

namespace hydraq {

enum class HeadKind { Identity, Linear };

std::string_view to_string(HeadKind kind);
HeadKind parse_head_kind(std::string_view text);

/**
 * Classical head mapping the latent vector z to a prediction:
 *
 *     identity: y = scale * z_0 + offset
 *     linear:   y = scale * (w . z + b) + offset
 *
 * Linear weights and bias are trainable and live in the tail of the model's
 * parameter vector as (w_1, ..., w_m, b). `scale`/`offset` are the frozen
 * output calibration.
 */
struct HeadSpec {
    HeadKind kind = HeadKind::Linear;
    std::size_t num_outputs = 1; // m, the latent dimension
    double scale = 1.0;
    double offset = 0.0;

    /// Throws ConfigError when an identity head is given m != 1.
    void validate() const;

    [[nodiscard]] std::size_t num_parameters() const noexcept {
        return kind == HeadKind::Linear ? num_outputs + 1 : 0;
    }

    /// Output before calibration, g(z).
    [[nodiscard]] double raw(std::span<const double> z,
                             std::span<const double> head_params) const;

    [[nodiscard]] double apply(std::span<const double> z,
                               std::span<const double> head_params) const {
        return scale * raw(z, head_params) + offset;
    }

    /// Unit weights and zero bias.
    [[nodiscard]] std::vector<double> initial_parameters() const;
};

} // namespace hydraq
