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

// Fourier-degree helpers for the single-qubit coaxial re-uploading model.

#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "hydraq/circuit.hpp"

namespace hydraq::spectra {

/// 1 qubit, L blocks of [RY(x), RY(theta_l)], measured in Z. The output is
/// cos(sum theta + L x).
inline CircuitSpec coaxial_model(std::size_t reuploads) {
    std::vector<LayerSpec> layers;
    for (std::size_t l = 0; l < reuploads; ++l) {
        layers.emplace_back(EncodingLayer{});
        VariationalLayer var;
        var.axes = {Axis::Y};
        layers.emplace_back(var);
    }
    layers.emplace_back(MeasurementLayer{{Observable::z(0)}});
    return CircuitSpec(1, std::move(layers), reuploads);
}

/// Magnitudes |c_f| of the discrete Fourier transform of z(x) sampled at
/// `points` equispaced x in [0, 2 pi), for f = 0..points/2.
inline std::vector<double> magnitude_spectrum(const CircuitSpec &circuit,
                                              const std::vector<double> &params,
                                              std::size_t points) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> z(points);
    for (std::size_t i = 0; i < points; ++i) {
        const std::vector<double> x{two_pi * static_cast<double>(i) /
                                    static_cast<double>(points)};
        z[i] = evaluate(circuit, x, params).values[0];
    }
    std::vector<double> mags(points / 2 + 1);
    for (std::size_t f = 0; f < mags.size(); ++f) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < points; ++i) {
            acc += z[i] * std::polar(1.0, -two_pi * static_cast<double>(f * i) /
                                              static_cast<double>(points));
        }
        mags[f] = std::abs(acc) / static_cast<double>(points);
    }
    return mags;
}

/// Highest frequency whose spectral magnitude exceeds `threshold`.
inline std::size_t highest_frequency(const CircuitSpec &circuit,
                                     const std::vector<double> &params,
                                     std::size_t points,
                                     double threshold = 1e-9) {
    const auto mags = magnitude_spectrum(circuit, params, points);
    std::size_t top = 0;
    for (std::size_t f = 0; f < mags.size(); ++f) {
        if (mags[f] > threshold) {
            top = f;
        }
    }
    return top;
}

} // namespace hydraq::spectra
