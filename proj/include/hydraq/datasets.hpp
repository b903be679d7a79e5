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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hydraq/matrix.hpp"

namespace hydraq {

inline constexpr std::size_t kNumBands = 8;
/// Model inputs: 8 bands, conductivity_signal, temperature.
inline constexpr std::size_t kNumSensorFeatures = kNumBands + 2;

struct SensorSample {
    std::array<double, kNumBands> spectral_bands{}; // reflectance in [0, 1]
    double conductivity_signal = 0.0;               // mS/cm
    double temperature = 0.0;                       // deg C
    std::int64_t timestamp = 0;                     // s
};

struct TargetRecord {
    double usg_points = 0.0;   // (USG - 1) * 1000, in [0, 40]
    double conductivity = 0.0; // mS/cm
    double volume = 0.0;       // mL
};

enum class Task { Usg, Conductivity, Volume };

std::string_view to_string(Task task);
/// Accepts "usg", "usg_points", "conductivity", "volume".
Task parse_task(std::string_view text);
/// CSV column holding the task's target.
std::string_view target_column(Task task);

struct Dataset {
    std::vector<SensorSample> samples;
    std::vector<TargetRecord> targets;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
    /// N x 10 feature matrix (timestamp excluded).
    [[nodiscard]] Matrix features() const;
    [[nodiscard]] std::vector<double> target(Task task) const;
    [[nodiscard]] Dataset subset(std::span<const std::size_t> rows) const;
};

std::vector<std::string> feature_names();

/**
 * Frozen generator constants. Every synthetic channel is a fixed function of
 * the latent hydration h in [0, 1]:
 *
 *   usg_points   = 40 (1 - h) + e,      e ~ N(0, (noise * 0.25 * 40)^2)
 *   conductivity = 5 + 20 (1 - h) + e,  e ~ N(0, (noise * 0.25 * 20)^2)
 *   volume       = 50 + 400 h + e,      e ~ N(0, (noise * 0.25 * 400)^2)
 *   band_i       = a_i + b_i (1 - exp(-usg_points / s_i)) + N(0, (noise*0.2)^2)
 *   conductivity_signal = conductivity * U(0.85, 1.15) + N(0, noise^2)
 *   temperature  ~ N(34, 2^2)
 *
 * usg_points is clamped to [0, 40], volume to >= 1, bands to [0, 1] and
 * conductivity quantities to >= 0.
 */
struct GeneratorConstants {
    static constexpr double kUsgSpan = 40.0;
    static constexpr double kConductivityBase = 5.0;
    static constexpr double kConductivitySpan = 20.0;
    static constexpr double kVolumeBase = 50.0;
    static constexpr double kVolumeSpan = 400.0;
    static constexpr double kTargetNoise = 0.25;
    static constexpr double kBandNoise = 0.2;
    static constexpr double kSignalNoise = 1.0;
    static constexpr double kDepthLow = 0.85;
    static constexpr double kDepthHigh = 1.15;
    static constexpr double kTemperatureMean = 34.0;
    static constexpr double kTemperatureSd = 2.0;
    static constexpr std::int64_t kTimestampStart = 1700000000;
    static constexpr std::int64_t kTimestampStep = 60;
    static constexpr std::array<double, kNumBands> kBandOffset{
        0.05, 0.10, 0.08, 0.12, 0.06, 0.15, 0.09, 0.11};
    static constexpr std::array<double, kNumBands> kBandGain{
        0.80, 0.70, 0.75, 0.60, 0.85, 0.55, 0.65, 0.72};
    static constexpr std::array<double, kNumBands> kBandScale{
        8.0, 12.0, 16.0, 20.0, 25.0, 30.0, 40.0, 60.0};
};

/// Throws ConfigError for n < 1 or a negative / non-finite noise level.
Dataset generate(std::size_t n, std::uint64_t seed, double noise_level);

/// Same channel model with the latent hydration supplied per sample.
Dataset generate_from_hydration(std::span<const double> hydration,
                                std::uint64_t seed, double noise_level);

/// timestamp,band_0,...,band_7,conductivity_signal,temperature,usg_points,
/// conductivity,volume
std::string csv_header();

/// Values are written in shortest round-trip form.
void write_csv(std::ostream &out, const Dataset &data);
void save_csv(const std::string &path, const Dataset &data);

/// Header-keyed: columns may appear in any order. Missing column ->
/// SchemaError naming it; bad cell -> ParseError with row and column; no
/// rows -> DataError.
Dataset read_csv(std::istream &in, const std::string &source = "<stream>");
Dataset load_csv(const std::string &path);

struct DatasetSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
};

/// Seeded shuffle of 0..n-1; the first round(n * test_fraction) indices
/// (at least 1) form the test part. Both lists are returned sorted.
DatasetSplit split(std::size_t n, double test_fraction, std::uint64_t seed);

} // namespace hydraq
