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

#include "hydraq/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "hydraq/errors.hpp"
#include "hydraq/kvconfig.hpp"

namespace hydraq {

namespace {

using K = GeneratorConstants;

std::vector<std::string> column_names() {
    std::vector<std::string> cols{"timestamp"};
    for (std::size_t b = 0; b < kNumBands; ++b) {
        cols.push_back("band_" + std::to_string(b));
    }
    for (const char *c : {"conductivity_signal", "temperature", "usg_points",
                          "conductivity", "volume"}) {
        cols.emplace_back(c);
    }
    return cols;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

void check_noise(double noise_level) {
    if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) {
        throw ConfigError("noise level must be finite and >= 0");
    }
}

} // namespace

std::string_view to_string(Task task) {
    switch (task) {
    case Task::Usg:
        return "usg";
    case Task::Conductivity:
        return "conductivity";
    case Task::Volume:
        return "volume";
    }
    return "?";
}

Task parse_task(std::string_view text) {
    const auto t = trim(text);
    if (t == "usg" || t == "usg_points") {
        return Task::Usg;
    }
    if (t == "conductivity") {
        return Task::Conductivity;
    }
    if (t == "volume") {
        return Task::Volume;
    }
    throw ConfigError("unknown task '" + std::string(t) +
                      "' (expected usg, conductivity or volume)");
}

std::string_view target_column(Task task) {
    return task == Task::Usg ? "usg_points" : to_string(task);
}

std::vector<std::string> feature_names() {
    auto cols = column_names();
    return {cols.begin() + 1, cols.begin() + 1 + kNumSensorFeatures};
}

Matrix Dataset::features() const {
    Matrix m(samples.size(), kNumSensorFeatures);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto &s = samples[i];
        for (std::size_t b = 0; b < kNumBands; ++b) {
            m(i, b) = s.spectral_bands[b];
        }
        m(i, kNumBands) = s.conductivity_signal;
        m(i, kNumBands + 1) = s.temperature;
    }
    return m;
}

std::vector<double> Dataset::target(Task task) const {
    std::vector<double> y;
    y.reserve(targets.size());
    for (const auto &t : targets) {
        switch (task) {
        case Task::Usg:
            y.push_back(t.usg_points);
            break;
        case Task::Conductivity:
            y.push_back(t.conductivity);
            break;
        case Task::Volume:
            y.push_back(t.volume);
            break;
        }
    }
    return y;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    for (auto r : rows) {
        if (r >= size()) {
            throw IndexError("row " + std::to_string(r) + " out of range");
        }
        out.samples.push_back(samples[r]);
        out.targets.push_back(targets[r]);
    }
    return out;
}

Dataset generate_from_hydration(std::span<const double> hydration,
                                std::uint64_t seed, double noise_level) {
    check_noise(noise_level);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> depth(K::kDepthLow, K::kDepthHigh);

    Dataset data;
    data.samples.reserve(hydration.size());
    data.targets.reserve(hydration.size());
    for (std::size_t i = 0; i < hydration.size(); ++i) {
        const double h = hydration[i];
        const double tn = noise_level * K::kTargetNoise;
        TargetRecord t;
        t.usg_points = std::clamp(K::kUsgSpan * (1.0 - h) +
                                      tn * K::kUsgSpan * gauss(rng),
                                  0.0, K::kUsgSpan);
        t.conductivity = std::max(
            0.0, K::kConductivityBase + K::kConductivitySpan * (1.0 - h) +
                     tn * K::kConductivitySpan * gauss(rng));
        t.volume = std::max(1.0, K::kVolumeBase + K::kVolumeSpan * h +
                                     tn * K::kVolumeSpan * gauss(rng));

        SensorSample s;
        for (std::size_t b = 0; b < kNumBands; ++b) {
            const double absorb =
                1.0 - std::exp(-t.usg_points / K::kBandScale[b]);
            s.spectral_bands[b] = std::clamp(
                K::kBandOffset[b] + K::kBandGain[b] * absorb +
                    noise_level * K::kBandNoise * gauss(rng),
                0.0, 1.0);
        }
        s.conductivity_signal =
            std::max(0.0, t.conductivity * depth(rng) +
                              noise_level * K::kSignalNoise * gauss(rng));
        s.temperature = K::kTemperatureMean + K::kTemperatureSd * gauss(rng);
        s.timestamp = K::kTimestampStart +
                      K::kTimestampStep * static_cast<std::int64_t>(i);
        data.samples.push_back(s);
        data.targets.push_back(t);
    }
    return data;
}

Dataset generate(std::size_t n, std::uint64_t seed, double noise_level) {
    if (n < 1) {
        throw ConfigError("dataset size must be >= 1");
    }
    check_noise(noise_level);
    // Latent draws use their own stream so channel noise stays aligned
    // with generate_from_hydration.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> h(n);
    for (auto &v : h) {
        v = unit(rng);
    }
    return generate_from_hydration(h, seed, noise_level);
}

std::string csv_header() {
    std::string out;
    for (const auto &c : column_names()) {
        if (!out.empty()) {
            out += ',';
        }
        out += c;
    }
    return out;
}

void write_csv(std::ostream &out, const Dataset &data) {
    out << csv_header() << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto &s = data.samples[i];
        const auto &t = data.targets[i];
        out << s.timestamp;
        for (double b : s.spectral_bands) {
            out << ',' << format_double(b);
        }
        for (double v : {s.conductivity_signal, s.temperature, t.usg_points,
                         t.conductivity, t.volume}) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

void save_csv(const std::string &path, const Dataset &data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open " + path + " for writing");
    }
    write_csv(out, data);
    if (!out) {
        throw DataError("failed writing " + path);
    }
}

Dataset read_csv(std::istream &in, const std::string &source) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(source + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto header = split_cells(line);
    std::map<std::string, std::size_t, std::less<>> position;
    for (std::size_t c = 0; c < header.size(); ++c) {
        position.emplace(std::string(header[c]), c);
    }
    const auto cols = column_names();
    std::vector<std::size_t> where;
    for (const auto &c : cols) {
        const auto it = position.find(c);
        if (it == position.end()) {
            throw SchemaError(source + ": missing column '" + c + "'");
        }
        where.push_back(it->second);
    }

    Dataset data;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_cells(line);
        if (cells.size() != header.size()) {
            throw ParseError(source + ": row " + std::to_string(row) +
                             " has " + std::to_string(cells.size()) +
                             " cells, expected " +
                             std::to_string(header.size()));
        }
        std::vector<double> v(cols.size());
        std::int64_t ts = 0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const auto cell = cells[where[k]];
            const auto fail = [&] {
                return ParseError(source + ": row " + std::to_string(row) +
                                  ", column '" + cols[k] +
                                  "': not a number: '" + std::string(cell) +
                                  "'");
            };
            if (k == 0) {
                const auto parsed = parse_int(cell);
                if (!parsed) {
                    throw fail();
                }
                ts = *parsed;
            } else {
                const auto parsed = parse_double(cell);
                if (!parsed || !std::isfinite(*parsed)) {
                    throw fail();
                }
                v[k] = *parsed;
            }
        }
        SensorSample s;
        s.timestamp = ts;
        for (std::size_t b = 0; b < kNumBands; ++b) {
            s.spectral_bands[b] = v[1 + b];
        }
        s.conductivity_signal = v[kNumBands + 1];
        s.temperature = v[kNumBands + 2];
        TargetRecord t{v[kNumBands + 3], v[kNumBands + 4], v[kNumBands + 5]};
        data.samples.push_back(s);
        data.targets.push_back(t);
    }
    if (data.size() == 0) {
        throw DataError(source + ": no data rows");
    }
    return data;
}

Dataset load_csv(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    return read_csv(in, path);
}

DatasetSplit split(std::size_t n, double test_fraction, std::uint64_t seed) {
    if (n < 2) {
        throw ConfigError("split needs at least 2 rows, got " +
                          std::to_string(n));
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("test fraction must lie in (0, 1)");
    }
    const auto n_test = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(static_cast<double>(n) *
                                              test_fraction)),
        1, n - 1);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), std::mt19937_64(seed));
    DatasetSplit s;
    s.test_fraction = test_fraction;
    s.seed = seed;
    s.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    std::sort(s.test.begin(), s.test.end());
    std::sort(s.train.begin(), s.train.end());
    return s;
}

} // namespace hydraq
