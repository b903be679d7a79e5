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

#include <Eigen/Dense>
#include <cstring>
#include <gtest/gtest.h>
#include <set>
#include <sstream>

#include "hydraq/errors.hpp"

namespace hydraq {
namespace {

std::string to_csv(const Dataset &d) {
    std::ostringstream out;
    write_csv(out, d);
    return out.str();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(Generate, EndpointTargets) {
    const double h0[] = {0.0};
    const auto dry = generate_from_hydration(h0, 1, 0.0);
    EXPECT_DOUBLE_EQ(dry.targets[0].usg_points, 40.0);
    EXPECT_DOUBLE_EQ(dry.targets[0].conductivity, 25.0);
    EXPECT_DOUBLE_EQ(dry.targets[0].volume, 50.0);

    const double h1[] = {1.0};
    const auto wet = generate_from_hydration(h1, 1, 0.0);
    EXPECT_DOUBLE_EQ(wet.targets[0].usg_points, 0.0);
    EXPECT_DOUBLE_EQ(wet.targets[0].conductivity, 5.0);
    EXPECT_DOUBLE_EQ(wet.targets[0].volume, 450.0);
}

TEST(Generate, MonotoneInHydrationWithoutNoise) {
    std::vector<double> h;
    for (int i = 0; i <= 50; ++i) {
        h.push_back(i / 50.0);
    }
    const auto d = generate_from_hydration(h, 3, 0.0);
    for (std::size_t i = 1; i < h.size(); ++i) {
        EXPECT_LT(d.targets[i].usg_points, d.targets[i - 1].usg_points);
        EXPECT_LT(d.targets[i].conductivity, d.targets[i - 1].conductivity);
        EXPECT_GT(d.targets[i].volume, d.targets[i - 1].volume);
    }
}

TEST(Generate, Deterministic) {
    EXPECT_EQ(to_csv(generate(1000, 42, 0.1)), to_csv(generate(1000, 42, 0.1)));
    EXPECT_NE(to_csv(generate(50, 42, 0.1)), to_csv(generate(50, 43, 0.1)));
}

TEST(Generate, ChannelInvariants) {
    const auto d = generate(2000, 9, 1.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (double b : d.samples[i].spectral_bands) {
            EXPECT_GE(b, 0.0);
            EXPECT_LE(b, 1.0);
        }
        EXPECT_GE(d.samples[i].conductivity_signal, 0.0);
        EXPECT_GE(d.targets[i].usg_points, 0.0);
        EXPECT_LE(d.targets[i].usg_points, 40.0);
        EXPECT_GT(d.targets[i].volume, 0.0);
    }
}

TEST(Generate, BadArguments) {
    EXPECT_THROW(generate(0, 1, 0.1), ConfigError);
    EXPECT_THROW(generate(10, 1, -0.1), ConfigError);
}

TEST(Generate, ConductivityLinearlyLearnable) {
    const auto d = generate(1000, 5, 0.0);
    const Matrix x = d.features();
    Eigen::MatrixXd a(x.rows(), x.cols() + 1);
    Eigen::VectorXd y(x.rows());
    const auto target = d.target(Task::Conductivity);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        a(i, 0) = 1.0;
        for (std::size_t j = 0; j < x.cols(); ++j) {
            a(i, j + 1) = x(i, j);
        }
        y(i) = target[i];
    }
    const Eigen::VectorXd beta = a.colPivHouseholderQr().solve(y);
    const double ss_res = (y - a * beta).squaredNorm();
    const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
    EXPECT_GE(1.0 - ss_res / ss_tot, 0.9);
}

TEST(Csv, HeaderExact) {
    EXPECT_EQ(csv_header(),
              "timestamp,band_0,band_1,band_2,band_3,band_4,band_5,band_6,"
              "band_7,conductivity_signal,temperature,usg_points,"
              "conductivity,volume");
}

TEST(Csv, RoundTripBitExact) {
    const auto d = generate(1000, 11, 0.3);
    std::istringstream in(to_csv(d));
    const auto back = read_csv(in);
    ASSERT_EQ(back.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_EQ(back.samples[i].timestamp, d.samples[i].timestamp);
        for (std::size_t b = 0; b < kNumBands; ++b) {
            EXPECT_TRUE(same_bits(back.samples[i].spectral_bands[b],
                                  d.samples[i].spectral_bands[b]));
        }
        EXPECT_TRUE(same_bits(back.samples[i].conductivity_signal,
                              d.samples[i].conductivity_signal));
        EXPECT_TRUE(same_bits(back.targets[i].volume, d.targets[i].volume));
        EXPECT_TRUE(same_bits(back.targets[i].usg_points,
                              d.targets[i].usg_points));
    }
}

TEST(Csv, ShuffledColumns) {
    const std::string text =
        "volume,conductivity,usg_points,temperature,conductivity_signal,"
        "band_7,band_6,band_5,band_4,band_3,band_2,band_1,band_0,timestamp\n"
        "300,12,20,34.5,11.5,0.7,0.6,0.5,0.4,0.3,0.2,0.1,0.05,99\n";
    std::istringstream in(text);
    const auto d = read_csv(in);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.samples[0].timestamp, 99);
    EXPECT_DOUBLE_EQ(d.samples[0].spectral_bands[0], 0.05);
    EXPECT_DOUBLE_EQ(d.samples[0].spectral_bands[7], 0.7);
    EXPECT_DOUBLE_EQ(d.targets[0].volume, 300.0);
    EXPECT_DOUBLE_EQ(d.targets[0].usg_points, 20.0);
}

TEST(Csv, MissingColumnNamed) {
    std::string header = csv_header();
    header.erase(header.find(",band_7"), 7);
    std::istringstream in(header + "\n");
    try {
        read_csv(in);
        FAIL() << "expected SchemaError";
    } catch (const SchemaError &e) {
        EXPECT_NE(std::string(e.what()).find("band_7"), std::string::npos);
    }
}

TEST(Csv, NonNumericCell) {
    std::istringstream in(csv_header() +
                          "\n1,0.1,0.1,0.1,0.1,0.1,0.1,0.1,0.1,9,3x4,20,12,300\n");
    try {
        read_csv(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("row 1"), std::string::npos);
        EXPECT_NE(msg.find("temperature"), std::string::npos);
    }
}

TEST(Csv, EmptyInput) {
    std::istringstream empty("");
    EXPECT_THROW(read_csv(empty), DataError);
    std::istringstream header_only(csv_header() + "\n");
    EXPECT_THROW(read_csv(header_only), DataError);
}

TEST(Split, SizesAndCoverage) {
    const auto s = split(10, 0.2, 4);
    EXPECT_EQ(s.train.size(), 8u);
    EXPECT_EQ(s.test.size(), 2u);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    for (auto t : s.test) {
        EXPECT_TRUE(all.insert(t).second);
    }
    EXPECT_EQ(all.size(), 10u);
    EXPECT_EQ(*all.rbegin(), 9u);
}

TEST(Split, Deterministic) {
    const auto a = split(500, 0.2, 7);
    const auto b = split(500, 0.2, 7);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
    EXPECT_NE(a.test, split(500, 0.2, 8).test);
}

TEST(Split, Degenerate) {
    EXPECT_THROW(split(1, 0.5, 1), ConfigError);
    EXPECT_THROW(split(10, 0.0, 1), ConfigError);
    EXPECT_THROW(split(10, 1.0, 1), ConfigError);
    const auto tiny = split(2, 0.01, 1);
    EXPECT_EQ(tiny.test.size(), 1u);
    EXPECT_EQ(tiny.train.size(), 1u);
}

TEST(Task, Names) {
    EXPECT_EQ(parse_task("usg"), Task::Usg);
    EXPECT_EQ(parse_task("usg_points"), Task::Usg);
    EXPECT_EQ(target_column(Task::Usg), "usg_points");
    EXPECT_EQ(to_string(Task::Volume), "volume");
    EXPECT_THROW(parse_task("weight"), ConfigError);
}

} // namespace
} // namespace hydraq
