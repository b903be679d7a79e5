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

#include "hydraq/preprocess.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <gtest/gtest.h>
#include <numbers>
#include <random>

#include "hydraq/errors.hpp"

namespace hydraq {
namespace {

Matrix random_correlated(std::mt19937_64 &rng, std::size_t n, std::size_t d) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix mix(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            mix(i, j) = g(rng);
        }
    }
    Matrix out(n, d);
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> z(d);
        for (auto &v : z) {
            v = g(rng);
        }
        for (std::size_t j = 0; j < d; ++j) {
            double s = 3.0 * static_cast<double>(j);
            for (std::size_t k = 0; k < d; ++k) {
                s += mix(j, k) * z[k] * (1.0 + static_cast<double>(k));
            }
            out(r, j) = s;
        }
    }
    return out;
}

Eigen::MatrixXd to_eigen(const Matrix &m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(i, j) = m(i, j);
        }
    }
    return out;
}

TEST(Standardizer, PopulationStatistics) {
    const auto data = Matrix::from_rows({{1.0, 10.0}, {3.0, 10.0}, {5.0, 40.0}});
    const auto p = fit_standardizer(data);
    EXPECT_DOUBLE_EQ(p.means[0], 3.0);
    EXPECT_DOUBLE_EQ(p.stds[0], std::sqrt(8.0 / 3.0));
    EXPECT_DOUBLE_EQ(p.means[1], 20.0);
    const auto z = standardize(p, data);
    EXPECT_NEAR(z(0, 0), -2.0 / std::sqrt(8.0 / 3.0), 1e-15);
}

TEST(Standardizer, ColumnsHaveZeroMeanUnitVariance) {
    std::mt19937_64 rng(3);
    const auto data = random_correlated(rng, 200, 6);
    const auto z = standardize(fit_standardizer(data), data);
    for (std::size_t j = 0; j < z.cols(); ++j) {
        double mean = 0.0;
        double sq = 0.0;
        for (std::size_t i = 0; i < z.rows(); ++i) {
            mean += z(i, j);
            sq += z(i, j) * z(i, j);
        }
        EXPECT_NEAR(mean / 200.0, 0.0, 1e-12);
        EXPECT_NEAR(sq / 200.0, 1.0, 1e-12);
    }
}

TEST(Standardizer, ConstantColumnNamed) {
    const auto data = Matrix::from_rows({{1.0, 2.0}, {2.0, 2.0}, {3.0, 2.0}});
    try {
        fit_standardizer(data, {"a", "temperature"});
        FAIL() << "expected DegenerateFeatureError";
    } catch (const DegenerateFeatureError &e) {
        EXPECT_NE(std::string(e.what()).find("temperature"), std::string::npos);
    }
}

TEST(Standardizer, NeedsTwoRows) {
    EXPECT_THROW(fit_standardizer(Matrix::from_rows({{1.0}})), DataError);
}

TEST(Standardizer, ColumnMismatch) {
    const auto p = fit_standardizer(Matrix::from_rows({{1.0, 2.0}, {2.0, 5.0}}));
    EXPECT_THROW(standardize(p, Matrix(3, 3)), ShapeError);
}

TEST(Jacobi, MatchesSelfAdjointSolver) {
    std::mt19937_64 rng(11);
    for (std::size_t d : {1u, 2u, 5u, 9u}) {
        const auto data = random_correlated(rng, 80, d);
        std::vector<double> mean(d, 0.0);
        const Matrix cov = covariance(data, mean);
        const auto ours = jacobi_eigen(cov);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(to_eigen(cov));
        for (std::size_t j = 0; j < d; ++j) {
            const auto rj = static_cast<Eigen::Index>(d - 1 - j);
            EXPECT_NEAR(ours.values[j], ref.eigenvalues()(rj),
                        1e-9 * std::max(1.0, ref.eigenvalues().maxCoeff()));
            // Same direction up to sign.
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                dot += ours.vectors(k, j) *
                       ref.eigenvectors()(static_cast<Eigen::Index>(k), rj);
            }
            EXPECT_NEAR(std::abs(dot), 1.0, 1e-8);
        }
    }
}

TEST(Jacobi, SignRuleAndOrthonormality) {
    std::mt19937_64 rng(5);
    const auto data = random_correlated(rng, 60, 7);
    const auto eig = jacobi_eigen(covariance(data, std::vector<double>(7, 0.0)));
    for (std::size_t j = 0; j < 7; ++j) {
        std::size_t argmax = 0;
        for (std::size_t k = 1; k < 7; ++k) {
            if (std::abs(eig.vectors(k, j)) > std::abs(eig.vectors(argmax, j))) {
                argmax = k;
            }
        }
        EXPECT_GT(eig.vectors(argmax, j), 0.0);
        for (std::size_t i = 0; i < 7; ++i) {
            double dot = 0.0;
            for (std::size_t k = 0; k < 7; ++k) {
                dot += eig.vectors(k, i) * eig.vectors(k, j);
            }
            EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-12);
        }
        if (j > 0) {
            EXPECT_GE(eig.values[j - 1], eig.values[j]);
        }
    }
}

TEST(Pca, SelectsMinimalComponentCount) {
    EXPECT_EQ(select_components({5.0, 3.0, 1.0, 1.0}, 0.5), 1u);
    EXPECT_EQ(select_components({5.0, 3.0, 1.0, 1.0}, 0.8), 2u);
    EXPECT_EQ(select_components({5.0, 3.0, 1.0, 1.0}, 0.81), 3u);
    EXPECT_EQ(select_components({5.0, 3.0, 1.0, 1.0}, 1.0), 4u);
}

TEST(Pca, RetainedCountAgainstOracleSpectrum) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto raw = random_correlated(rng, 150, 8);
        const auto z = standardize(fit_standardizer(raw), raw);
        const auto pca = fit_pca(z, 0.97);
        Eigen::MatrixXd ez = to_eigen(z);
        const Eigen::MatrixXd centered = ez.rowwise() - ez.colwise().mean();
        const Eigen::MatrixXd cov = centered.transpose() * centered / 150.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(cov);
        const auto ev = ref.eigenvalues();
        const double total = ev.sum();
        std::size_t k = 0;
        double cum = 0.0;
        while (cum < 0.97 * total) {
            cum += ev(static_cast<Eigen::Index>(7 - k));
            ++k;
        }
        EXPECT_EQ(pca.retained, k);
        EXPECT_GE(pca.explained_ratio(), 0.97);
    }
}

TEST(Pca, FullRankRoundTrip) {
    std::mt19937_64 rng(23);
    const auto raw = random_correlated(rng, 50, 5);
    const auto z = standardize(fit_standardizer(raw), raw);
    const auto pca = fit_pca(z, 1.0);
    ASSERT_EQ(pca.retained, 5u);
    const auto back = pca_reconstruct(pca, pca_project(pca, z));
    for (std::size_t i = 0; i < z.rows(); ++i) {
        for (std::size_t j = 0; j < z.cols(); ++j) {
            EXPECT_NEAR(back(i, j), z(i, j), 1e-10);
        }
    }
}

TEST(Pca, PerfectlyCorrelatedKeepsOne) {
    Matrix raw(20, 2);
    for (std::size_t i = 0; i < 20; ++i) {
        raw(i, 0) = static_cast<double>(i);
        raw(i, 1) = 2.0 * static_cast<double>(i) + 1.0;
    }
    const auto z = standardize(fit_standardizer(raw), raw);
    const auto pca = fit_pca(z, 0.97);
    EXPECT_EQ(pca.retained, 1u);
    EXPECT_NEAR(pca.eigenvalues[0], 2.0, 1e-12);
    EXPECT_GE(pca.eigenvalues[1], 0.0);
    EXPECT_NEAR(pca.components(0, 0), std::sqrt(0.5), 1e-12);
}

TEST(Pca, ProjectedColumnsUncorrelated) {
    std::mt19937_64 rng(29);
    const auto raw = random_correlated(rng, 120, 6);
    const auto z = standardize(fit_standardizer(raw), raw);
    const auto pca = fit_pca(z, 1.0);
    const auto y = pca_project(pca, z);
    const auto cov = covariance(y, std::vector<double>(y.cols(), 0.0));
    for (std::size_t a = 0; a < y.cols(); ++a) {
        for (std::size_t b = 0; b < y.cols(); ++b) {
            EXPECT_NEAR(cov(a, b), a == b ? pca.eigenvalues[a] : 0.0, 1e-9);
        }
    }
}

TEST(Pca, AlphaOutOfRange) {
    const auto z = Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}, {-1.0, -1.0}});
    EXPECT_THROW(fit_pca(z, 0.0), ConfigError);
    EXPECT_THROW(fit_pca(z, 1.5), ConfigError);
    EXPECT_THROW(fit_pca(z, std::nan("")), ConfigError);
}

TEST(AngleScaler, MapsRangeAndClamps) {
    const auto data = Matrix::from_rows({{0.0}, {5.0}, {10.0}});
    const auto p = fit_angle_scaler(data);
    const auto a = scale_to_angles(p, Matrix::from_rows({{0.0}, {5.0}, {10.0},
                                                         {-3.0}, {99.0}}));
    const double pi = std::numbers::pi;
    EXPECT_DOUBLE_EQ(a(0, 0), -pi);
    EXPECT_NEAR(a(1, 0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(a(2, 0), pi);
    EXPECT_DOUBLE_EQ(a(3, 0), -pi);
    EXPECT_DOUBLE_EQ(a(4, 0), pi);
}

TEST(Pipeline, TransformReplaysFit) {
    std::mt19937_64 rng(31);
    const auto train = random_correlated(rng, 100, 6);
    const auto test = random_correlated(rng, 40, 6);
    const auto pipe = fit_pipeline(train, {});
    const auto out = transform(pipe, test);
    EXPECT_EQ(out.cols(), pipe.output_dimension());
    // Statistics come only from the training rows.
    const auto again = fit_pipeline(train, {});
    EXPECT_EQ(transform(again, test), out);
    EXPECT_THROW(transform(pipe, Matrix(3, 5)), ShapeError);
}

TEST(Pipeline, MinimumComponentFloor) {
    Matrix raw(30, 3);
    for (std::size_t i = 0; i < 30; ++i) {
        const double t = static_cast<double>(i);
        raw(i, 0) = t;
        raw(i, 1) = 2.0 * t;
        raw(i, 2) = -t + 0.001 * std::sin(t);
    }
    PipelineOptions opts;
    opts.min_components = 2;
    const auto pipe = fit_pipeline(raw, opts);
    EXPECT_EQ(pipe.output_dimension(), 2u);
}

} // namespace
} // namespace hydraq
