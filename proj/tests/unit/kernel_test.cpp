#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "kkle/error.hpp"
#include "kkle/kernel.hpp"

using namespace kkle;
using testing_helpers::random_matrix;
using testing_helpers::to_row;
using testing_helpers::to_rows;

TEST(RbfKernel, SelfSimilarityIsOne) {
  const std::vector<double> x{0.3, -2.0, 7.5};
  for (double s : {1e-3, 0.5, 1.0, 40.0}) EXPECT_EQ(rbf_kernel(x, x, {s}), 1.0);
}

TEST(RbfKernel, KnownValues) {
  const std::vector<double> zero{0.0}, one{1.0};
  EXPECT_NEAR(rbf_kernel(zero, one, {1.0}), 0.606531, 5e-7);
  const std::vector<double> a{0.0, 0.0}, b{3.0, 4.0};
  EXPECT_NEAR(rbf_kernel(a, b, {5.0}), std::exp(-0.5), 1e-15);
}

TEST(RbfKernel, SymmetricAndMatchesOracle) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const Matrix p = random_matrix(2, 4, rng);
    const std::vector<double> x(p.row(0).begin(), p.row(0).end()), y(p.row(1).begin(), p.row(1).end());
    const double s = 0.5 + t * 0.05;
    EXPECT_EQ(rbf_kernel(x, y, {s}), rbf_kernel(y, x, {s}));
    EXPECT_NEAR(rbf_kernel(x, y, {s}), oracle::rbf(x, y, s), 1e-15);
  }
}

TEST(RbfKernel, RejectsBadInput) {
  const std::vector<double> x{0.0}, nan{std::numeric_limits<double>::quiet_NaN()}, two{0.0, 1.0};
  EXPECT_THROW(rbf_kernel(x, nan, {1.0}), InvalidInput);
  EXPECT_THROW(rbf_kernel(x, two, {1.0}), InvalidInput);
  EXPECT_THROW(rbf_kernel(x, x, {0.0}), InvalidInput);
  EXPECT_THROW(rbf_kernel(x, x, {-1.0}), InvalidInput);
}

TEST(BuildGram, CoincidentPoints) {
  const auto g = build_gram(Matrix::Zero(1, 1), Matrix::Zero(1, 1), {1.0});
  EXPECT_EQ(g.entries, Matrix::Ones(2, 2));
}

TEST(BuildGram, TwoPoints) {
  const auto g = build_gram(Matrix::Zero(1, 1), Matrix::Ones(1, 1), {1.0});
  EXPECT_EQ(g.n, 1);
  EXPECT_EQ(g.m, 1);
  EXPECT_DOUBLE_EQ(g.entries(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(g.entries(1, 1), 1.0);
  EXPECT_NEAR(g.entries(0, 1), 0.606531, 5e-7);
  EXPECT_EQ(g.entries(0, 1), g.entries(1, 0));
}

TEST(BuildGram, StructuralInvariantsAndPsd) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const Index n = 1 + t % 7, m = 1 + (t * 3) % 11;
    const Matrix x = random_matrix(n, 3, rng), y = random_matrix(m, 3, rng);
    const double s = 0.7 + 0.1 * t;
    const auto g = build_gram(x, y, {s});
    ASSERT_EQ(g.size(), n + m);
    const auto zx = to_rows(x), zy = to_rows(y);
    oracle::Rows pooled = zx;
    pooled.insert(pooled.end(), zy.begin(), zy.end());
    for (Index i = 0; i < g.size(); ++i) {
      EXPECT_EQ(g.entries(i, i), 1.0);
      for (Index j = 0; j < g.size(); ++j) {
        EXPECT_EQ(g.entries(i, j), g.entries(j, i));
        EXPECT_GT(g.entries(i, j), 0.0);
        EXPECT_LE(g.entries(i, j), 1.0);
        EXPECT_NEAR(g.entries(i, j), oracle::rbf(pooled[std::size_t(i)], pooled[std::size_t(j)], s), 1e-12);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.entries);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(BuildGram, LargestPsdCheck) {
  std::mt19937_64 rng(3);
  const auto g = build_gram(random_matrix(25, 2, rng), random_matrix(25, 2, rng), {0.8});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.entries);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
}

TEST(BuildGram, DimensionMismatch) {
  EXPECT_THROW(build_gram(Matrix::Zero(2, 1), Matrix::Zero(2, 2), {1.0}), InvalidInput);
  EXPECT_THROW(build_gram(Matrix::Zero(0, 1), Matrix::Zero(2, 1), {1.0}), InvalidInput);
}

TEST(MedianHeuristic, MatchesBruteForceOnSmallSets) {
  std::mt19937_64 rng(4);
  const Matrix x = random_matrix(7, 2, rng), y = random_matrix(6, 2, rng, 2.0);
  auto pooled = to_rows(x);
  const auto ry = to_rows(y);
  pooled.insert(pooled.end(), ry.begin(), ry.end());
  std::vector<double> d;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = i + 1; j < pooled.size(); ++j) d.push_back(std::sqrt((double)oracle::sq_dist(pooled[i], pooled[j])));
  }
  std::sort(d.begin(), d.end());
  // 78 distances: any value between the two middle ones is a median.
  const double bw = median_heuristic_bandwidth(x, y, 0);
  EXPECT_GE(bw, d[d.size() / 2 - 1] * (1 - 1e-12));
  EXPECT_LE(bw, d[d.size() / 2] * (1 + 1e-12));
}

TEST(MedianHeuristic, ScaleEquivariantAndSeeded) {
  std::mt19937_64 rng(5);
  const Matrix x = random_matrix(1500, 1, rng), y = random_matrix(1500, 1, rng);
  const double a = median_heuristic_bandwidth(x, y, 9);
  EXPECT_EQ(a, median_heuristic_bandwidth(x, y, 9));
  EXPECT_NEAR(median_heuristic_bandwidth(3.0 * x, 3.0 * y, 9), 3.0 * a, 1e-12);
  // Median |X - X'| for standard normals is sqrt(2) * 0.6745.
  EXPECT_NEAR(a, std::sqrt(2.0) * 0.6745, 0.06);
}

TEST(MedianHeuristic, DuplicatesAndConstants) {
  Matrix x = Matrix::Zero(10, 1), y = Matrix::Zero(10, 1);
  EXPECT_EQ(median_heuristic_bandwidth(x, y, 0), 0.0);
  y(0, 0) = 2.0;
  EXPECT_EQ(median_heuristic_bandwidth(x, y, 0), 2.0);
}

TEST(FeatureMap, SeedDeterminism) {
  const auto a = sample_feature_map(3, 64, {1.3}, 42);
  const auto b = sample_feature_map(3, 64, {1.3}, 42);
  const auto c = sample_feature_map(3, 64, {1.3}, 43);
  EXPECT_EQ(a.frequencies(), b.frequencies());
  EXPECT_EQ(a.offsets(), b.offsets());
  EXPECT_NE(a.frequencies(), c.frequencies());
}

TEST(FeatureMap, SamplingDistribution) {
  const double sigma = 2.0;
  const auto fm = sample_feature_map(2, 20000, {sigma}, 7);
  EXPECT_EQ(fm.dim(), 20000);
  EXPECT_EQ(fm.input_dim(), 2);
  const double var = fm.frequencies().array().square().mean();
  EXPECT_NEAR(var, 1.0 / (sigma * sigma), 0.01);
  EXPECT_NEAR(fm.frequencies().mean(), 0.0, 0.01);
  EXPECT_GE(fm.offsets().minCoeff(), 0.0);
  EXPECT_LT(fm.offsets().maxCoeff(), 2 * M_PI);
  EXPECT_NEAR(fm.offsets().mean(), M_PI, 0.05);
}

TEST(FeatureMap, CoordinatesMatchOracleAndBound) {
  const auto fm = sample_feature_map(3, 256, {0.9}, 8);
  const auto freq = to_rows(fm.frequencies());
  const auto off = to_row(fm.offsets());
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const Matrix x = random_matrix(1, 3, rng, 3.0);
    const std::vector<double> xv(x.row(0).begin(), x.row(0).end());
    const Vector phi = apply_feature_map(fm, xv);
    const auto ref = oracle::rff(freq, off, xv);
    const double bound = std::sqrt(2.0 / 256);
    ASSERT_EQ(phi.size(), 256);
    for (Index i = 0; i < phi.size(); ++i) {
      EXPECT_NEAR(phi(i), ref[std::size_t(i)], 1e-13);
      EXPECT_LE(std::abs(phi(i)), bound + 1e-15);
    }
    EXPECT_LE(phi.squaredNorm(), 2.0 + 1e-12);
  }
}

TEST(FeatureMap, ZeroInputZeroOffsets) {
  const auto base = sample_feature_map(2, 100, {1.0}, 1);
  const FeatureMap fm(base.frequencies(), Vector::Zero(100));
  const std::vector<double> zero{0.0, 0.0};
  const Vector phi = apply_feature_map(fm, zero);
  for (double v : phi) EXPECT_DOUBLE_EQ(v, std::sqrt(2.0 / 100));
}

TEST(FeatureMap, BatchAndFloatPathsAgree) {
  const auto fm = sample_feature_map(2, 128, {1.1}, 3);
  std::mt19937_64 rng(10);
  const Matrix x = random_matrix(40, 2, rng);
  const Matrix phi = apply_feature_map(fm, x);
  const FloatMatrix phi_f = apply_feature_map_float(fm, x);
  for (Index r = 0; r < x.rows(); ++r) {
    const std::vector<double> row(x.row(r).begin(), x.row(r).end());
    EXPECT_LT((phi.row(r).transpose() - apply_feature_map(fm, row)).cwiseAbs().maxCoeff(), 1e-14);
  }
  EXPECT_LT((phi - phi_f.cast<double>()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(FeatureMap, DimensionMismatch) {
  const auto fm = sample_feature_map(2, 8, {1.0}, 1);
  const std::vector<double> x{1.0};
  EXPECT_THROW(apply_feature_map(fm, x), InvalidInput);
  EXPECT_THROW(apply_feature_map(fm, Matrix::Zero(3, 3)), InvalidInput);
  EXPECT_THROW(sample_feature_map(0, 8, {1.0}, 1), InvalidInput);
  EXPECT_THROW(sample_feature_map(1, 0, {1.0}, 1), InvalidInput);
}

TEST(FeatureMap, KernelApproximationAtKnownPoint) {
  const auto fm = sample_feature_map(1, 1024, {1.0}, 11);
  const std::vector<double> x{0.0}, y{1.0};
  const Vector px = apply_feature_map(fm, x), py = apply_feature_map(fm, y);
  EXPECT_NEAR(px.dot(py), 0.6065, 0.05);
  EXPECT_NEAR(px.dot(px), 1.0, 0.05);
}

TEST(FeatureMap, MeanApproximationErrorAt2048) {
  const KernelSpec spec{1.0};
  const auto fm = sample_feature_map(2, 2048, spec, 12);
  std::mt19937_64 rng(13);
  double total = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Matrix p = random_matrix(2, 2, rng);
    const std::vector<double> x(p.row(0).begin(), p.row(0).end()), y(p.row(1).begin(), p.row(1).end());
    total += std::abs(apply_feature_map(fm, x).dot(apply_feature_map(fm, y)) - oracle::rbf(x, y, 1.0));
  }
  EXPECT_LE(total / 100, 0.03);
}
