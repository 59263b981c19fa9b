// Estimation examples at N = 1e4 .. 1e5. Each case takes a few seconds.
#include <gtest/gtest.h>

#include <cmath>

#include "kkle/estimator.hpp"
#include "kkle/mine.hpp"
#include "kkle/optimizer.hpp"
#include "kkle/synthetic.hpp"
#include "oracles.hpp"

using namespace kkle;

namespace {

EstimatorConfig seeded(Seed s) {
  EstimatorConfig c;
  c.optimizer.seed = s;
  return c;
}

}  // namespace

TEST(LargeSample, SelfKlAtTenThousand) {
  for (Seed s = 0; s < 3; ++s) {
    const auto x = sample_gaussian(10000, 1, 0.0, 1.0, 100 + s), y = sample_gaussian(10000, 1, 0.0, 1.0, 200 + s);
    EXPECT_LE(std::abs(estimate_kl(x, y, seeded(s)).raw_estimate), 0.05);
  }
}

TEST(LargeSample, ShiftedGaussianKl) {
  const auto x = sample_gaussian(100000, 1, 0.0, 1.0, 1), y = sample_gaussian(100000, 1, 1.0, 1.0, 2);
  EXPECT_NEAR(estimate_kl(x, y, seeded(0)).kl_estimate, 0.5, 0.1);
}

TEST(LargeSample, IndependentMi) {
  const auto pairs = sample_gaussian_pairs({1, 0.0, 10000, 3});
  EXPECT_LE(estimate_mi(pairs, ColumnSplit{{0}, {1}}, seeded(0)).kl_estimate, 0.05);
}

TEST(LargeSample, CorrelatedMiAndSymmetry) {
  const auto pairs = sample_gaussian_pairs({1, 0.5, 100000, 4});
  const double xy = estimate_mi(pairs, ColumnSplit{{0}, {1}}, seeded(0)).kl_estimate;
  const double yx = estimate_mi(pairs, ColumnSplit{{1}, {0}}, seeded(0)).kl_estimate;
  EXPECT_NEAR(xy, 0.143841, 0.05);
  EXPECT_NEAR(yx, xy, 0.05);
}

TEST(LargeSample, StronglyCorrelatedMi) {
  const auto pairs = sample_gaussian_pairs({1, 0.9, 100000, 5});
  EXPECT_NEAR(estimate_mi(pairs, ColumnSplit{{0}, {1}}, seeded(0)).kl_estimate, 0.830366, 0.1);
}

TEST(LargeSample, LowerBoundCharacter) {
  // Mean over trials stays below truth + 2 standard errors.
  const double truth = oracle::gaussian_mi(1, 0.5);
  std::vector<double> e;
  for (Seed s = 0; s < 8; ++s) {
    const auto pairs = sample_gaussian_pairs({1, 0.5, 20000, 300 + s});
    e.push_back(estimate_mi(pairs, ColumnSplit{{0}, {1}}, seeded(s)).kl_estimate);
  }
  const auto m = oracle::moments(e, truth);
  const double se = std::sqrt(m.variance * e.size() / (e.size() - 1) / e.size());
  EXPECT_LE(m.mean, truth + 2 * se + 1e-12);
}

TEST(LargeSample, MineStronglyCorrelated) {
  const auto pairs = sample_gaussian_pairs({1, 0.9, 100000, 6});
  MineConfig c;
  const auto r = mine_estimate_mi(pairs, ColumnSplit{{0}, {1}}, c);
  EXPECT_NEAR(r.kl_estimate, 0.830366, 0.15);
  // Smoothed training values stay within 3 standard errors above the truth.
  const auto& v = r.trace.kl_values;
  const std::size_t tail = std::min<std::size_t>(500, v.size());
  const std::vector<double> last(v.end() - tail, v.end());
  const auto m = oracle::moments(last, 0.0);
  const std::size_t w = c.optimizer.convergence_window;
  const double se = std::sqrt(m.variance / double(w));
  for (std::size_t t = w; t <= v.size(); ++t) {
    const double mean = final_window_mean(std::vector<double>(v.begin() + (t - w), v.begin() + t), w);
    EXPECT_LE(mean, 0.830366 + 3 * se) << "iteration " << t;
  }
}
