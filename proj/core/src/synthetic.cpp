#include "kkle/synthetic.hpp"

#include <cmath>
#include <string>

#include "kkle/error.hpp"

namespace kkle {

void GaussianPairSpec::validate() const {
  if (dimension < 1) throw InvalidInput("Gaussian pair dimension must be >= 1");
  if (!(std::abs(rho) < 1.0)) {
    throw InvalidInput("correlation must satisfy |rho| < 1, got " + std::to_string(rho));
  }
  if (sample_count < 1) throw InvalidInput("sample count must be >= 1");
}

SampleSet sample_gaussian_pairs(const GaussianPairSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise = std::sqrt(1.0 - spec.rho * spec.rho);
  const Index d = spec.dimension;
  SampleSet out(spec.sample_count, 2 * d);
  for (Index r = 0; r < spec.sample_count; ++r) {
    for (Index k = 0; k < d; ++k) {
      const double x = normal(rng);
      const double z = normal(rng);
      out(r, k) = x;
      out(r, d + k) = spec.rho * x + noise * z;
    }
  }
  return out;
}

SampleSet sample_gaussian(Index n, Index dim, double mean, double stddev, Seed seed) {
  if (n < 1 || dim < 1) throw InvalidInput("sample_gaussian: sizes must be >= 1");
  if (!(stddev > 0.0)) throw InvalidInput("sample_gaussian: stddev must be > 0");
  Rng rng(seed);
  std::normal_distribution<double> normal(mean, stddev);
  SampleSet out(n, dim);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < dim; ++c) out(r, c) = normal(rng);
  }
  return out;
}

double analytic_mi(Index dimension, double rho) {
  if (dimension < 1) throw InvalidInput("analytic_mi: dimension must be >= 1");
  if (!(std::abs(rho) < 1.0)) throw InvalidInput("analytic_mi: |rho| must be < 1");
  return -0.5 * static_cast<double>(dimension) * std::log1p(-rho * rho);
}

double analytic_gaussian_kl(double mu1, double sigma1, double mu2, double sigma2) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw InvalidInput("analytic_gaussian_kl: sigmas must be > 0");
  }
  const double diff = mu1 - mu2;
  return std::log(sigma2 / sigma1) + (sigma1 * sigma1 + diff * diff) / (2.0 * sigma2 * sigma2) -
         0.5;
}

}  // namespace kkle
