#pragma once

#include "kkle/linalg.hpp"
#include "kkle/rng.hpp"

namespace kkle {

/// D independent component pairs (X_k, Y_k), each a standard bivariate normal
/// with correlation rho.
struct GaussianPairSpec {
  Index dimension = 1;
  double rho = 0.0;
  Index sample_count = 1000;
  Seed seed = 0;

  void validate() const;
};

/// N x 2D samples, columns x_1..x_D then y_1..y_D, generated as
/// Y_k = rho X_k + sqrt(1 - rho^2) Z_k.
SampleSet sample_gaussian_pairs(const GaussianPairSpec& spec);

/// n x dim i.i.d. N(mean, stddev^2) entries.
SampleSet sample_gaussian(Index n, Index dim, double mean, double stddev, Seed seed);

/// -(D/2) log(1 - rho^2), in nats.
double analytic_mi(Index dimension, double rho);

/// KL(N(mu1, sigma1^2) || N(mu2, sigma2^2)), in nats.
double analytic_gaussian_kl(double mu1, double sigma1, double mu2, double sigma2);

}  // namespace kkle
