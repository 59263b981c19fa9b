#pragma once

#include <cmath>
#include <random>

#include "kkle/fairness.hpp"

namespace fixtures {

/// Y^p and A independent fair coins encoded +-1, labels independent 0/1.
inline kkle::AuditTable independent(kkle::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  kkle::AuditTable t{kkle::Vector(n), kkle::Vector(n), kkle::Vector(n)};
  for (kkle::Index i = 0; i < n; ++i) {
    t.predictions(i) = coin(rng) ? 1.0 : -1.0;
    t.attribute(i) = coin(rng) ? 1.0 : -1.0;
    (*t.labels)(i) = coin(rng) ? 1.0 : 0.0;
  }
  return t;
}

/// A a fair coin encoded +-1, Y^p = A, each with N(0, 0.01^2) jitter.
inline kkle::AuditTable copied_coin(kkle::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> jitter(0.0, 0.01);
  kkle::AuditTable t{kkle::Vector(n), kkle::Vector(n), kkle::Vector(n)};
  for (kkle::Index i = 0; i < n; ++i) {
    const double a = coin(rng) ? 1.0 : -1.0;
    t.attribute(i) = a + jitter(rng);
    t.predictions(i) = a + jitter(rng);
    (*t.labels)(i) = coin(rng) ? 1.0 : 0.0;
  }
  return t;
}

/// Balanced classes 0/1; Y^p = A within class 1, independent within class 0.
inline kkle::AuditTable copied_in_class_one(kkle::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  kkle::AuditTable t{kkle::Vector(n), kkle::Vector(n), kkle::Vector(n)};
  for (kkle::Index i = 0; i < n; ++i) {
    const double y = i % 2 ? 1.0 : 0.0;
    const double a = coin(rng) ? 1.0 : -1.0;
    t.attribute(i) = a;
    t.predictions(i) = y == 1.0 ? a : (coin(rng) ? 1.0 : -1.0);
    (*t.labels)(i) = y;
  }
  return t;
}

/// Log-normal income-like A; Y^p = sign(A - median) plus small jitter.
inline kkle::AuditTable thresholded_income(kkle::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> income(0.0, 0.75);
  std::normal_distribution<double> jitter(0.0, 0.01);
  kkle::AuditTable t{kkle::Vector(n), kkle::Vector(n), std::nullopt};
  for (kkle::Index i = 0; i < n; ++i) {
    t.attribute(i) = income(rng);
    t.predictions(i) = (t.attribute(i) > 1.0 ? 1.0 : -1.0) + jitter(rng);
  }
  return t;
}

}  // namespace fixtures
