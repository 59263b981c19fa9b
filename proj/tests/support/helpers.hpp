#pragma once

#include <random>
#include <vector>

#include "kkle/linalg.hpp"
#include "oracles.hpp"

namespace testing_helpers {

inline oracle::Rows to_rows(const kkle::Matrix& m) {
  oracle::Rows rows(static_cast<std::size_t>(m.rows()));
  for (kkle::Index r = 0; r < m.rows(); ++r) {
    for (kkle::Index c = 0; c < m.cols(); ++c) rows[static_cast<std::size_t>(r)].push_back(m(r, c));
  }
  return rows;
}

inline oracle::Row to_row(const kkle::Vector& v) { return oracle::Row(v.data(), v.data() + v.size()); }

inline kkle::Vector to_vector(const oracle::Row& r) {
  return Eigen::Map<const kkle::Vector>(r.data(), static_cast<kkle::Index>(r.size()));
}

inline kkle::Matrix random_matrix(kkle::Index rows, kkle::Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  kkle::Matrix m(rows, cols);
  for (kkle::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

inline kkle::Vector random_vector(kkle::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  kkle::Vector v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace testing_helpers
