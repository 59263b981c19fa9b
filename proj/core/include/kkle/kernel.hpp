#pragma once

#include <span>

#include "kkle/linalg.hpp"
#include "kkle/rng.hpp"

namespace kkle {

/// Gaussian RBF kernel k(x, y) = exp(-|x - y|^2 / (2 bandwidth^2)).
struct KernelSpec {
  double bandwidth = 1.0;

  /// Throws InvalidInput unless bandwidth is finite and > 0.
  void validate() const;
};

double rbf_kernel(std::span<const double> x, std::span<const double> y, const KernelSpec& spec);

/// Kernel matrix over the pooled samples Z = X u Y. Rows/columns [0, n) are
/// the X samples in order, rows [n, n + m) are the Y samples.
struct GramMatrix {
  Matrix entries;
  Index n = 0;  // X rows
  Index m = 0;  // Y rows

  Index size() const { return n + m; }
  auto x_rows() const { return entries.topRows(n); }
  auto y_rows() const { return entries.bottomRows(m); }
};

GramMatrix build_gram(const SampleSet& x, const SampleSet& y, const KernelSpec& spec);

/// Median of pairwise Euclidean distances over at most `max_points` pooled
/// samples (a seeded subsample when X u Y is larger). Zero distances from
/// duplicated points are skipped when the plain median would be zero. Returns
/// 0 only when every pooled point is identical.
double median_heuristic_bandwidth(const SampleSet& x, const SampleSet& y, Seed seed,
                                  Index max_points = 1000);

/// Random Fourier feature map phi(x)_i = sqrt(2/d) cos(w_i . x + b_i) whose
/// inner products approximate the RBF kernel.
class FeatureMap {
 public:
  /// frequencies: d x D, offsets: length d.
  FeatureMap(Matrix frequencies, Vector offsets);

  Index dim() const { return frequencies_.rows(); }
  Index input_dim() const { return frequencies_.cols(); }
  const Matrix& frequencies() const { return frequencies_; }
  const Vector& offsets() const { return offsets_; }

 private:
  Matrix frequencies_;
  Vector offsets_;
};

/// Frequencies ~ N(0, bandwidth^-2 I), offsets ~ U[0, 2 pi). Deterministic in seed.
FeatureMap sample_feature_map(Index input_dim, Index feature_dim, const KernelSpec& spec,
                              Seed seed);

Vector apply_feature_map(const FeatureMap& fm, std::span<const double> x);

/// Row-wise map of a whole sample set; result is rows x d.
Matrix apply_feature_map(const FeatureMap& fm, const SampleSet& samples);

/// As above but evaluated and stored in single precision. The absolute error
/// of a coordinate is about 1e-7 * |phase| * sqrt(2/d), i.e. ~1e-6 relative for
/// the phases seen on standardised data. Used for the large materialised
/// feature matrices of the estimator.
FloatMatrix apply_feature_map_float(const FeatureMap& fm, const SampleSet& samples);

}  // namespace kkle
