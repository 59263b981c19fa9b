#pragma once

#include <optional>
#include <vector>

#include "kkle/kernel.hpp"
#include "kkle/linalg.hpp"
#include "kkle/optimizer.hpp"
#include "kkle/result.hpp"

namespace kkle {

enum class Mode { dual, primal };

struct EstimatorConfig {
  /// Fixed RBF bandwidth; empty selects the median heuristic.
  std::optional<double> bandwidth;
  Mode mode = Mode::primal;
  /// Random-feature dimension d (primal mode).
  Index feature_dim = 1024;
  /// optimizer.seed seeds every random stream of an estimate (features,
  /// permutation, bandwidth subsample, minibatches).
  OptimizerConfig optimizer = [] {
    OptimizerConfig c;
    c.step_size = 0.5;
    return c;
  }();
  Index bandwidth_subsample = 1000;
  /// The median-heuristic bandwidth is median_scale times the median pairwise
  /// distance. The default 1/sqrt(2) gives k(x, y) = exp(-|x - y|^2 / median^2).
  double median_scale = 0.70710678118654752;
  /// Dual mode: when set, the SGD step is optimizer.step_size divided by the
  /// curvature of the penalised dual objective at alpha = 0, which makes the
  /// step invariant to the scale of the Gram matrix (it grows with n + m).
  bool normalize_dual_step = true;
  /// Dual mode refuses pooled sample counts above this.
  Index max_dual_size = 4000;
  bool clamp_nonnegative = true;
  /// MI only: draw fresh (x_i, y_j) pairings for every Q minibatch instead
  /// of one fixed permutation. Primal mode only.
  bool resample_product_pairs = false;

  void validate() const;
};

struct EstimateResult : BasicEstimateResult<EstimatorConfig> {
  /// Bandwidth actually used, after the median heuristic if it was selected.
  double bandwidth = 0.0;
};

/// KL(P || Q) from samples x ~ P (n x D) and y ~ Q (m x D).
EstimateResult estimate_kl(const SampleSet& x, const SampleSet& y, const EstimatorConfig& cfg);

/// Which columns of a joint sample hold X and which hold Y.
struct ColumnSplit {
  std::vector<Index> x_cols;
  std::vector<Index> y_cols;

  void validate(Index total_cols) const;
};

/// Joint rows and the product-of-marginals rows formed by pairing each x row
/// with a seeded permutation of the y rows. Columns are x_cols then y_cols.
struct ProductSamples {
  SampleSet joint;
  SampleSet product;
};

ProductSamples product_of_marginals(const SampleSet& pairs, const ColumnSplit& split, Seed seed);

/// I(X; Y) = KL(P_XY || P_X x P_Y).
EstimateResult estimate_mi(const SampleSet& pairs, const ColumnSplit& split,
                           const EstimatorConfig& cfg);

}  // namespace kkle
