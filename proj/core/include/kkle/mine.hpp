#pragma once

#include <span>

#include "kkle/estimator.hpp"
#include "kkle/linalg.hpp"
#include "kkle/optimizer.hpp"
#include "kkle/result.hpp"
#include "kkle/rng.hpp"

namespace kkle {

/// One-hidden-layer network T(z) = w_out . tanh(w_in z + b_in) + b_out.
/// Gradients use the same layout.
struct MlpParams {
  Matrix w_in;   // H x D
  Vector b_in;   // H
  Vector w_out;  // H
  double b_out = 0.0;

  Index input_dim() const { return w_in.cols(); }
  Index hidden_width() const { return w_in.rows(); }
  Index parameter_count() const { return w_in.size() + b_in.size() + w_out.size() + 1; }

  static MlpParams zeros(Index input_dim, Index hidden_width);
  /// Each layer uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static MlpParams random(Index input_dim, Index hidden_width, Seed seed);

  /// w_in (row-major), b_in, w_out, b_out.
  Vector flatten() const;
  static MlpParams unflatten(const Vector& flat, Index input_dim, Index hidden_width);
};

struct MineConfig {
  Index hidden_width = 64;
  /// step_size, max_iter, gamma, batch_size, seed and convergence_window
  /// apply; penalty_weight and norm_budget are ignored (no constraint on T).
  OptimizerConfig optimizer = [] {
    OptimizerConfig c;
    c.step_size = 0.1;
    return c;
  }();
  bool clamp_nonnegative = true;

  void validate() const;
};

using MineResult = BasicEstimateResult<MineConfig>;

double mine_forward(const MlpParams& params, std::span<const double> z);
/// T evaluated on every row.
Vector mine_forward(const MlpParams& params, const SampleSet& rows);

/// DV loss g = log mean_Q exp(T) - mean_P T (to be minimised).
double mine_loss(const MlpParams& params, const SampleSet& x, const SampleSet& y);
MlpParams mine_loss_gradient(const MlpParams& params, const SampleSet& x, const SampleSet& y);

/// Trains T by minibatch SGD on the DV loss and reports the final-window
/// mean of the minibatch DV values.
MineResult mine_estimate(const SampleSet& x, const SampleSet& y, const MineConfig& cfg);

/// Same product-of-marginals construction (and seed stream) as estimate_mi.
MineResult mine_estimate_mi(const SampleSet& pairs, const ColumnSplit& split, const MineConfig& cfg);

}  // namespace kkle
