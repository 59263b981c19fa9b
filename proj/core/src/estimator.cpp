#include "kkle/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "kkle/error.hpp"

namespace kkle {
namespace {

bool all_rows_equal(const SampleSet& s, const Eigen::RowVectorXd& ref) {
  for (Index r = 0; r < s.rows(); ++r) {
    if (s.row(r) != ref) return false;
  }
  return true;
}

bool is_constant(const SampleSet& s) { return s.rows() == 0 || all_rows_equal(s, s.row(0)); }

SampleSet select_columns(const SampleSet& s, const std::vector<Index>& cols) {
  return s(Eigen::all, cols);
}

/// Pairs the requested x rows with uniformly drawn y rows. The pairing drawn
/// in scores() is reused by the accumulate() call for the same minibatch.
class ResampledProductSource final : public FeatureSource {
 public:
  ResampledProductSource(const SampleSet& xs, const SampleSet& ys, const FeatureMap& fm, Seed seed)
      : xs_(xs), ys_(ys), fm_(fm), rng_(seed) {}

  Index rows() const override { return xs_.rows(); }
  Index dim() const override { return fm_.dim(); }

  void scores(std::span<const Index> indices, const Vector& beta, Vector& out) override {
    std::uniform_int_distribution<Index> pick(0, ys_.rows() - 1);
    SampleSet joint(static_cast<Index>(indices.size()), xs_.cols() + ys_.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
      const auto row = static_cast<Index>(r);
      joint.row(row).head(xs_.cols()) = xs_.row(indices[r]);
      joint.row(row).tail(ys_.cols()) = ys_.row(pick(rng_));
    }
    batch_ = apply_feature_map(fm_, joint);
    out.noalias() = batch_ * beta;
  }

  void accumulate(std::span<const Index> indices, const Vector& weights, Vector& grad) override {
    if (static_cast<Index>(indices.size()) != batch_.rows()) {
      throw InvalidInput("resampled source: accumulate without matching scores call");
    }
    grad.noalias() += batch_.transpose() * weights;
  }

 private:
  const SampleSet& xs_;
  const SampleSet& ys_;
  const FeatureMap& fm_;
  Rng rng_;
  Matrix batch_;
};

EstimateResult degenerate_result(const EstimatorConfig& cfg, Index n, Index m) {
  EstimateResult r;
  r.degenerate = true;
  r.config = cfg;
  r.n = n;
  r.m = m;
  r.trace.converged = true;
  return r;
}

void check_pair(const SampleSet& x, const SampleSet& y) {
  if (x.rows() < 2 || y.rows() < 2) {
    throw InvalidInput("need at least two samples from each distribution (got n = " +
                       std::to_string(x.rows()) + ", m = " + std::to_string(y.rows()) + ")");
  }
  if (x.cols() != y.cols() || x.cols() < 1) {
    throw InvalidInput("sample sets disagree on dimension (" + std::to_string(x.cols()) + " vs " +
                       std::to_string(y.cols()) + ")");
  }
  if (!x.allFinite() || !y.allFinite()) throw InvalidInput("samples contain non-finite values");
}

double resolve_bandwidth(const SampleSet& x, const SampleSet& y, const EstimatorConfig& cfg) {
  if (cfg.bandwidth) return *cfg.bandwidth;
  return cfg.median_scale * median_heuristic_bandwidth(x, y,
                                                       derive_seed(cfg.optimizer.seed, "bandwidth"),
                                                       cfg.bandwidth_subsample);
}

EstimateResult finish(const EstimatorConfig& cfg, OptimizationTrace trace, double bandwidth,
                      Index n, Index m) {
  EstimateResult r;
  r.raw_estimate = trace.final_estimate;
  r.kl_estimate = cfg.clamp_nonnegative ? std::max(0.0, r.raw_estimate) : r.raw_estimate;
  r.trace = std::move(trace);
  r.config = cfg;
  r.bandwidth = bandwidth;
  r.n = n;
  r.m = m;
  return r;
}

OptimizerConfig sgd_config(const EstimatorConfig& cfg) {
  OptimizerConfig opt = cfg.optimizer;
  opt.seed = derive_seed(cfg.optimizer.seed, "sgd");
  return opt;
}

}  // namespace

void EstimatorConfig::validate() const {
  if (bandwidth) KernelSpec{*bandwidth}.validate();
  if (mode == Mode::primal && feature_dim < 1) throw InvalidInput("feature dimension must be >= 1");
  if (bandwidth_subsample < 2) throw InvalidInput("bandwidth subsample must be >= 2");
  if (!(median_scale > 0.0) || !std::isfinite(median_scale)) {
    throw InvalidInput("median scale must be finite and > 0");
  }
  if (resample_product_pairs && mode != Mode::primal) {
    throw InvalidInput("resampled product pairs require primal mode");
  }
  optimizer.validate();
}

EstimateResult estimate_kl(const SampleSet& x, const SampleSet& y, const EstimatorConfig& cfg) {
  cfg.validate();
  check_pair(x, y);
  const Index n = x.rows();
  const Index m = y.rows();

  // Identical empirical inputs: sup_T E_P[T] - log E_Q[e^T] is 0 exactly.
  if ((x.rows() == y.rows() && x == y) || (is_constant(x) && all_rows_equal(y, x.row(0)))) {
    return degenerate_result(cfg, n, m);
  }

  const double bandwidth = resolve_bandwidth(x, y, cfg);
  if (!(bandwidth > 0.0)) return degenerate_result(cfg, n, m);
  const KernelSpec spec{bandwidth};

  if (cfg.mode == Mode::dual) {
    if (n + m > cfg.max_dual_size) {
      throw InvalidInput("dual mode supports at most " + std::to_string(cfg.max_dual_size) +
                         " pooled samples (got " + std::to_string(n + m) +
                         "); use primal mode");
    }
    const GramMatrix k = build_gram(x, y, spec);
    OptimizerConfig opt = sgd_config(cfg);
    if (cfg.normalize_dual_step) {
      const double curvature = dual_curvature_at_zero(k, opt.penalty_weight);
      if (curvature > 0.0) opt.step_size /= curvature;
    }
    DualRun run = run_dual(k, opt);
    return finish(cfg, std::move(run.trace), bandwidth, n, m);
  }

  const FeatureMap fm =
      sample_feature_map(x.cols(), cfg.feature_dim, spec, derive_seed(cfg.optimizer.seed, "features"));
  const FloatMatrix phi_x = apply_feature_map_float(fm, x);
  const FloatMatrix phi_y = apply_feature_map_float(fm, y);
  PrimalRun run = run_primal(phi_x, phi_y, sgd_config(cfg));
  return finish(cfg, std::move(run.trace), bandwidth, n, m);
}

void ColumnSplit::validate(Index total_cols) const {
  if (x_cols.empty() || y_cols.empty()) {
    throw InvalidInput("need at least one x-column and one y-column");
  }
  std::set<Index> seen;
  for (const auto* cols : {&x_cols, &y_cols}) {
    for (Index c : *cols) {
      if (c < 0 || c >= total_cols) {
        throw InvalidInput("column index " + std::to_string(c) + " out of range [0, " +
                           std::to_string(total_cols) + ")");
      }
      if (!seen.insert(c).second) {
        throw InvalidInput("column " + std::to_string(c) + " is listed more than once");
      }
    }
  }
}

ProductSamples product_of_marginals(const SampleSet& pairs, const ColumnSplit& split, Seed seed) {
  split.validate(pairs.cols());
  const SampleSet xs = select_columns(pairs, split.x_cols);
  const SampleSet ys = select_columns(pairs, split.y_cols);
  const Index rows = pairs.rows();
  const auto dx = static_cast<Index>(split.x_cols.size());
  const auto dy = static_cast<Index>(split.y_cols.size());

  std::vector<Index> perm(static_cast<std::size_t>(rows));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  ProductSamples out{SampleSet(rows, dx + dy), SampleSet(rows, dx + dy)};
  out.joint.leftCols(dx) = xs;
  out.joint.rightCols(dy) = ys;
  out.product.leftCols(dx) = xs;
  out.product.rightCols(dy) = ys(perm, Eigen::all);
  return out;
}

EstimateResult estimate_mi(const SampleSet& pairs, const ColumnSplit& split,
                           const EstimatorConfig& cfg) {
  cfg.validate();
  split.validate(pairs.cols());
  if (pairs.rows() < 4) {
    throw InvalidInput("mutual information needs at least 4 rows, got " +
                       std::to_string(pairs.rows()));
  }
  if (!pairs.allFinite()) throw InvalidInput("samples contain non-finite values");
  const SampleSet xs = select_columns(pairs, split.x_cols);
  const SampleSet ys = select_columns(pairs, split.y_cols);
  if (is_constant(xs) || is_constant(ys)) {
    return degenerate_result(cfg, pairs.rows(), pairs.rows());
  }

  const ProductSamples samples =
      product_of_marginals(pairs, split, derive_seed(cfg.optimizer.seed, "mi-permutation"));
  if (!cfg.resample_product_pairs) return estimate_kl(samples.joint, samples.product, cfg);

  const double bandwidth = resolve_bandwidth(samples.joint, samples.product, cfg);
  const KernelSpec spec{bandwidth};
  const FeatureMap fm = sample_feature_map(samples.joint.cols(), cfg.feature_dim, spec,
                                           derive_seed(cfg.optimizer.seed, "features"));
  const FloatMatrix phi_joint = apply_feature_map_float(fm, samples.joint);
  MatrixFeatureSource<float> p(phi_joint);
  ResampledProductSource q(xs, ys, fm, derive_seed(cfg.optimizer.seed, "mi-resample"));
  PrimalRun run = run_primal(p, q, sgd_config(cfg));
  return finish(cfg, std::move(run.trace), bandwidth, pairs.rows(), pairs.rows());
}

}  // namespace kkle
