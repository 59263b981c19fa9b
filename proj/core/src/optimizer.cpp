#include "kkle/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kkle/error.hpp"

namespace kkle {

void OptimizerConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) throw InvalidInput("step size must be > 0");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be >= 0");
  if (batch_size < 1) throw InvalidInput("batch size must be >= 1");
  if (!(penalty_weight >= 0.0) || !std::isfinite(penalty_weight)) {
    throw InvalidInput("penalty weight must be finite and >= 0");
  }
  if (!(norm_budget > 0.0) || !std::isfinite(norm_budget)) {
    throw InvalidInput("norm budget must be finite and > 0");
  }
  if (convergence_window < 1) throw InvalidInput("convergence window must be >= 1");
}

ConvergenceMonitor::ConvergenceMonitor(std::size_t window, double gamma)
    : window_(window), gamma_(gamma) {
  recent_.reserve(window_);
}

bool ConvergenceMonitor::push(double kl) {
  if (recent_.size() < window_) {
    recent_.push_back(kl);
    sum_ += kl;
  } else {
    sum_ += kl - recent_[next_];
    recent_[next_] = kl;
    next_ = (next_ + 1) % window_;
  }
  const double mean = sum_ / static_cast<double>(recent_.size());
  if (have_previous_ && std::abs(mean - previous_mean_) <= gamma_) {
    ++streak_;
  } else {
    streak_ = 0;
  }
  previous_mean_ = mean;
  have_previous_ = true;
  return streak_ >= window_;
}

MinibatchSampler::MinibatchSampler(Index n, Index batch, Rng& rng)
    : pool_(static_cast<std::size_t>(n)), batch_(std::min(batch, n)), full_(batch >= n), rng_(rng) {
  std::iota(pool_.begin(), pool_.end(), Index{0});
}

std::span<const Index> MinibatchSampler::next() {
  if (!full_) {
    const Index n = static_cast<Index>(pool_.size());
    for (Index i = 0; i < batch_; ++i) {
      std::uniform_int_distribution<Index> pick(i, n - 1);
      std::swap(pool_[static_cast<std::size_t>(i)], pool_[static_cast<std::size_t>(pick(rng_))]);
    }
    // Ascending row order for memory locality; the drawn set is unchanged and
    // later draws stay uniform because they range over the whole pool.
    std::sort(pool_.begin(), pool_.begin() + batch_);
  }
  return {pool_.data(), static_cast<std::size_t>(batch_)};
}

double final_window_mean(const std::vector<double>& values, std::size_t window) {
  if (values.empty()) return 0.0;
  const std::size_t count = std::min(window, values.size());
  const double sum = std::accumulate(values.end() - static_cast<std::ptrdiff_t>(count), values.end(), 0.0);
  return sum / static_cast<double>(count);
}

DualWeights project_dual(DualWeights w, const GramMatrix& k) {
  if (w.alpha.size() != k.size()) throw InvalidInput("project_dual: dimension mismatch");
  const double q = dual_quadratic_form(w.alpha, k);
  const double budget_sq = w.norm_budget * w.norm_budget;
  if (q > budget_sq) w.alpha *= w.norm_budget / std::sqrt(q);
  return w;
}

PrimalWeights project_primal(PrimalWeights w) {
  const double norm = w.beta.norm();
  if (norm > w.norm_budget) w.beta *= w.norm_budget / norm;
  return w;
}

DualRun run_dual(const GramMatrix& k, const OptimizerConfig& cfg) {
  cfg.validate();
  if (k.n < 1 || k.m < 1 || k.entries.rows() != k.size()) {
    throw InvalidInput("run_dual: malformed Gram matrix");
  }
  Rng rng(cfg.seed);
  MinibatchSampler xs(k.n, cfg.batch_size, rng);
  MinibatchSampler ys(k.m, cfg.batch_size, rng);

  DualWeights w{Vector::Zero(k.size()), cfg.norm_budget};
  Vector k_alpha = Vector::Zero(k.size());
  const double budget_sq = cfg.norm_budget * cfg.norm_budget;
  const Vector full_x_mean = k.x_rows().colwise().mean().transpose();

  OptimizationTrace trace;
  trace.kl_values.reserve(cfg.max_iter);
  ConvergenceMonitor monitor(cfg.convergence_window, cfg.gamma);

  Matrix rows_x, rows_y;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    Vector grad;
    Vector t_p, t_q;
    if (xs.full_batch()) {
      t_p = k_alpha.head(k.n);
      grad = -full_x_mean;
    } else {
      auto idx = xs.next();
      rows_x = k.x_rows()(std::vector<Index>(idx.begin(), idx.end()), Eigen::all);
      t_p = rows_x * w.alpha;
      grad = -rows_x.colwise().mean().transpose();
    }
    Vector weights;
    if (ys.full_batch()) {
      t_q = k_alpha.tail(k.m);
      weights = softmax(t_q);
      grad.noalias() += k.y_rows().transpose() * weights;
    } else {
      auto idx = ys.next();
      rows_y = k.y_rows()(std::vector<Index>(idx.begin(), idx.end()), Eigen::all);
      t_q = rows_y * w.alpha;
      weights = softmax(t_q);
      grad.noalias() += rows_y.transpose() * weights;
    }
    if (!t_p.allFinite() || !t_q.allFinite()) {
      throw NumericalFailure("dual objective became non-finite", it);
    }
    const double kl_before = t_p.mean() - log_mean_exp(t_q);
    if (cfg.penalty_weight > 0.0) grad += 2.0 * cfg.penalty_weight * k_alpha;

    w.alpha -= cfg.step_size * grad;
    k_alpha.noalias() = k.entries * w.alpha;
    const double q = w.alpha.dot(k_alpha);
    if (!std::isfinite(q)) throw NumericalFailure("dual weights became non-finite", it);
    if (q > budget_sq) {
      const double s = cfg.norm_budget / std::sqrt(q);
      w.alpha *= s;
      k_alpha *= s;
    }

    double kl = kl_before;
    if (cfg.monitor_full_data) {
      kl = k_alpha.head(k.n).mean() - log_mean_exp(Vector(k_alpha.tail(k.m)));
    }
    if (!std::isfinite(kl)) throw NumericalFailure("dual objective became non-finite", it);
    trace.kl_values.push_back(kl);
    trace.iterations = it;
    if (monitor.push(kl)) {
      trace.converged = true;
      break;
    }
  }
  trace.final_estimate = final_window_mean(trace.kl_values, cfg.convergence_window);
  return {std::move(w), std::move(trace)};
}

namespace {

double full_data_kl(FeatureSource& p, FeatureSource& q, const Vector& beta) {
  auto all_rows = [](Index n) {
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    return idx;
  };
  Vector t_p, t_q;
  p.scores(all_rows(p.rows()), beta, t_p);
  q.scores(all_rows(q.rows()), beta, t_q);
  return t_p.mean() - log_mean_exp(t_q);
}

}  // namespace

PrimalRun run_primal(FeatureSource& p, FeatureSource& q, const OptimizerConfig& cfg) {
  cfg.validate();
  if (p.rows() < 1 || q.rows() < 1) throw InvalidInput("run_primal: empty feature set");
  if (p.dim() != q.dim()) throw InvalidInput("run_primal: feature dimensions differ");
  Rng rng(cfg.seed);
  MinibatchSampler xs(p.rows(), cfg.batch_size, rng);
  MinibatchSampler ys(q.rows(), cfg.batch_size, rng);

  PrimalWeights w{Vector::Zero(p.dim()), cfg.norm_budget};
  OptimizationTrace trace;
  trace.kl_values.reserve(cfg.max_iter);
  ConvergenceMonitor monitor(cfg.convergence_window, cfg.gamma);

  Vector t_p, t_q;
  Vector grad(p.dim());
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    const auto idx_p = xs.next();
    const auto idx_q = ys.next();
    // grad = softmax-weighted Q rows - mean P rows + 2 penalty beta
    grad = 2.0 * cfg.penalty_weight * w.beta;
    p.scores_and_sum(idx_p, w.beta, t_p, -1.0 / static_cast<double>(idx_p.size()), grad);
    q.scores(idx_q, w.beta, t_q);
    if (!t_p.allFinite() || !t_q.allFinite()) {
      throw NumericalFailure("primal objective became non-finite", it);
    }
    const double kl_before = t_p.mean() - log_mean_exp(t_q);
    q.accumulate(idx_q, softmax(t_q), grad);

    w.beta -= cfg.step_size * grad;
    const double norm = w.beta.norm();
    if (!std::isfinite(norm)) throw NumericalFailure("primal weights became non-finite", it);
    if (norm > cfg.norm_budget) w.beta *= cfg.norm_budget / norm;

    const double kl = cfg.monitor_full_data ? full_data_kl(p, q, w.beta) : kl_before;
    if (!std::isfinite(kl)) throw NumericalFailure("primal objective became non-finite", it);
    trace.kl_values.push_back(kl);
    trace.iterations = it;
    if (monitor.push(kl)) {
      trace.converged = true;
      break;
    }
  }
  trace.final_estimate = final_window_mean(trace.kl_values, cfg.convergence_window);
  return {std::move(w), std::move(trace)};
}

PrimalRun run_primal(const Matrix& phi_x, const Matrix& phi_y, const OptimizerConfig& cfg) {
  MatrixFeatureSource<double> p(phi_x);
  MatrixFeatureSource<double> q(phi_y);
  return run_primal(p, q, cfg);
}

PrimalRun run_primal(const FloatMatrix& phi_x, const FloatMatrix& phi_y,
                     const OptimizerConfig& cfg) {
  MatrixFeatureSource<float> p(phi_x);
  MatrixFeatureSource<float> q(phi_y);
  return run_primal(p, q, cfg);
}

}  // namespace kkle
