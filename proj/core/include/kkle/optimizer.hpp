#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kkle/dv_objective.hpp"
#include "kkle/kernel.hpp"
#include "kkle/linalg.hpp"
#include "kkle/rng.hpp"

namespace kkle {

/// Projected minibatch SGD settings shared by the dual and primal paths.
struct OptimizerConfig {
  double step_size = 0.05;
  std::size_t max_iter = 2000;
  /// Tolerance on successive smoothed KL values; 0 runs to max_iter unless
  /// the smoothed value stops changing exactly.
  double gamma = 1e-5;
  /// Minibatch size per sample set; a set with <= batch_size rows is used whole.
  Index batch_size = 512;
  /// 1/t in the penalised objective g + (1/t) |T|_H^2.
  double penalty_weight = 1e-3;
  /// M: the RKHS norm ball radius.
  double norm_budget = 10.0;
  Seed seed = 0;
  /// Length of the moving average and of the run of small changes required
  /// to declare convergence.
  std::size_t convergence_window = 10;
  /// Record KL on the full data after each step instead of on the minibatch.
  bool monitor_full_data = false;

  void validate() const;
};

struct OptimizationTrace {
  /// One KL value per iteration: the minibatch value at the iterate the step
  /// was taken from, or the full-data value after the step when
  /// monitor_full_data is set.
  std::vector<double> kl_values;
  bool converged = false;
  std::size_t iterations = 0;
  /// Mean of the last convergence_window entries of kl_values.
  double final_estimate = 0.0;
};

struct DualRun {
  DualWeights weights;
  OptimizationTrace trace;
};

struct PrimalRun {
  PrimalWeights weights;
  OptimizationTrace trace;
};

/// Radial rescaling onto alpha' K alpha <= M^2. Feasible input is returned
/// unchanged. This is not the metric projection in the K-norm, only the
/// scaling along the ray through the origin.
DualWeights project_dual(DualWeights w, const GramMatrix& k);

/// Radial rescaling onto |beta| <= M (the exact Euclidean projection).
PrimalWeights project_primal(PrimalWeights w);

/// Minimises g(alpha) + penalty alpha' K alpha from alpha = 0. Per-step cost
/// is O(batch (n + m) + (n + m)^2).
DualRun run_dual(const GramMatrix& k, const OptimizerConfig& cfg);

/// Feature rows for one side of the primal problem. The optimiser asks for
/// witness values on a minibatch and then for the weighted feature sum over
/// the same minibatch; sources that synthesise rows on the fly may rely on
/// accumulate() following scores() with identical indices. A minibatch with
/// rows() entries is always the identity ordering 0..rows()-1.
class FeatureSource {
 public:
  virtual ~FeatureSource() = default;
  virtual Index rows() const = 0;
  virtual Index dim() const = 0;
  /// out[k] = phi(indices[k]) . beta
  virtual void scores(std::span<const Index> indices, const Vector& beta, Vector& out) = 0;
  /// grad += sum_k weights[k] phi(indices[k])
  virtual void accumulate(std::span<const Index> indices, const Vector& weights, Vector& grad) = 0;
  /// scores() followed by grad += coef * sum_k phi(indices[k]).
  virtual void scores_and_sum(std::span<const Index> indices, const Vector& beta, Vector& out,
                              double coef, Vector& grad) {
    scores(indices, beta, out);
    accumulate(indices, Vector::Constant(static_cast<Index>(indices.size()), coef), grad);
  }
};

/// A materialised feature matrix in double or single precision.
template <typename Scalar>
class MatrixFeatureSource final : public FeatureSource {
 public:
  using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  explicit MatrixFeatureSource(const Storage& phi) : phi_(phi) {}
  Index rows() const override { return phi_.rows(); }
  Index dim() const override { return phi_.cols(); }

  void scores(std::span<const Index> indices, const Vector& beta, Vector& out) override {
    const auto count = static_cast<Index>(indices.size());
    if (count == phi_.rows()) {
      out.noalias() = (phi_ * beta.template cast<Scalar>()).template cast<double>();
      return;
    }
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b = beta.template cast<Scalar>();
    out.resize(count);
    for (Index k = 0; k < count; ++k) {
      out(k) = static_cast<double>(phi_.row(indices[static_cast<std::size_t>(k)]).dot(b));
    }
  }

  void accumulate(std::span<const Index> indices, const Vector& weights, Vector& grad) override {
    const auto count = static_cast<Index>(indices.size());
    if (count == phi_.rows()) {
      grad.noalias() += (phi_.transpose() * weights.template cast<Scalar>()).template cast<double>();
      return;
    }
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> acc = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>::Zero(phi_.cols());
    for (Index k = 0; k < count; ++k) {
      acc.noalias() += static_cast<Scalar>(weights(k)) * phi_.row(indices[static_cast<std::size_t>(k)]);
    }
    grad += acc.transpose().template cast<double>();
  }

  void scores_and_sum(std::span<const Index> indices, const Vector& beta, Vector& out, double coef,
                      Vector& grad) override {
    const auto count = static_cast<Index>(indices.size());
    if (count == phi_.rows()) {
      scores(indices, beta, out);
      grad.noalias() += coef * phi_.colwise().sum().transpose().template cast<double>();
      return;
    }
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b = beta.template cast<Scalar>();
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> acc = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>::Zero(phi_.cols());
    out.resize(count);
    for (Index k = 0; k < count; ++k) {
      const auto row = phi_.row(indices[static_cast<std::size_t>(k)]);
      out(k) = static_cast<double>(row.dot(b));
      acc.noalias() += row;
    }
    grad += coef * acc.transpose().template cast<double>();
  }

 private:
  const Storage& phi_;
};

/// Minimises g(beta) + penalty |beta|^2 from beta = 0. Per-step cost is
/// O(batch d); the whole run is O(max_iter (n + m) d) at worst.
PrimalRun run_primal(FeatureSource& p, FeatureSource& q, const OptimizerConfig& cfg);
PrimalRun run_primal(const Matrix& phi_x, const Matrix& phi_y, const OptimizerConfig& cfg);
PrimalRun run_primal(const FloatMatrix& phi_x, const FloatMatrix& phi_y, const OptimizerConfig& cfg);

/// Moving-window stopping rule. With window 1 this is the plain
/// |KL_c - KL_p| <= gamma test.
class ConvergenceMonitor {
 public:
  ConvergenceMonitor(std::size_t window, double gamma);

  /// Records one KL value; returns true once the criterion has held for
  /// `window` consecutive updates.
  bool push(double kl);

 private:
  std::size_t window_;
  double gamma_;
  std::vector<double> recent_;
  std::size_t next_ = 0;
  double sum_ = 0.0;
  double previous_mean_ = 0.0;
  bool have_previous_ = false;
  std::size_t streak_ = 0;
};

/// Draws minibatches without replacement from [0, n).
class MinibatchSampler {
 public:
  MinibatchSampler(Index n, Index batch, Rng& rng);

  bool full_batch() const { return full_; }
  std::span<const Index> next();

 private:
  std::vector<Index> pool_;
  Index batch_;
  bool full_;
  Rng& rng_;
};

double final_window_mean(const std::vector<double>& values, std::size_t window);

}  // namespace kkle
