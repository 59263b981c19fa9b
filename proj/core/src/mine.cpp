#include "kkle/mine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kkle/dv_objective.hpp"
#include "kkle/error.hpp"

namespace kkle {
namespace {

struct Forward {
  Matrix hidden;  // rows x H, tanh activations
  Vector out;
};

Forward forward(const MlpParams& p, const SampleSet& rows) {
  Forward f;
  f.hidden = rows * p.w_in.transpose();
  f.hidden.rowwise() += p.b_in.transpose();
  f.hidden = f.hidden.array().tanh().matrix();
  f.out = (f.hidden * p.w_out).array() + p.b_out;
  return f;
}

/// Adds sum_r coef_r dT(row_r)/dparams into grad.
void backprop(const MlpParams& p, const SampleSet& rows, const Forward& f, const Vector& coef,
              MlpParams& grad) {
  grad.w_out.noalias() += f.hidden.transpose() * coef;
  grad.b_out += coef.sum();
  // d pre-activation = coef_r * w_out .* (1 - h^2)
  Matrix dpre = (1.0 - f.hidden.array().square()).matrix();
  dpre.array().rowwise() *= p.w_out.transpose().array();
  dpre.array().colwise() *= coef.array();
  grad.w_in.noalias() += dpre.transpose() * rows;
  grad.b_in.noalias() += dpre.colwise().sum().transpose();
}

void check_shapes(const MlpParams& p, Index cols) {
  if (p.input_dim() != cols) {
    throw InvalidInput("network expects input dimension " + std::to_string(p.input_dim()) +
                       ", got " + std::to_string(cols));
  }
}

MlpParams loss_gradient(const MlpParams& p, const SampleSet& x, const SampleSet& y,
                        const Forward& fx, const Forward& fy) {
  MlpParams grad = MlpParams::zeros(p.input_dim(), p.hidden_width());
  backprop(p, x, fx, Vector::Constant(x.rows(), -1.0 / static_cast<double>(x.rows())), grad);
  backprop(p, y, fy, softmax(fy.out), grad);
  return grad;
}

}  // namespace

MlpParams MlpParams::zeros(Index input_dim, Index hidden_width) {
  if (input_dim < 1 || hidden_width < 1) throw InvalidInput("network sizes must be >= 1");
  return {Matrix::Zero(hidden_width, input_dim), Vector::Zero(hidden_width),
          Vector::Zero(hidden_width), 0.0};
}

MlpParams MlpParams::random(Index input_dim, Index hidden_width, Seed seed) {
  MlpParams p = zeros(input_dim, hidden_width);
  Rng rng(seed);
  const double a1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double a2 = 1.0 / std::sqrt(static_cast<double>(hidden_width));
  std::uniform_real_distribution<double> first(-a1, a1);
  std::uniform_real_distribution<double> second(-a2, a2);
  for (Index i = 0; i < p.w_in.size(); ++i) p.w_in.data()[i] = first(rng);
  for (Index i = 0; i < hidden_width; ++i) p.b_in(i) = first(rng);
  for (Index i = 0; i < hidden_width; ++i) p.w_out(i) = second(rng);
  p.b_out = second(rng);
  return p;
}

Vector MlpParams::flatten() const {
  Vector flat(parameter_count());
  Index at = 0;
  flat.segment(at, w_in.size()) = Eigen::Map<const Vector>(w_in.data(), w_in.size());
  at += w_in.size();
  flat.segment(at, b_in.size()) = b_in;
  at += b_in.size();
  flat.segment(at, w_out.size()) = w_out;
  at += w_out.size();
  flat(at) = b_out;
  return flat;
}

MlpParams MlpParams::unflatten(const Vector& flat, Index input_dim, Index hidden_width) {
  MlpParams p = zeros(input_dim, hidden_width);
  if (flat.size() != p.parameter_count()) throw InvalidInput("flat parameter vector has wrong size");
  Index at = 0;
  Eigen::Map<Vector>(p.w_in.data(), p.w_in.size()) = flat.segment(at, p.w_in.size());
  at += p.w_in.size();
  p.b_in = flat.segment(at, hidden_width);
  at += hidden_width;
  p.w_out = flat.segment(at, hidden_width);
  at += hidden_width;
  p.b_out = flat(at);
  return p;
}

void MineConfig::validate() const {
  if (hidden_width < 1) throw InvalidInput("hidden width must be >= 1");
  optimizer.validate();
}

double mine_forward(const MlpParams& params, std::span<const double> z) {
  check_shapes(params, static_cast<Index>(z.size()));
  const Eigen::Map<const Vector> zv(z.data(), static_cast<Index>(z.size()));
  const Vector h = (params.w_in * zv + params.b_in).array().tanh().matrix();
  return h.dot(params.w_out) + params.b_out;
}

Vector mine_forward(const MlpParams& params, const SampleSet& rows) {
  check_shapes(params, rows.cols());
  return forward(params, rows).out;
}

double mine_loss(const MlpParams& params, const SampleSet& x, const SampleSet& y) {
  check_shapes(params, x.cols());
  check_shapes(params, y.cols());
  return dv_value(forward(params, x).out, forward(params, y).out).g;
}

MlpParams mine_loss_gradient(const MlpParams& params, const SampleSet& x, const SampleSet& y) {
  check_shapes(params, x.cols());
  check_shapes(params, y.cols());
  return loss_gradient(params, x, y, forward(params, x), forward(params, y));
}

MineResult mine_estimate(const SampleSet& x, const SampleSet& y, const MineConfig& cfg) {
  cfg.validate();
  if (x.rows() < 2 || y.rows() < 2) throw InvalidInput("need at least two samples per set");
  if (x.cols() != y.cols() || x.cols() < 1) throw InvalidInput("sample sets disagree on dimension");
  if (!x.allFinite() || !y.allFinite()) throw InvalidInput("samples contain non-finite values");

  const OptimizerConfig& opt = cfg.optimizer;
  MlpParams params = MlpParams::random(x.cols(), cfg.hidden_width, derive_seed(opt.seed, "mine-init"));
  Rng rng(derive_seed(opt.seed, "sgd"));
  MinibatchSampler xs(x.rows(), opt.batch_size, rng);
  MinibatchSampler ys(y.rows(), opt.batch_size, rng);

  MineResult result;
  result.config = cfg;
  result.n = x.rows();
  result.m = y.rows();
  OptimizationTrace& trace = result.trace;
  trace.kl_values.reserve(opt.max_iter);
  ConvergenceMonitor monitor(opt.convergence_window, opt.gamma);

  SampleSet bx, by;
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    const SampleSet* px = &x;
    const SampleSet* py = &y;
    if (!xs.full_batch()) {
      const auto idx = xs.next();
      bx = x(std::vector<Index>(idx.begin(), idx.end()), Eigen::all);
      px = &bx;
    }
    if (!ys.full_batch()) {
      const auto idx = ys.next();
      by = y(std::vector<Index>(idx.begin(), idx.end()), Eigen::all);
      py = &by;
    }
    const Forward fx = forward(params, *px);
    const Forward fy = forward(params, *py);
    if (!fx.out.allFinite() || !fy.out.allFinite()) {
      throw NumericalFailure("MINE network output became non-finite", it);
    }
    const double kl = -dv_value(fx.out, fy.out).g;
    if (!std::isfinite(kl)) throw NumericalFailure("MINE objective became non-finite", it);

    const MlpParams grad = loss_gradient(params, *px, *py, fx, fy);
    params.w_in -= opt.step_size * grad.w_in;
    params.b_in -= opt.step_size * grad.b_in;
    params.w_out -= opt.step_size * grad.w_out;
    params.b_out -= opt.step_size * grad.b_out;

    trace.kl_values.push_back(kl);
    trace.iterations = it;
    if (monitor.push(kl)) {
      trace.converged = true;
      break;
    }
  }
  trace.final_estimate = final_window_mean(trace.kl_values, opt.convergence_window);
  result.raw_estimate = trace.final_estimate;
  result.kl_estimate = cfg.clamp_nonnegative ? std::max(0.0, result.raw_estimate) : result.raw_estimate;
  return result;
}

MineResult mine_estimate_mi(const SampleSet& pairs, const ColumnSplit& split, const MineConfig& cfg) {
  split.validate(pairs.cols());
  if (pairs.rows() < 4) throw InvalidInput("mutual information needs at least 4 rows");
  const ProductSamples samples =
      product_of_marginals(pairs, split, derive_seed(cfg.optimizer.seed, "mi-permutation"));
  return mine_estimate(samples.joint, samples.product, cfg);
}

}  // namespace kkle
