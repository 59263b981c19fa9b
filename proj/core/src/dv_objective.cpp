#include "kkle/dv_objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kkle/error.hpp"

namespace kkle {
namespace {

void check_dual(const DualWeights& w, const GramMatrix& k) {
  if (k.n < 1 || k.m < 1 || k.entries.rows() != k.size() || k.entries.cols() != k.size()) {
    throw InvalidInput("Gram matrix shape does not match its n + m bookkeeping");
  }
  if (w.alpha.size() != k.size()) {
    throw InvalidInput("dual weights have length " + std::to_string(w.alpha.size()) +
                       ", Gram matrix has size " + std::to_string(k.size()));
  }
}

void check_primal(const PrimalWeights& w, const Matrix& phi_x, const Matrix& phi_y) {
  if (phi_x.rows() < 1 || phi_y.rows() < 1) throw InvalidInput("empty feature matrix");
  if (phi_x.cols() != phi_y.cols()) {
    throw InvalidInput("feature matrices disagree on dimension");
  }
  if (w.beta.size() != phi_x.cols()) {
    throw InvalidInput("primal weights have length " + std::to_string(w.beta.size()) +
                       ", features have dimension " + std::to_string(phi_x.cols()));
  }
}

}  // namespace

double log_mean_exp(std::span<const double> values) {
  if (values.empty()) throw InvalidInput("log_mean_exp of an empty vector");
  double hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidInput("log_mean_exp: non-finite input");
    hi = std::max(hi, v);
  }
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc / static_cast<double>(values.size()));
}

double log_mean_exp(const Vector& values) {
  return log_mean_exp(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

Vector softmax(const Vector& values) {
  if (values.size() == 0) throw InvalidInput("softmax of an empty vector");
  const double hi = values.maxCoeff();
  Vector e = (values.array() - hi).exp().matrix();
  return e / e.sum();
}

ObjectiveValue dv_value(const Vector& t_p, const Vector& t_q) {
  if (t_p.size() == 0 || t_q.size() == 0) throw InvalidInput("DV value needs both sample sets");
  const double g = log_mean_exp(t_q) - t_p.mean();
  return {g, -g};
}

double dual_quadratic_form(const Vector& alpha, const GramMatrix& k) {
  return alpha.dot(k.entries * alpha);
}

double dual_curvature_at_zero(const GramMatrix& k, double penalty_weight, int iterations) {
  if (k.entries.rows() != k.size() || k.size() < 2) throw InvalidInput("malformed Gram matrix");
  const double inv_m = 1.0 / static_cast<double>(k.m);
  auto apply = [&](const Vector& v) {
    Vector u = k.y_rows() * v;
    u.array() -= u.mean();
    Vector out = k.y_rows().transpose() * (u * inv_m);
    if (penalty_weight > 0.0) out.noalias() += 2.0 * penalty_weight * (k.entries * v);
    return out;
  };
  // Alternating signs keep the start vector away from the near-constant
  // direction that the centring annihilates.
  Vector v(k.size());
  for (Index i = 0; i < v.size(); ++i) v(i) = (i % 2 == 0) ? 1.0 : -0.5;
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = apply(v);
    const double norm = w.norm();
    if (norm == 0.0) return 2.0 * penalty_weight;
    lambda = v.dot(w);
    v = w / norm;
  }
  return lambda;
}

ObjectiveValue dual_objective(const DualWeights& w, const GramMatrix& k) {
  check_dual(w, k);
  const Vector t_p = k.x_rows() * w.alpha;
  const Vector t_q = k.y_rows() * w.alpha;
  return dv_value(t_p, t_q);
}

Vector dual_gradient(const DualWeights& w, const GramMatrix& k, double penalty_weight) {
  check_dual(w, k);
  if (!(penalty_weight >= 0.0)) throw InvalidInput("penalty weight must be >= 0");
  const Vector weights = softmax(k.y_rows() * w.alpha);
  Vector grad = k.y_rows().transpose() * weights;
  grad -= k.x_rows().colwise().mean().transpose();
  if (penalty_weight > 0.0) grad += 2.0 * penalty_weight * (k.entries * w.alpha);
  return grad;
}

ObjectiveValue primal_objective(const PrimalWeights& w, const Matrix& phi_x, const Matrix& phi_y) {
  check_primal(w, phi_x, phi_y);
  return dv_value(phi_x * w.beta, phi_y * w.beta);
}

Vector primal_gradient(const PrimalWeights& w, const Matrix& phi_x, const Matrix& phi_y,
                       double penalty_weight) {
  check_primal(w, phi_x, phi_y);
  if (!(penalty_weight >= 0.0)) throw InvalidInput("penalty weight must be >= 0");
  const Vector weights = softmax(phi_y * w.beta);
  Vector grad = phi_y.transpose() * weights;
  grad -= phi_x.colwise().mean().transpose();
  if (penalty_weight > 0.0) grad += 2.0 * penalty_weight * w.beta;
  return grad;
}

}  // namespace kkle
