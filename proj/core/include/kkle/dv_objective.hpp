#pragma once

#include <span>

#include "kkle/kernel.hpp"
#include "kkle/linalg.hpp"

namespace kkle {

/// Coefficients of T(z) = sum_i alpha_i k(z_i, z) over the pooled samples.
/// Feasible when alpha' K alpha <= norm_budget^2.
struct DualWeights {
  Vector alpha;
  double norm_budget = 10.0;
};

/// Coefficients of T(z) = beta' phi(z) in random-feature space.
/// Feasible when |beta| <= norm_budget.
struct PrimalWeights {
  Vector beta;
  double norm_budget = 10.0;
};

/// g is the loss that is minimised; kl_estimate = -g is the Donsker-Varadhan
/// value E_P[T] - log E_Q[exp T].
struct ObjectiveValue {
  double g = 0.0;
  double kl_estimate = 0.0;
};

/// log((1/m) sum_i exp(v_i)) with a max shift. Throws InvalidInput on empty
/// or non-finite input.
double log_mean_exp(std::span<const double> values);
double log_mean_exp(const Vector& values);

/// exp(v_i - max) / sum_j exp(v_j - max).
Vector softmax(const Vector& values);

// Dual (Gram-row) parameterisation. The penalty term (1/t) alpha' K alpha
// enters the gradient only; the reported objective is unpenalised.

ObjectiveValue dual_objective(const DualWeights& w, const GramMatrix& k);
Vector dual_gradient(const DualWeights& w, const GramMatrix& k, double penalty_weight);
double dual_quadratic_form(const Vector& alpha, const GramMatrix& k);

/// Largest eigenvalue of the Hessian of g + penalty alpha' K alpha at
/// alpha = 0, i.e. of K_Y' (I/m - 11'/m^2) K_Y + 2 penalty K, by power
/// iteration from a fixed start vector.
double dual_curvature_at_zero(const GramMatrix& k, double penalty_weight, int iterations = 100);

// Primal (feature-space) parameterisation. phi_x is n x d, phi_y is m x d.

ObjectiveValue primal_objective(const PrimalWeights& w, const Matrix& phi_x, const Matrix& phi_y);
Vector primal_gradient(const PrimalWeights& w, const Matrix& phi_x, const Matrix& phi_y,
                       double penalty_weight);

/// Shared kernel of both parameterisations: given the witness values on the
/// P-samples and Q-samples, returns g = LME(t_q) - mean(t_p).
ObjectiveValue dv_value(const Vector& t_p, const Vector& t_q);

}  // namespace kkle
