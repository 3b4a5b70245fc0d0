#pragma once

#include "dmbmpc/objective.hpp"
#include "dmbmpc/plant.hpp"

#include <optional>

namespace dmbmpc {

/// Dense single-shooting form of J_N: 0.5 u'Hu + g'u + c over stacked inputs
/// u = (u(0), ..., u(N-1)) with per-coordinate bounds.
struct CondensedProblem {
  Matrix H;
  Vector g;
  double c = 0.0;
  Vector lower;
  Vector upper;
  int horizon = 0;
  int input_dim = 0;

  int num_vars() const noexcept { return static_cast<int>(g.size()); }
  double objective(const Vector& u) const;
  Vector gradient(const Vector& u) const;
  Vector project(const Vector& u) const;
};

enum class SolverStatus { converged, iteration_limit };

struct SolverOptions {
  double tol = 1e-9;
  int max_iter = 50000;
  /// Starting point; defaults to the clamped unconstrained minimizer.
  std::optional<Vector> initial;
};

struct OcpSolution {
  ControlSequence useq;
  double value = 0.0;
  SolverStatus status = SolverStatus::converged;
  double kkt_residual = 0.0;
  int iterations = 0;
};

CondensedProblem condense(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box, int N,
                          const Vector& x0);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double largest_eigenvalue(const Matrix& H, int max_iter = 50, double tol = 1e-12);

/// ||u - clamp(u - grad(u))||_inf, zero exactly at a box-QP minimizer.
double projected_gradient_norm(const CondensedProblem& prob, const Vector& u);

/// Coordinatewise complementarity check: either |grad_i| <= tol, or u_i sits
/// on a bound with the gradient pointing out of the box.
bool satisfies_kkt(const CondensedProblem& prob, const Vector& u, double tol);

/// Accelerated projected gradient (FISTA) with step 1/L and function-value
/// restart. Throws SolverError if H is not positive definite.
OcpSolution solve_box_qp(const CondensedProblem& prob, const SolverOptions& opts = {});

OcpSolution solve_ocp(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box, int N,
                      const Vector& x0, const SolverOptions& opts = {});

/// V_N(x); V_0 = 0.
double value_function(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box, int N,
                      const Vector& x, const SolverOptions& opts = {});

/// mu_N(x): first sample of the optimal sequence.
Vector rh_control(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box, int N,
                  const Vector& x, const SolverOptions& opts = {});

}  // namespace dmbmpc
