#include "dmbmpc/ocp_solver.hpp"

#include "dmbmpc/errors.hpp"

#include <cmath>
#include <string>

namespace dmbmpc {

double CondensedProblem::objective(const Vector& u) const { return 0.5 * u.dot(H * u) + g.dot(u) + c; }

Vector CondensedProblem::gradient(const Vector& u) const { return H * u + g; }

Vector CondensedProblem::project(const Vector& u) const { return u.cwiseMax(lower).cwiseMin(upper); }

CondensedProblem condense(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box, int N,
                          const Vector& x0) {
  const int n = plant.state_dim();
  const int m = plant.input_dim();
  if (N < 1 || m == 0) {
    throw ContractViolation("condense: need N >= 1 and a nonempty input");
  }
  if (x0.size() != n || cost.state_dim() != n || cost.input_dim() != m || box.dim() != m) {
    throw ContractViolation("condense: dimension mismatch between plant, cost, box and state");
  }

  // x(k) = free(k) + sum_j G(k, j) u(j), j < k.
  // G(k, j) = A^{k-1-j} B, so each block row is A times the previous one with B appended.
  std::vector<Matrix> impulse;  // impulse[d] = A^d B
  impulse.reserve(static_cast<std::size_t>(N));
  impulse.push_back(plant.B());
  for (int d = 1; d < N; ++d) {
    impulse.push_back(plant.A() * impulse.back());
  }

  const int nv = N * m;
  CondensedProblem prob;
  prob.horizon = N;
  prob.input_dim = m;
  prob.H = Matrix::Zero(nv, nv);
  prob.g = Vector::Zero(nv);
  prob.c = 0.0;

  Vector free = x0;
  for (int k = 0; k < N; ++k) {
    const Vector e = free - cost.target();
    prob.c += e.dot(cost.Q() * e);
    if (k > 0) {
      // Stage k depends on u(0..k-1) through G_k = [A^{k-1}B ... B].
      Matrix Gk(n, k * m);
      for (int j = 0; j < k; ++j) {
        Gk.middleCols(j * m, m) = impulse[static_cast<std::size_t>(k - 1 - j)];
      }
      const Matrix QGk = cost.Q() * Gk;
      prob.H.topLeftCorner(k * m, k * m).noalias() += 2.0 * Gk.transpose() * QGk;
      prob.g.head(k * m).noalias() += 2.0 * QGk.transpose() * e;
    }
    prob.H.block(k * m, k * m, m, m) += 2.0 * cost.R();
    free = plant.A() * free;
  }
  prob.H = 0.5 * (prob.H + prob.H.transpose()).eval();

  prob.lower = box.lower().replicate(N, 1);
  prob.upper = box.upper().replicate(N, 1);
  return prob;
}

double largest_eigenvalue(const Matrix& H, int max_iter, double tol) {
  if (H.rows() == 0) {
    return 0.0;
  }
  Vector v = Vector::Ones(H.rows()).normalized();
  double lambda = v.dot(H * v);
  for (int it = 0; it < max_iter; ++it) {
    Vector w = H * v;
    const double norm = w.norm();
    if (norm == 0.0) {
      return 0.0;
    }
    v = w / norm;
    const double next = v.dot(H * v);
    const bool done = std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next));
    lambda = next;
    if (done) {
      break;
    }
  }
  return lambda;
}

double projected_gradient_norm(const CondensedProblem& prob, const Vector& u) {
  if (u.size() == 0) {
    return 0.0;
  }
  return (u - prob.project(u - prob.gradient(u))).cwiseAbs().maxCoeff();
}

bool satisfies_kkt(const CondensedProblem& prob, const Vector& u, double tol) {
  const Vector grad = prob.gradient(u);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] < prob.lower[i] - tol || u[i] > prob.upper[i] + tol) {
      return false;
    }
    if (std::abs(grad[i]) <= tol) {
      continue;
    }
    const bool at_lower = u[i] <= prob.lower[i] + tol;
    const bool at_upper = u[i] >= prob.upper[i] - tol;
    if (!((at_lower && grad[i] > 0.0) || (at_upper && grad[i] < 0.0))) {
      return false;
    }
  }
  return true;
}

OcpSolution solve_box_qp(const CondensedProblem& prob, const SolverOptions& opts) {
  const int nv = prob.num_vars();
  const int m = prob.input_dim;
  if (nv == 0 || m == 0) {
    throw ContractViolation("solve_box_qp: empty problem");
  }
  if (opts.tol <= 0.0 || opts.max_iter < 1) {
    throw ContractViolation("solve_box_qp: tol must be positive and max_iter >= 1");
  }

  Eigen::LLT<Matrix> llt(prob.H);
  if (llt.info() != Eigen::Success) {
    throw SolverError("solve_box_qp: H is not positive definite");
  }

  Vector u;
  if (opts.initial) {
    if (opts.initial->size() != nv) {
      throw ContractViolation("solve_box_qp: initial iterate has wrong dimension");
    }
    u = prob.project(*opts.initial);
  } else {
    u = prob.project(llt.solve(-prob.g));
  }

  double L = largest_eigenvalue(prob.H);
  if (!(L > 0.0)) {
    throw SolverError("solve_box_qp: nonpositive curvature estimate");
  }

  // Objective change along d from `from`. Computed from d directly, so its sign
  // stays meaningful when f itself is large and the step is tiny.
  const auto change = [&prob](const Vector& from, const Vector& d) {
    return prob.gradient(from).dot(d) + 0.5 * d.dot(prob.H * d);
  };

  OcpSolution sol;
  double residual = projected_gradient_norm(prob, u);
  Vector y = u;
  double t = 1.0;
  int it = 0;
  while (residual > opts.tol && it < opts.max_iter) {
    ++it;
    Vector next = prob.project(y - prob.gradient(y) / L);
    if (change(u, next - u) > 0.0) {
      // Restart with a plain projected step from the last iterate. It cannot
      // increase f once L bounds the curvature along the step.
      t = 1.0;
      const Vector grad = prob.gradient(u);
      next = prob.project(u - grad / L);
      Vector d = next - u;
      while (d.dot(prob.H * d) > L * d.squaredNorm() && L < 1e300) {
        L *= 2.0;
        next = prob.project(u - grad / L);
        d = next - u;
      }
      y = next;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = next + ((t - 1.0) / t_next) * (next - u);
      t = t_next;
    }
    u = std::move(next);
    residual = projected_gradient_norm(prob, u);
  }

  sol.useq = ControlSequence::from_stacked(u, m);
  sol.value = prob.objective(u);
  sol.kkt_residual = residual;
  sol.iterations = it;
  sol.status = residual <= opts.tol ? SolverStatus::converged : SolverStatus::iteration_limit;
  return sol;
}

OcpSolution solve_ocp(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box, int N,
                      const Vector& x0, const SolverOptions& opts) {
  const CondensedProblem prob = condense(plant, cost, box, N, x0);
  OcpSolution sol = solve_box_qp(prob, opts);
  // Re-evaluate on the model so value is exactly J_N at the returned sequence.
  sol.value = horizon_cost(cost, plant, x0, sol.useq);
  return sol;
}

double value_function(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box, int N,
                      const Vector& x, const SolverOptions& opts) {
  if (N < 0) {
    throw ContractViolation("value_function: negative horizon");
  }
  if (N == 0) {
    return 0.0;
  }
  return solve_ocp(plant, cost, box, N, x, opts).value;
}

Vector rh_control(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box, int N,
                  const Vector& x, const SolverOptions& opts) {
  if (N < 1) {
    throw ContractViolation("rh_control: horizon must be >= 1");
  }
  return solve_ocp(plant, cost, box, N, x, opts).useq[0];
}

}  // namespace dmbmpc
