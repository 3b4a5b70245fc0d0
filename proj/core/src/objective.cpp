#include "dmbmpc/objective.hpp"

#include "dmbmpc/errors.hpp"

#include <cmath>

namespace dmbmpc {

namespace {

bool is_symmetric(const Matrix& M) {
  return M.rows() == M.cols() && (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + M.cwiseAbs().maxCoeff());
}

double min_eigenvalue(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

QuadraticStageCost::QuadraticStageCost(Matrix Q, Matrix R)
    : QuadraticStageCost(Q, std::move(R), Vector::Zero(Q.rows())) {}

QuadraticStageCost::QuadraticStageCost(Matrix Q, Matrix R, Vector target)
    : Q_(std::move(Q)), R_(std::move(R)), target_(std::move(target)) {
  if (Q_.rows() == 0 || !is_symmetric(Q_)) {
    throw ContractViolation("QuadraticStageCost: Q must be square and symmetric");
  }
  if (R_.rows() == 0 || !is_symmetric(R_)) {
    throw ContractViolation("QuadraticStageCost: R must be square and symmetric");
  }
  if (!Q_.allFinite() || !R_.allFinite() || !target_.allFinite()) {
    throw ContractViolation("QuadraticStageCost: entries must be finite");
  }
  if (target_.size() != Q_.rows()) {
    throw ContractViolation("QuadraticStageCost: target dimension must match Q");
  }
  if (min_eigenvalue(Q_) < kQEigenFloor) {
    throw ContractViolation("QuadraticStageCost: Q must be positive semidefinite");
  }
  if (min_eigenvalue(R_) <= kREigenFloor) {
    throw ContractViolation("QuadraticStageCost: R must be positive definite");
  }
}

double QuadraticStageCost::operator()(const Vector& x, const Vector& u) const {
  if (x.size() != Q_.rows() || u.size() != R_.rows()) {
    throw ContractViolation("stage_cost: dimension mismatch");
  }
  const Vector e = x - target_;
  // Clamp tiny negative round-off from a semidefinite Q.
  return std::max(0.0, e.dot(Q_ * e) + u.dot(R_ * u));
}

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::rms_state_norm: return "rms_state_norm";
    case MetricKind::rms_weighted_cost: return "rms_weighted_cost";
    case MetricKind::sqrt_total_cost: return "sqrt_total_cost";
    case MetricKind::rms_output: return "rms_output";
  }
  return "unknown";
}

MetricKind parse_metric_kind(std::string_view name) {
  for (auto kind : kAllMetrics) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  throw ConfigError("sim.metric", "unknown metric '" + std::string(name) +
                                      "' (expected rms_state_norm, rms_weighted_cost, sqrt_total_cost or rms_output)");
}

double stage_cost(const QuadraticStageCost& cost, const Vector& x, const Vector& u) { return cost(x, u); }

double horizon_cost(const StageCostFn& cost, const StateMap& f, const Vector& x0, const ControlSequence& useq) {
  double total = 0.0;
  Vector x = x0;
  for (const auto& u : useq.samples()) {
    total += cost(x, u);
    x = f(x, u);
  }
  return total;
}

double horizon_cost(const QuadraticStageCost& cost, const LinearPlant& plant, const Vector& x0,
                    const ControlSequence& useq) {
  if (useq.empty()) {
    throw ContractViolation("horizon_cost: empty control sequence");
  }
  if (x0.size() != plant.state_dim()) {
    throw ContractViolation("horizon_cost: initial state dimension mismatch");
  }
  return horizon_cost(
      [&cost](const Vector& x, const Vector& u) { return cost(x, u); },
      [&plant](const Vector& x, const Vector& u) { return plant.step(x, u); }, x0, useq);
}

double blocked_prefix_cost(const StageCostFn& cost, const StateMap& f, const Vector& x,
                           const ControlSequence& blocked) {
  return horizon_cost(cost, f, x, blocked);
}

double blocked_prefix_cost(const QuadraticStageCost& cost, const LinearPlant& plant, const Vector& x,
                           const ControlSequence& blocked) {
  if (blocked.empty()) {
    return 0.0;
  }
  return horizon_cost(cost, plant, x, blocked);
}

TruncatedCost truncated_infinite_cost(const StageCostFn& cost, const StateMap& f, const InputBox& box,
                                      const Vector& x0, const Policy& policy, int max_steps, double tail_tol) {
  if (max_steps < 1) {
    throw ContractViolation("truncated_infinite_cost: max_steps must be >= 1");
  }
  TruncatedCost out;
  Vector x = x0;
  for (int k = 0; k < max_steps; ++k) {
    const Vector u = policy(x);
    if (!box.contains(u)) {
      throw ContractViolation("truncated_infinite_cost: policy returned an input outside the box at step " +
                              std::to_string(k));
    }
    const double l = cost(x, u);
    out.value += l;
    out.steps = k + 1;
    x = f(x, u);
    if (l < tail_tol || l == 0.0) {
      out.converged = true;
      break;
    }
  }
  out.final_state = x;
  return out;
}

TruncatedCost truncated_infinite_cost(const QuadraticStageCost& cost, const LinearPlant& plant,
                                      const InputBox& box, const Vector& x0, const Policy& policy,
                                      int max_steps, double tail_tol) {
  return truncated_infinite_cost([&cost](const Vector& x, const Vector& u) { return cost(x, u); },
                                 plant.as_state_map(), box, x0, policy, max_steps, tail_tol);
}

double trajectory_metric(MetricKind kind, const QuadraticStageCost& cost, const Trajectory& traj,
                         const Matrix& output_map) {
  const int T = traj.steps();
  if (T == 0) {
    throw ContractViolation("trajectory_metric: empty trajectory");
  }
  double acc = 0.0;
  for (int t = 0; t < T; ++t) {
    const Vector& x = traj.states[static_cast<std::size_t>(t)];
    switch (kind) {
      case MetricKind::rms_state_norm: acc += (x - cost.target()).squaredNorm(); break;
      case MetricKind::rms_weighted_cost:
      case MetricKind::sqrt_total_cost: acc += cost(x, traj.inputs[t]); break;
      case MetricKind::rms_output: acc += (output_map * x).squaredNorm(); break;
      default: throw ConfigError("sim.metric", "unknown metric kind");
    }
  }
  if (kind == MetricKind::sqrt_total_cost) {
    return std::sqrt(acc);
  }
  return std::sqrt(acc / T);
}

}  // namespace dmbmpc
