#pragma once

#include "dmbmpc/plant.hpp"

#include <array>
#include <functional>
#include <string>
#include <string_view>

namespace dmbmpc {

/// l(x, u) = (x - target)' Q (x - target) + u' R u with Q >= 0 and R > 0.
class QuadraticStageCost {
public:
  QuadraticStageCost(Matrix Q, Matrix R);
  QuadraticStageCost(Matrix Q, Matrix R, Vector target);

  const Matrix& Q() const noexcept { return Q_; }
  const Matrix& R() const noexcept { return R_; }
  const Vector& target() const noexcept { return target_; }
  int state_dim() const noexcept { return static_cast<int>(Q_.rows()); }
  int input_dim() const noexcept { return static_cast<int>(R_.rows()); }

  double operator()(const Vector& x, const Vector& u) const;

  /// Eigenvalue floors used by the constructor.
  static constexpr double kQEigenFloor = -1e-10;
  static constexpr double kREigenFloor = 1e-12;

private:
  Matrix Q_;
  Matrix R_;
  Vector target_;
};

/// Arbitrary nonnegative stage cost, used by the enumeration oracle.
using StageCostFn = std::function<double(const Vector&, const Vector&)>;

/// State feedback law u = mu(x).
using Policy = std::function<Vector(const Vector&)>;

enum class MetricKind { rms_state_norm, rms_weighted_cost, sqrt_total_cost, rms_output };

inline constexpr std::array<MetricKind, 4> kAllMetrics = {
    MetricKind::rms_state_norm, MetricKind::rms_weighted_cost, MetricKind::sqrt_total_cost,
    MetricKind::rms_output};

std::string_view to_string(MetricKind kind);
/// Throws ConfigError for names outside the closed set.
MetricKind parse_metric_kind(std::string_view name);

double stage_cost(const QuadraticStageCost& cost, const Vector& x, const Vector& u);

/// J_N(x0, u) = sum_{k=0}^{N-1} l(x_u(k), u(k)); no terminal term.
double horizon_cost(const QuadraticStageCost& cost, const LinearPlant& plant, const Vector& x0,
                    const ControlSequence& useq);
double horizon_cost(const StageCostFn& cost, const StateMap& f, const Vector& x0, const ControlSequence& useq);

/// Cost accrued along the blocked samples from x; zero for an empty prefix.
double blocked_prefix_cost(const QuadraticStageCost& cost, const LinearPlant& plant, const Vector& x,
                           const ControlSequence& blocked);
double blocked_prefix_cost(const StageCostFn& cost, const StateMap& f, const Vector& x,
                           const ControlSequence& blocked);

struct TruncatedCost {
  double value = 0.0;
  bool converged = false;
  int steps = 0;
  Vector final_state;
};

/// Closed-loop cost of `policy`, accumulated until a stage cost drops below
/// `tail_tol` (converged) or `max_steps` stages have been summed.
/// Throws ContractViolation if the policy leaves `box`.
TruncatedCost truncated_infinite_cost(const QuadraticStageCost& cost, const LinearPlant& plant,
                                      const InputBox& box, const Vector& x0, const Policy& policy,
                                      int max_steps, double tail_tol);
TruncatedCost truncated_infinite_cost(const StageCostFn& cost, const StateMap& f, const InputBox& box,
                                      const Vector& x0, const Policy& policy, int max_steps, double tail_tol);

/// Candidate trajectory summaries. Means are over the T input steps, pairing
/// states[t] with inputs[t]; rms_output uses `output_map` (the plant's C).
double trajectory_metric(MetricKind kind, const QuadraticStageCost& cost, const Trajectory& traj,
                         const Matrix& output_map);

}  // namespace dmbmpc
