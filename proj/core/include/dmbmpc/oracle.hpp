#pragma once

#include "dmbmpc/bounds.hpp"
#include "dmbmpc/objective.hpp"
#include "dmbmpc/plant.hpp"

#include <vector>

namespace dmbmpc {

/// Finite set of admissible inputs that the oracle enumerates over.
class InputGrid {
public:
  /// Points must be nonempty, pairwise distinct and inside `box`.
  InputGrid(std::vector<Vector> points, const InputBox& box);

  /// Scalar-input grid; the box is the hull of the points.
  static InputGrid scalar(std::vector<double> values);

  int size() const noexcept { return static_cast<int>(points_.size()); }
  int input_dim() const noexcept { return box_.dim(); }
  const Vector& operator[](int i) const { return points_.at(static_cast<std::size_t>(i)); }
  const InputBox& box() const noexcept { return box_; }

private:
  std::vector<Vector> points_;
  InputBox box_;
};

/// Maximum number of enumerated sequences per dp_value call.
inline constexpr double kOracleBudget = 1e7;

struct DpResult {
  double value = 0.0;
  ControlSequence argseq;
};

/// Exact minimum of J_N over all grid-valued sequences, by depth-first
/// enumeration. Ties keep the lexicographically smallest index sequence.
/// Throws OracleCapacityError when |grid|^N exceeds kOracleBudget.
DpResult dp_value(const StateMap& f, const StageCostFn& cost, const InputGrid& grid, int N, const Vector& x0);

/// delta(x0) along `blocked` plus the exact V_{N-N_B} from the handover state.
/// Blocked samples need not lie on the grid.
double dp_dmb_value(const StateMap& f, const StageCostFn& cost, const InputGrid& grid, int N, int N_B,
                    const Vector& x0, const ControlSequence& blocked);

/// T-step receding-horizon closed loop with the exact finite-set minimizer.
Trajectory dp_policy_rollout(const StateMap& f, const StageCostFn& cost, const InputGrid& grid, int N,
                             const Vector& x0, int T);

/// T-step dynamic move blocking closed loop with the exact finite-set
/// minimizer: one full-horizon bootstrap, then a horizon-(N-N_B) solve per cycle.
Trajectory dp_dmb_rollout(const StateMap& f, const StageCostFn& cost, const InputGrid& grid, int N, int N_B,
                          const Vector& x0, int T);

/// All distinct states reachable from x0 in at most `depth` grid-valued steps.
std::vector<Vector> reachable_states(const StateMap& f, const InputGrid& grid, const Vector& x0, int depth);

/// V_k and mu_k from dp_value, for gamma estimation.
ValueOracle dp_value_oracle(const StateMap& f, const StageCostFn& cost, const InputGrid& grid);

}  // namespace dmbmpc
