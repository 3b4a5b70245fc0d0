#pragma once

#include "dmbmpc/ocp_solver.hpp"

#include <string_view>
#include <utility>

namespace dmbmpc {

/// Prediction horizon N, blocking horizon N_B and optimization duration N_OP,
/// all in steps. A cycle releases P = N - N_B inputs.
struct DmbConfig {
  int N = 0;
  int N_B = 0;
  int N_OP = 0;

  int period() const noexcept { return N - N_B; }
  int reduced_horizon() const noexcept { return N - N_B; }
};

/// Full admissibility: 1 <= N_OP <= N_B <= N - 2. Throws AdmissibilityError
/// naming the first failed inequality.
void validate(const DmbConfig& cfg);

/// Structural check only (0 <= N_B < N), used by the solve routines so the
/// degenerate N_B = 0 case stays available to tests.
void validate_structure(const DmbConfig& cfg);

enum class Bootstrap { full_solve, zeros };

std::string_view to_string(Bootstrap kind);
Bootstrap parse_bootstrap(std::string_view name);

/// Controller state between optimizations. `sequence[k]` is the input for
/// absolute time cycle_start + k.
struct DmbState {
  ControlSequence sequence;
  long cycle_start = 0;
  int cycle_index = 0;
};

struct DmbPlan {
  /// First P samples of the owning state's sequence, released at
  /// cycle_start .. cycle_start + P - 1.
  ControlSequence applied;
  /// Model prediction of the state at `handover_time` = cycle_start + N.
  Vector handover_state;
  long handover_time = 0;
  /// Reduced-horizon solve from the handover state.
  OcpSolution solution;
};

/// x_{N_B}: final state of rolling `blocked` out from x.
Vector predict_handover(const LinearPlant& plant, const Vector& x, const ControlSequence& blocked);

/// Full-horizon problem with the first N_B inputs fixed to the last N_B
/// samples of `utilde`. The free tail is obtained by condensing the N-step
/// problem and eliminating the fixed coordinates; value is the full J_N.
OcpSolution solve_blocked_full(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box,
                               const DmbConfig& cfg, const Vector& x, const ControlSequence& utilde,
                               const SolverOptions& opts = {});

/// Standard MPC with horizon N - N_B from the handover state.
OcpSolution solve_reduced(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box,
                          const DmbConfig& cfg, const Vector& handover, const SolverOptions& opts = {});

/// Drops the P released samples and appends a freshly optimized tail.
DmbState advance(const DmbState& state, const DmbConfig& cfg, const ControlSequence& tail);

/// One controller cycle. `x_measured` is the plant state at state.cycle_start.
std::pair<DmbPlan, DmbState> plan_cycle(const LinearPlant& plant, const QuadraticStageCost& cost,
                                        const InputBox& box, const DmbConfig& cfg, const DmbState& state,
                                        const Vector& x_measured, const SolverOptions& opts = {});

/// Initial sequence installed before t = 0.
DmbState bootstrap(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box,
                   const DmbConfig& cfg, const Vector& x0, Bootstrap kind = Bootstrap::full_solve,
                   const SolverOptions& opts = {});

/// V_N^DMB(x) = delta(x) + V_{N-N_B}(x_{N_B}), blocked prefix = last N_B samples of utilde.
double dmb_value(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box,
                 const DmbConfig& cfg, const Vector& x, const ControlSequence& utilde,
                 const SolverOptions& opts = {});

}  // namespace dmbmpc
