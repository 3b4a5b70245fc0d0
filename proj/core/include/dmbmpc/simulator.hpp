#pragma once

#include "dmbmpc/dmb.hpp"
#include "dmbmpc/objective.hpp"
#include "dmbmpc/ocp_solver.hpp"

#include <iosfwd>
#include <map>
#include <string_view>
#include <vector>

namespace dmbmpc {

struct ExperimentConfig {
  LinearPlant plant;
  QuadraticStageCost cost;
  InputBox box;
  DmbConfig horizon;
  Vector x0;
  int T = 100;
  MetricKind metric = MetricKind::sqrt_total_cost;
  Bootstrap bootstrap = Bootstrap::full_solve;
  SolverOptions solver;
};

/// The two-state example plant with Q = diag(10, 100), R = 1, |u| <= 1,
/// N = 6, N_B = N_OP = 3, x0 = (1, -1), T = 100.
ExperimentConfig paper_example_config();

/// Structural checks shared by all runs (dimensions, T >= N).
void validate(const ExperimentConfig& cfg);

enum class ControllerKind { rh_reduced, rh_full, dmb };

std::string_view to_string(ControllerKind kind);

/// Timing of one overlapped optimization, in absolute steps.
struct SolveRecord {
  int cycle = 0;
  long launch = 0;  ///< step at which the blocked problem is posed
  long ready = 0;   ///< launch + N_OP
  long needed = 0;  ///< first step that uses a newly optimized sample
};

struct SimResult {
  ControllerKind controller_kind = ControllerKind::rh_reduced;
  Trajectory trajectory;  ///< T inputs, T + 1 states
  std::vector<double> stage_costs;
  std::vector<int> cycle_index;  ///< controller cycle that released each input
  std::map<MetricKind, double> metric_values;
  double total_cost = 0.0;
  int cycles = 0;
  Bootstrap bootstrap = Bootstrap::full_solve;
  std::vector<SolveRecord> solves;
  /// Largest |x_realized - x_predicted| at the handover steps inside the run.
  double max_handover_error = 0.0;
  int horizon = 0;
};

/// One solve per step, applied without delay.
SimResult run_receding(const ExperimentConfig& cfg, int horizon);

/// Bootstrap, then one plan_cycle per P = N - N_B released inputs. Throws
/// AdmissibilityError before simulating if the horizon configuration fails.
SimResult run_dmb(const ExperimentConfig& cfg);

struct Comparison {
  SimResult mpc;  ///< receding horizon with horizon N - N_B
  SimResult dmb;
  std::map<MetricKind, double> ratio;  ///< dmb / mpc
  std::map<MetricKind, bool> degenerate;  ///< 0/0 ratios, reported as 1
  std::vector<double> state_error;  ///< ||x_dmb(t) - x_mpc(t)|| for t = 0..T
};

Comparison compare(const ExperimentConfig& cfg);

/// Metrics recomputed on the first T steps of a longer run. Runs are
/// deterministic, so this equals rerunning with T steps.
std::map<MetricKind, double> prefix_metrics(const SimResult& result, const ExperimentConfig& cfg, int T);

/// CSV, one row per applied input:
/// t, x0..x{n-1}, u0..u{m-1}, stage_cost, controller, cycle_index
void write_trajectory_csv(std::ostream& out, const SimResult& result);

}  // namespace dmbmpc
