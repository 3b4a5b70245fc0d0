#pragma once

#include "dmbmpc/dmb.hpp"
#include "dmbmpc/ocp_solver.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace dmbmpc {

/// eta(gamma, h) = (g+1)^{h-2} / ((g+1)^{h-2} + g^h), the value-function
/// shrinking factor for reduced horizon h = N - N_B. Requires h >= 2.
double eta(double gamma, int h);

struct StabilityMargin {
  double alpha = 0.0;
  double upsilon = 0.0;
  double relative_bound = 0.0;
};

/// True iff (gamma+1)^{h-2} > gamma^h.
bool growth_condition_holds(double gamma, int h);

/// alpha = ((g+1)^{h-2} - g^h) / (g+1)^{h-2}, upsilon = 1/alpha,
/// relative_bound = g^h / ((g+1)^{h-2} - g^h). Throws AdmissibilityError
/// (quoting both sides) when the growth condition fails.
StabilityMargin stability_margin(double gamma, int h);

/// N_OP <= N_B <= N - 2.
bool check_first_bound(const DmbConfig& cfg);

/// Strict upper bound on N_B: N - 2 log(g+1) / (log(g+1) - log g).
double nb_upper_bound(double gamma, int N);

/// Relative suboptimality bound of the DMB closed loop:
/// relative_bound(gamma, N - N_B) + delta / v_inf.
double overall_bound(double gamma, int N, int N_B, double delta, double v_inf);

struct GammaEstimate {
  double gamma = 0.0;
  int samples = 0;
  int skipped = 0;
  Vector worst_state;
  int horizon_checked = 0;
};

/// Value function V_k(x) and first optimal input mu_k(x) of some solver,
/// together with the stage cost they minimize.
struct ValueOracle {
  std::function<double(int, const Vector&)> value;
  std::function<Vector(int, const Vector&)> first_input;
  StageCostFn stage_cost;
};

/// gamma_hat = max_x max( V_2/V_1 - 1, max_{k=2..N} V_k / l(x, mu_k(x)) - 1 ).
/// States with a denominator below 1e-12 are skipped and counted; if every
/// state is skipped an EstimationError is thrown. Ties on the maximum keep the
/// lexicographically smallest state.
GammaEstimate estimate_gamma(const ValueOracle& oracle, int N, const std::vector<Vector>& sample_states);

/// Same, with V_k and mu_k from the box-QP solver.
GammaEstimate estimate_gamma(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box, int N,
                             const std::vector<Vector>& sample_states, const SolverOptions& opts = {});

/// Uniform tensor grid of states in [-radius, radius]^n with `points` per axis.
std::vector<Vector> state_grid(int n, double radius, int points);

struct BoundReport {
  double gamma = 0.0;
  int N = 0;
  int N_B = 0;
  double eta = 0.0;
  double alpha = 0.0;
  double upsilon = 0.0;
  double relative_bound = 0.0;
  double nb_upper = 0.0;
  bool first_bound_ok = false;
  bool assumption_ok = false;
  std::optional<double> delta_over_vinf;
  std::optional<double> overall_bound;
  /// Set when v_inf came from a truncated sum that did not reach its tail tolerance.
  bool vinf_truncated = false;
};

/// Evaluates every formula that is defined for (gamma, cfg). Quantities whose
/// preconditions fail are left at NaN and flagged through assumption_ok.
BoundReport make_bound_report(double gamma, const DmbConfig& cfg, std::optional<double> delta = std::nullopt,
                              std::optional<double> v_inf = std::nullopt, bool vinf_converged = true);

}  // namespace dmbmpc
