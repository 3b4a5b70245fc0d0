#include "dmbmpc/dmb.hpp"

#include "dmbmpc/errors.hpp"

#include <string>

namespace dmbmpc {

namespace {

void fail(const std::string& inequality, const DmbConfig& cfg) {
  throw AdmissibilityError("horizon configuration violates " + inequality + " (N=" + std::to_string(cfg.N) +
                           ", N_B=" + std::to_string(cfg.N_B) + ", N_OP=" + std::to_string(cfg.N_OP) + ")");
}

ControlSequence blocked_part(const ControlSequence& utilde, const DmbConfig& cfg) {
  if (utilde.size() != cfg.N) {
    throw ContractViolation("blocked sequence must have length N=" + std::to_string(cfg.N) + ", got " +
                            std::to_string(utilde.size()));
  }
  return utilde.slice(cfg.N - cfg.N_B, cfg.N_B);
}

}  // namespace

void validate_structure(const DmbConfig& cfg) {
  if (cfg.N < 1) {
    fail("N >= 1", cfg);
  }
  if (cfg.N_B < 0) {
    fail("N_B >= 0", cfg);
  }
  if (cfg.N_B >= cfg.N) {
    fail("N_B < N", cfg);
  }
}

void validate(const DmbConfig& cfg) {
  validate_structure(cfg);
  if (cfg.N_OP < 1) {
    fail("1 <= N_OP", cfg);
  }
  if (cfg.N_OP > cfg.N_B) {
    fail("N_OP <= N_B", cfg);
  }
  if (cfg.N_B > cfg.N - 2) {
    fail("N_B <= N-2", cfg);
  }
}

std::string_view to_string(Bootstrap kind) {
  return kind == Bootstrap::full_solve ? "full_solve" : "zeros";
}

Bootstrap parse_bootstrap(std::string_view name) {
  if (name == "full_solve") {
    return Bootstrap::full_solve;
  }
  if (name == "zeros") {
    return Bootstrap::zeros;
  }
  throw ConfigError("dmb.bootstrap", "unknown bootstrap '" + std::string(name) + "' (expected full_solve or zeros)");
}

Vector predict_handover(const LinearPlant& plant, const Vector& x, const ControlSequence& blocked) {
  if (x.size() != plant.state_dim()) {
    throw ContractViolation("predict_handover: state dimension mismatch");
  }
  Vector out = x;
  for (const auto& u : blocked.samples()) {
    out = plant.step(out, u);
  }
  return out;
}

OcpSolution solve_blocked_full(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box,
                               const DmbConfig& cfg, const Vector& x, const ControlSequence& utilde,
                               const SolverOptions& opts) {
  validate_structure(cfg);
  const ControlSequence fixed = blocked_part(utilde, cfg);
  if (!fixed.within(box)) {
    throw ContractViolation("solve_blocked_full: fixed prefix violates the input box");
  }
  const int m = plant.input_dim();
  const int nb = cfg.N_B * m;
  const CondensedProblem full = condense(plant, cost, box, cfg.N, x);
  const int nf = full.num_vars() - nb;

  // Eliminate the fixed block: u = (ub, uf).
  CondensedProblem tail;
  tail.horizon = cfg.N - cfg.N_B;
  tail.input_dim = m;
  tail.H = full.H.bottomRightCorner(nf, nf);
  if (nb > 0) {
    const Vector ub = fixed.stacked();
    tail.g = full.g.tail(nf) + full.H.bottomLeftCorner(nf, nb) * ub;
    tail.c = full.c + 0.5 * ub.dot(full.H.topLeftCorner(nb, nb) * ub) + full.g.head(nb).dot(ub);
  } else {
    tail.g = full.g;
    tail.c = full.c;
  }
  tail.lower = full.lower.tail(nf);
  tail.upper = full.upper.tail(nf);

  OcpSolution sol = solve_box_qp(tail, opts);
  sol.useq = fixed.concat(sol.useq);
  sol.value = horizon_cost(cost, plant, x, sol.useq);
  return sol;
}

OcpSolution solve_reduced(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box,
                          const DmbConfig& cfg, const Vector& handover, const SolverOptions& opts) {
  validate_structure(cfg);
  return solve_ocp(plant, cost, box, cfg.reduced_horizon(), handover, opts);
}

DmbState advance(const DmbState& state, const DmbConfig& cfg, const ControlSequence& tail) {
  const int P = cfg.period();
  if (tail.size() != P) {
    throw ContractViolation("advance: tail must have length N - N_B");
  }
  DmbState next;
  next.sequence = state.sequence.slice(P, cfg.N_B).concat(tail);
  next.cycle_start = state.cycle_start + P;
  next.cycle_index = state.cycle_index + 1;
  return next;
}

std::pair<DmbPlan, DmbState> plan_cycle(const LinearPlant& plant, const QuadraticStageCost& cost,
                                        const InputBox& box, const DmbConfig& cfg, const DmbState& state,
                                        const Vector& x_measured, const SolverOptions& opts) {
  validate_structure(cfg);
  if (state.sequence.size() != cfg.N) {
    throw ContractViolation("plan_cycle: carried sequence must have length N");
  }
  for (int k = 0; k < state.sequence.size(); ++k) {
    if (!box.contains(state.sequence[k])) {
      throw ContractViolation("plan_cycle: inherited sample " + std::to_string(k) + " outside the input box");
    }
  }
  const int P = cfg.period();

  DmbPlan plan;
  plan.applied = state.sequence.slice(0, P);
  // The P released samples followed by the N_B blocked ones reach time cycle_start + N.
  plan.handover_state = predict_handover(plant, x_measured, state.sequence);
  plan.handover_time = state.cycle_start + cfg.N;
  plan.solution = solve_reduced(plant, cost, box, cfg, plan.handover_state, opts);

  DmbState next = advance(state, cfg, plan.solution.useq);
  return {std::move(plan), std::move(next)};
}

DmbState bootstrap(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box,
                   const DmbConfig& cfg, const Vector& x0, Bootstrap kind, const SolverOptions& opts) {
  validate_structure(cfg);
  DmbState state;
  if (kind == Bootstrap::full_solve) {
    state.sequence = solve_ocp(plant, cost, box, cfg.N, x0, opts).useq;
  } else {
    const Vector zero = box.clamp(Vector::Zero(plant.input_dim()));
    state.sequence = ControlSequence(std::vector<Vector>(static_cast<std::size_t>(cfg.N), zero), plant.input_dim());
  }
  return state;
}

double dmb_value(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box,
                 const DmbConfig& cfg, const Vector& x, const ControlSequence& utilde, const SolverOptions& opts) {
  validate_structure(cfg);
  const ControlSequence blocked = blocked_part(utilde, cfg);
  const double delta = blocked_prefix_cost(cost, plant, x, blocked);
  return delta + value_function(plant, cost, box, cfg.reduced_horizon(), predict_handover(plant, x, blocked), opts);
}

}  // namespace dmbmpc
