#include "dmbmpc/simulator.hpp"

#include "dmbmpc/bounds.hpp"
#include "dmbmpc/errors.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace dmbmpc {

namespace {

void finalize(SimResult& r, const ExperimentConfig& cfg, std::vector<Vector> inputs, std::vector<Vector> states) {
  r.trajectory.inputs = ControlSequence(std::move(inputs), cfg.plant.input_dim());
  r.trajectory.states = std::move(states);
  r.total_cost = 0.0;
  for (double l : r.stage_costs) {
    r.total_cost += l;
  }
  for (auto kind : kAllMetrics) {
    r.metric_values[kind] = trajectory_metric(kind, cfg.cost, r.trajectory, cfg.plant.C());
  }
}

}  // namespace

ExperimentConfig paper_example_config() {
  Matrix A(2, 2);
  A << 0.9, 0.0, 0.6, 0.4;
  Matrix B(2, 1);
  B << 0.1, 0.0;
  Matrix C(1, 2);
  C << 0.0, 1.0;
  Matrix Q(2, 2);
  Q << 10.0, 0.0, 0.0, 100.0;
  Matrix R = Matrix::Identity(1, 1);
  Vector x0(2);
  x0 << 1.0, -1.0;
  return ExperimentConfig{LinearPlant(A, B, C),
                          QuadraticStageCost(Q, R),
                          InputBox::symmetric(1, 1.0),
                          DmbConfig{6, 3, 3},
                          x0,
                          100,
                          MetricKind::sqrt_total_cost,
                          Bootstrap::full_solve,
                          SolverOptions{}};
}

void validate(const ExperimentConfig& cfg) {
  const int n = cfg.plant.state_dim();
  const int m = cfg.plant.input_dim();
  if (cfg.cost.state_dim() != n || cfg.cost.input_dim() != m) {
    throw ContractViolation("experiment: cost dimensions do not match the plant");
  }
  if (cfg.box.dim() != m) {
    throw ContractViolation("experiment: input box dimension does not match the plant");
  }
  if (cfg.x0.size() != n) {
    throw ContractViolation("experiment: x0 dimension does not match the plant");
  }
  if (cfg.T < cfg.horizon.N) {
    throw ContractViolation("experiment: T must be >= N");
  }
}

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::rh_reduced: return "rh_reduced";
    case ControllerKind::rh_full: return "rh_full";
    case ControllerKind::dmb: return "dmb";
  }
  return "unknown";
}

SimResult run_receding(const ExperimentConfig& cfg, int horizon) {
  validate(cfg);
  if (horizon < 1) {
    throw ContractViolation("run_receding: horizon must be >= 1");
  }
  SimResult r;
  r.controller_kind = horizon == cfg.horizon.N ? ControllerKind::rh_full : ControllerKind::rh_reduced;
  r.horizon = horizon;
  r.bootstrap = cfg.bootstrap;

  std::vector<Vector> states{cfg.x0};
  std::vector<Vector> inputs;
  Vector x = cfg.x0;
  for (int t = 0; t < cfg.T; ++t) {
    Vector u;
    try {
      u = rh_control(cfg.plant, cfg.cost, cfg.box, horizon, x, cfg.solver);
    } catch (const Error& e) {
      throw SolverError("run_receding: solve failed at step " + std::to_string(t) + ": " + e.what());
    }
    r.stage_costs.push_back(cfg.cost(x, u));
    r.cycle_index.push_back(t);
    x = cfg.plant.step(x, u);
    inputs.push_back(std::move(u));
    states.push_back(x);
  }
  r.cycles = cfg.T;
  finalize(r, cfg, std::move(inputs), std::move(states));
  return r;
}

SimResult run_dmb(const ExperimentConfig& cfg) {
  validate(cfg.horizon);
  validate(cfg);
  const DmbConfig& h = cfg.horizon;
  const int P = h.period();

  SimResult r;
  r.controller_kind = ControllerKind::dmb;
  r.horizon = h.N;
  r.bootstrap = cfg.bootstrap;

  DmbState state = bootstrap(cfg.plant, cfg.cost, cfg.box, h, cfg.x0, cfg.bootstrap, cfg.solver);
  std::vector<Vector> states{cfg.x0};
  std::vector<Vector> inputs;
  std::map<long, Vector> predicted;  // handover time -> predicted state
  Vector x = cfg.x0;
  long t = 0;
  while (t < cfg.T) {
    if (state.cycle_start != t) {
      throw ContractViolation("run_dmb: cycle bookkeeping out of sync");
    }
    // The tail solved in this cycle is the blocked problem posed at t + P with
    // the N_B inherited moves fixed; its first sample is needed at t + N.
    SolveRecord rec{state.cycle_index, t + P, t + P + h.N_OP, t + h.N};
    if (rec.ready > rec.needed) {
      throw AdmissibilityError("run_dmb: solve of cycle " + std::to_string(rec.cycle) + " finishes at step " +
                               std::to_string(rec.ready) + " after its first sample is needed at step " +
                               std::to_string(rec.needed));
    }
    r.solves.push_back(rec);

    auto [plan, next] = plan_cycle(cfg.plant, cfg.cost, cfg.box, h, state, x, cfg.solver);
    predicted.emplace(plan.handover_time, plan.handover_state);
    for (int k = 0; k < P && t < cfg.T; ++k, ++t) {
      const Vector& u = plan.applied[k];
      if (!cfg.box.contains(u)) {
        throw ContractViolation("run_dmb: released input outside the box at step " + std::to_string(t));
      }
      r.stage_costs.push_back(cfg.cost(x, u));
      r.cycle_index.push_back(state.cycle_index);
      x = cfg.plant.step(x, u);
      inputs.push_back(u);
      states.push_back(x);
      if (auto it = predicted.find(t + 1); it != predicted.end()) {
        r.max_handover_error = std::max(r.max_handover_error, (it->second - x).cwiseAbs().maxCoeff());
        predicted.erase(it);
      }
    }
    ++r.cycles;
    state = std::move(next);
  }
  finalize(r, cfg, std::move(inputs), std::move(states));
  return r;
}

Comparison compare(const ExperimentConfig& cfg) {
  Comparison c;
  c.mpc = run_receding(cfg, cfg.horizon.reduced_horizon());
  c.dmb = run_dmb(cfg);
  for (auto kind : kAllMetrics) {
    const double a = c.dmb.metric_values.at(kind);
    const double b = c.mpc.metric_values.at(kind);
    const bool degenerate = a == 0.0 && b == 0.0;
    c.degenerate[kind] = degenerate;
    c.ratio[kind] = degenerate ? 1.0 : a / b;
  }
  const auto& xs = c.dmb.trajectory.states;
  const auto& ys = c.mpc.trajectory.states;
  for (std::size_t t = 0; t < xs.size() && t < ys.size(); ++t) {
    c.state_error.push_back((xs[t] - ys[t]).norm());
  }
  return c;
}

std::map<MetricKind, double> prefix_metrics(const SimResult& result, const ExperimentConfig& cfg, int T) {
  if (T < 1 || T > result.trajectory.steps()) {
    throw ContractViolation("prefix_metrics: T outside the simulated range");
  }
  Trajectory prefix;
  prefix.inputs = result.trajectory.inputs.slice(0, T);
  prefix.states.assign(result.trajectory.states.begin(), result.trajectory.states.begin() + T + 1);
  std::map<MetricKind, double> out;
  for (auto kind : kAllMetrics) {
    out[kind] = trajectory_metric(kind, cfg.cost, prefix, cfg.plant.C());
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const SimResult& result) {
  const auto& traj = result.trajectory;
  const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size());
  const int m = traj.inputs.input_dim();
  out << "t";
  for (int i = 0; i < n; ++i) {
    out << ",x" << i;
  }
  for (int j = 0; j < m; ++j) {
    out << ",u" << j;
  }
  out << ",stage_cost,controller,cycle_index\n";
  const auto old_precision = out.precision(17);
  for (int t = 0; t < traj.steps(); ++t) {
    out << t;
    const Vector& x = traj.states[static_cast<std::size_t>(t)];
    for (int i = 0; i < n; ++i) {
      out << ',' << x[i];
    }
    for (int j = 0; j < m; ++j) {
      out << ',' << traj.inputs[t][j];
    }
    out << ',' << result.stage_costs[static_cast<std::size_t>(t)] << ',' << to_string(result.controller_kind) << ','
        << result.cycle_index[static_cast<std::size_t>(t)] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace dmbmpc
