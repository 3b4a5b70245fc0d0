#include "dmbmpc/oracle.hpp"

#include "dmbmpc/dmb.hpp"
#include "dmbmpc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace dmbmpc {

namespace {

InputBox hull(const std::vector<double>& values) {
  if (values.empty()) {
    throw ContractViolation("InputGrid: empty grid");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {Vector::Constant(1, *lo), Vector::Constant(1, *hi)};
}

std::vector<Vector> as_vectors(const std::vector<double>& values) {
  std::vector<Vector> out;
  out.reserve(values.size());
  for (double v : values) {
    out.emplace_back(Vector::Constant(1, v));
  }
  return out;
}

struct VectorLess {
  bool operator()(const Vector& a, const Vector& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  }
};

class Enumerator {
public:
  Enumerator(const StateMap& f, const StageCostFn& cost, const InputGrid& grid, int N)
      : f_(f), cost_(cost), grid_(grid), N_(N), idx_(static_cast<std::size_t>(N)), best_idx_(idx_) {}

  DpResult run(const Vector& x0) {
    search(0, x0, 0.0);
    std::vector<Vector> seq;
    seq.reserve(best_idx_.size());
    for (int i : best_idx_) {
      seq.push_back(grid_[i]);
    }
    return {best_, ControlSequence(std::move(seq), grid_.input_dim())};
  }

private:
  // Stage costs are nonnegative, so a partial sum >= best cannot produce a
  // strictly better sequence; pruning it keeps the lexicographic tie-break.
  void search(int depth, const Vector& x, double acc) {
    if (depth == N_) {
      if (acc < best_) {
        best_ = acc;
        best_idx_ = idx_;
      }
      return;
    }
    for (int i = 0; i < grid_.size(); ++i) {
      const double total = acc + cost_(x, grid_[i]);
      if (total >= best_) {
        continue;
      }
      idx_[static_cast<std::size_t>(depth)] = i;
      if (depth + 1 == N_) {
        search(depth + 1, x, total);
      } else {
        search(depth + 1, f_(x, grid_[i]), total);
      }
    }
  }

  const StateMap& f_;
  const StageCostFn& cost_;
  const InputGrid& grid_;
  int N_;
  std::vector<int> idx_;
  std::vector<int> best_idx_;
  double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

InputGrid::InputGrid(std::vector<Vector> points, const InputBox& box) : points_(std::move(points)), box_(box) {
  if (points_.empty()) {
    throw ContractViolation("InputGrid: empty grid");
  }
  std::set<Vector, VectorLess> seen;
  for (const auto& p : points_) {
    if (p.size() != box_.dim()) {
      throw ContractViolation("InputGrid: point dimension does not match the box");
    }
    if (!box_.contains(p)) {
      throw ContractViolation("InputGrid: point outside the input box");
    }
    if (!seen.insert(p).second) {
      throw ContractViolation("InputGrid: duplicate point");
    }
  }
}

InputGrid InputGrid::scalar(std::vector<double> values) { return {as_vectors(values), hull(values)}; }

DpResult dp_value(const StateMap& f, const StageCostFn& cost, const InputGrid& grid, int N, const Vector& x0) {
  if (N < 1) {
    throw ContractViolation("dp_value: horizon must be >= 1");
  }
  const double sequences = std::pow(static_cast<double>(grid.size()), N);
  if (sequences > kOracleBudget) {
    throw OracleCapacityError("dp_value: " + std::to_string(grid.size()) + "^" + std::to_string(N) +
                              " sequences exceed the enumeration budget");
  }
  return Enumerator(f, cost, grid, N).run(x0);
}

double dp_dmb_value(const StateMap& f, const StageCostFn& cost, const InputGrid& grid, int N, int N_B,
                    const Vector& x0, const ControlSequence& blocked) {
  if (N_B < 0 || N_B >= N) {
    throw ContractViolation("dp_dmb_value: need 0 <= N_B < N");
  }
  if (blocked.size() != N_B) {
    throw ContractViolation("dp_dmb_value: blocked prefix must have length N_B");
  }
  const double delta = blocked_prefix_cost(cost, f, x0, blocked);
  const Vector handover = propagate(f, x0, blocked);
  return delta + dp_value(f, cost, grid, N - N_B, handover).value;
}

Trajectory dp_policy_rollout(const StateMap& f, const StageCostFn& cost, const InputGrid& grid, int N,
                             const Vector& x0, int T) {
  if (T < 1) {
    throw ContractViolation("dp_policy_rollout: T must be >= 1");
  }
  std::vector<Vector> inputs;
  inputs.reserve(static_cast<std::size_t>(T));
  Vector x = x0;
  for (int t = 0; t < T; ++t) {
    inputs.push_back(dp_value(f, cost, grid, N, x).argseq[0]);
    x = f(x, inputs.back());
  }
  return rollout(f, x0, ControlSequence(std::move(inputs), grid.input_dim()));
}

Trajectory dp_dmb_rollout(const StateMap& f, const StageCostFn& cost, const InputGrid& grid, int N, int N_B,
                          const Vector& x0, int T) {
  if (T < 1) {
    throw ContractViolation("dp_dmb_rollout: T must be >= 1");
  }
  const DmbConfig cfg{N, N_B, 0};
  validate_structure(cfg);
  const int P = cfg.period();

  DmbState state;
  state.sequence = dp_value(f, cost, grid, N, x0).argseq;
  std::vector<Vector> inputs;
  inputs.reserve(static_cast<std::size_t>(T));
  Vector x = x0;
  while (static_cast<int>(inputs.size()) < T) {
    const Vector handover = propagate(f, x, state.sequence);
    const ControlSequence tail = dp_value(f, cost, grid, P, handover).argseq;
    for (int k = 0; k < P && static_cast<int>(inputs.size()) < T; ++k) {
      inputs.push_back(state.sequence[k]);
      x = f(x, inputs.back());
    }
    state = advance(state, cfg, tail);
  }
  return rollout(f, x0, ControlSequence(std::move(inputs), grid.input_dim()));
}

std::vector<Vector> reachable_states(const StateMap& f, const InputGrid& grid, const Vector& x0, int depth) {
  if (depth < 0) {
    throw ContractViolation("reachable_states: negative depth");
  }
  std::set<Vector, VectorLess> all{x0};
  std::vector<Vector> frontier{x0};
  for (int d = 0; d < depth; ++d) {
    std::vector<Vector> next;
    for (const auto& x : frontier) {
      for (int i = 0; i < grid.size(); ++i) {
        Vector y = f(x, grid[i]);
        if (all.insert(y).second) {
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }
  return {all.begin(), all.end()};
}

ValueOracle dp_value_oracle(const StateMap& f, const StageCostFn& cost, const InputGrid& grid) {
  ValueOracle oracle;
  oracle.value = [f, cost, grid](int k, const Vector& x) {
    return k == 0 ? 0.0 : dp_value(f, cost, grid, k, x).value;
  };
  oracle.first_input = [f, cost, grid](int k, const Vector& x) { return dp_value(f, cost, grid, k, x).argseq[0]; };
  oracle.stage_cost = cost;
  return oracle;
}

}  // namespace dmbmpc
