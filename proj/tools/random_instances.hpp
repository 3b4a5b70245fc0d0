#pragma once

#include "dmbmpc/dmb.hpp"
#include "dmbmpc/ocp_solver.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace dmbmpc::cli {

/// Random linear-quadratic blocked problem: n <= 3, m <= 2, N <= 8, with a
/// feasible length-N sequence whose last N_B samples form the blocked prefix.
struct RandomLqInstance {
  LinearPlant plant;
  QuadraticStageCost cost;
  InputBox box;
  DmbConfig horizon;
  Vector x0;
  ControlSequence utilde;
};

RandomLqInstance random_lq_instance(std::mt19937_64& rng);

struct EquivalenceCheck {
  double max_tail_diff = 0.0;  ///< componentwise, blocked tail vs reduced solve
  double value_rel_err = 0.0;  ///< |J_full - (delta + V_reduced)| / max(1, |J_full|)
  bool passed = false;
};

/// Solves the blocked full-horizon problem and the reduced problem from the
/// predicted handover state and compares them.
EquivalenceCheck check_blocked_equivalence(const RandomLqInstance& inst, double tail_tol = 1e-6,
                                           double value_tol = 1e-8);

}  // namespace dmbmpc::cli
