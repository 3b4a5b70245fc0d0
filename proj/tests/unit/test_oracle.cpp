#include "fixtures.hpp"

#include "dmbmpc/errors.hpp"
#include "dmbmpc/oracle.hpp"
#include "dmbmpc/oracle_checks.hpp"

#include <gtest/gtest.h>

namespace dmbmpc {
namespace {

using testing::scalar;
using testing::scalar_seq;

struct ScalarInstance {
  StateMap f = testing::scalar_plant(0.5).as_state_map();
  StageCostFn cost = [](const Vector& x, const Vector& u) { return x.squaredNorm() + u.squaredNorm(); };
  InputGrid grid = InputGrid::scalar({-1.0, 0.0, 1.0});
};

TEST(DpValue, Examples) {
  ScalarInstance s;
  const auto one = dp_value(s.f, s.cost, s.grid, 1, scalar(1.0));
  EXPECT_DOUBLE_EQ(one.value, 1.0);
  EXPECT_TRUE(one.argseq == scalar_seq({0.0}));

  const auto two = dp_value(s.f, s.cost, s.grid, 2, scalar(1.0));
  EXPECT_DOUBLE_EQ(two.value, 1.25);
  EXPECT_TRUE(two.argseq == scalar_seq({0.0, 0.0}));

  for (int N = 1; N <= 6; ++N) {
    EXPECT_EQ(dp_value(s.f, s.cost, s.grid, N, scalar(0.0)).value, 0.0);
  }
}

TEST(DpValue, BudgetGuard) {
  ScalarInstance s;
  EXPECT_THROW(dp_value(s.f, s.cost, s.grid, 15, scalar(1.0)), OracleCapacityError);  // 3^15 > 1e7
  EXPECT_NO_THROW(dp_value(s.f, s.cost, s.grid, 14, scalar(1.0)));
  EXPECT_EQ(longest_enumerable_horizon(s.grid), 14);
}

TEST(DpValue, LexicographicTieBreak) {
  const StateMap f = [](const Vector& x, const Vector&) { return x; };
  const StageCostFn cost = [](const Vector&, const Vector& u) { return u.squaredNorm(); };
  const auto r = dp_value(f, cost, InputGrid::scalar({1.0, -1.0}), 2, scalar(0.0));
  EXPECT_TRUE(r.argseq == scalar_seq({1.0, 1.0}));  // grid order, not numeric order
}

TEST(DpDmbValue, Examples) {
  ScalarInstance s;
  EXPECT_DOUBLE_EQ(dp_dmb_value(s.f, s.cost, s.grid, 2, 1, scalar(1.0), scalar_seq({0.0})), 1.25);
  EXPECT_DOUBLE_EQ(dp_dmb_value(s.f, s.cost, s.grid, 2, 1, scalar(1.0), scalar_seq({1.0})), 4.25);
  for (int N = 1; N <= 5; ++N) {
    EXPECT_EQ(dp_dmb_value(s.f, s.cost, s.grid, N, 0, scalar(1.0), ControlSequence{}),
              dp_value(s.f, s.cost, s.grid, N, scalar(1.0)).value);
  }
}

TEST(DpPolicyRollout, Examples) {
  ScalarInstance s;
  const auto pinned = dp_policy_rollout(s.f, s.cost, s.grid, 3, scalar(0.0), 5);
  for (const auto& x : pinned.states) {
    EXPECT_EQ(x[0], 0.0);
  }
  const auto r = dp_policy_rollout(s.f, s.cost, s.grid, 2, scalar(1.0), 3);
  ASSERT_EQ(r.states.size(), 4u);
  const double xs[] = {1.0, 0.5, 0.25, 0.125};
  for (int k = 0; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(r.states[k][0], xs[k]);
  }
  EXPECT_TRUE(r.inputs == scalar_seq({0.0, 0.0, 0.0}));

  const auto open = dp_policy_rollout(testing::scalar_plant(0.8).as_state_map(), s.cost, InputGrid::scalar({0.0}), 4,
                                      scalar(2.0), 6);
  const auto expected = rollout(testing::scalar_plant(0.8), scalar(2.0), ControlSequence::zeros(6, 1));
  for (std::size_t k = 0; k < open.states.size(); ++k) {
    EXPECT_EQ(open.states[k], expected.states[k]);
  }
}

TEST(InputGrid, Validation) {
  EXPECT_THROW(InputGrid::scalar({}), ContractViolation);
  EXPECT_THROW(InputGrid::scalar({0.0, 0.0}), ContractViolation);
  EXPECT_THROW(InputGrid({scalar(2.0)}, InputBox::symmetric(1, 1.0)), ContractViolation);
}

TEST(Reachable, CountsDistinctStates) {
  ScalarInstance s;
  // depth 1 from 1: {1, -0.5, 0.5, 1.5}
  EXPECT_EQ(reachable_states(s.f, s.grid, scalar(1.0), 1).size(), 4u);
}

TEST(OracleSuite, AllShippedChecksPass) {
  int applicable = 0;
  for (const auto& r : run_oracle_suite()) {
    if (r.applicable) {
      ++applicable;
      EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
    }
  }
  EXPECT_GE(applicable, 15);
}

TEST(OracleSuite, ScalarInstanceIsTheShippedOne) {
  const auto inst = scalar_oracle_instance();
  EXPECT_EQ(inst.N, 6);
  EXPECT_EQ(inst.N_B, 3);
  EXPECT_EQ(inst.grid.size(), 3);
  EXPECT_EQ(inst.x0[0], 1.0);
}

}  // namespace
}  // namespace dmbmpc
