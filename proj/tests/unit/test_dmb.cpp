#include "fixtures.hpp"

#include "dmbmpc/dmb.hpp"
#include "dmbmpc/errors.hpp"

#include <gtest/gtest.h>

namespace dmbmpc {
namespace {

using testing::example_cost;
using testing::example_plant;
using testing::scalar;
using testing::scalar_cost;
using testing::scalar_plant;
using testing::scalar_seq;
using testing::vec;

const InputBox kUnitBox = InputBox::symmetric(1, 1.0);
const InputBox kWide = InputBox::symmetric(1, 10.0);

TEST(DmbConfig, ValidateNamesTheFailedInequality) {
  EXPECT_NO_THROW(validate(DmbConfig{6, 3, 3}));
  auto message = [](DmbConfig c) {
    try {
      validate(c);
    } catch (const AdmissibilityError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message({6, 5, 3}).find("N_B <= N-2"), std::string::npos);
  EXPECT_NE(message({5, 2, 3}).find("N_OP <= N_B"), std::string::npos);
  EXPECT_NE(message({6, 3, 0}).find("1 <= N_OP"), std::string::npos);
  EXPECT_EQ((DmbConfig{6, 3, 3}).period(), 3);
  EXPECT_EQ((DmbConfig{8, 3, 1}).period(), 5);
}

TEST(Handover, Examples) {
  const Vector h = predict_handover(example_plant(), vec({1.0, -1.0}), ControlSequence::zeros(3, 1));
  EXPECT_NEAR(h[0], 0.729, 1e-15);
  EXPECT_NEAR(h[1], 0.734, 1e-15);
  EXPECT_EQ(predict_handover(example_plant(), vec({0.2, 0.1}), ControlSequence{}), vec({0.2, 0.1}));
  EXPECT_TRUE(predict_handover(example_plant(), Vector::Zero(2), ControlSequence::zeros(4, 1)).isZero(0.0));
}

TEST(BlockedFull, NoBlockingIsThePlainProblem) {
  const auto cfg = DmbConfig{6, 0, 0};
  const Vector x = vec({1.0, -1.0});
  const auto blocked = solve_blocked_full(example_plant(), example_cost(), kUnitBox, cfg, x, ControlSequence::zeros(6, 1));
  const auto plain = solve_ocp(example_plant(), example_cost(), kUnitBox, 6, x);
  EXPECT_LE((blocked.useq.stacked() - plain.useq.stacked()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(blocked.value, plain.value, 1e-10 * plain.value);
}

TEST(BlockedFull, ScalarDecomposition) {
  const auto cfg = DmbConfig{3, 1, 1};
  const auto sol = solve_blocked_full(scalar_plant(0.5), scalar_cost(), kWide, cfg, scalar(1.0), scalar_seq({0.7, 0.3, 0.0}));
  EXPECT_EQ(sol.useq[0][0], 0.0);  // prefix = last N_B sample of utilde
  EXPECT_NEAR(sol.value, 1.0 + value_function(scalar_plant(0.5), scalar_cost(), kWide, 2, scalar(0.5)), 1e-12);
  const auto reduced = solve_ocp(scalar_plant(0.5), scalar_cost(), kWide, 2, scalar(0.5));
  EXPECT_NEAR(sol.useq[1][0], reduced.useq[0][0], 1e-9);
  EXPECT_NEAR(sol.useq[2][0], reduced.useq[1][0], 1e-9);
}

TEST(BlockedFull, InfeasiblePrefixRejected) {
  EXPECT_THROW(solve_blocked_full(scalar_plant(0.5), scalar_cost(), kUnitBox, DmbConfig{3, 1, 1}, scalar(1.0),
                                  scalar_seq({0.0, 0.0, 1.5})),
               ContractViolation);
}

TEST(Reduced, Examples) {
  const auto zero = solve_reduced(example_plant(), example_cost(), kUnitBox, DmbConfig{6, 3, 3}, Vector::Zero(2));
  EXPECT_TRUE(zero.useq.stacked().isZero(0.0));
  EXPECT_EQ(zero.useq.size(), 3);
  EXPECT_EQ(zero.value, 0.0);

  const auto s = solve_reduced(scalar_plant(0.5), scalar_cost(), kWide, DmbConfig{4, 2, 1}, scalar(1.0));
  EXPECT_NEAR(s.useq[0][0], -0.25, 1e-9);
  EXPECT_NEAR(s.useq[1][0], 0.0, 1e-9);
  EXPECT_NEAR(s.value, 1.125, 1e-12);
}

TEST(Bootstrap, Examples) {
  const auto cfg = DmbConfig{6, 3, 3};
  const auto at_target = bootstrap(example_plant(), example_cost(), kUnitBox, cfg, Vector::Zero(2));
  EXPECT_TRUE(at_target.sequence.stacked().isZero(0.0));

  const auto ex = bootstrap(example_plant(), example_cost(), kUnitBox, cfg, vec({1.0, -1.0}));
  EXPECT_EQ(ex.sequence.size(), 6);
  EXPECT_TRUE(ex.sequence.within(kUnitBox));
  EXPECT_EQ(ex.cycle_start, 0);
  EXPECT_EQ(ex.cycle_index, 0);

  const auto s = bootstrap(scalar_plant(0.5), scalar_cost(), kWide, DmbConfig{4, 2, 1}, scalar(1.0));
  EXPECT_TRUE(s.sequence == solve_ocp(scalar_plant(0.5), scalar_cost(), kWide, 4, scalar(1.0)).useq);

  const auto z = bootstrap(example_plant(), example_cost(), kUnitBox, cfg, vec({1.0, -1.0}), Bootstrap::zeros);
  EXPECT_TRUE(z.sequence.stacked().isZero(0.0));
  // zeros are clamped into boxes that exclude the origin
  const auto shifted = bootstrap(scalar_plant(0.5), scalar_cost(), InputBox(vec({0.2}), vec({1.0})), DmbConfig{4, 2, 1},
                                 scalar(1.0), Bootstrap::zeros);
  EXPECT_EQ(shifted.sequence[0][0], 0.2);
}

TEST(PlanCycle, FirstCycleOnTheExample) {
  const auto cfg = DmbConfig{6, 3, 3};
  const Vector x0 = vec({1.0, -1.0});
  const auto boot = bootstrap(example_plant(), example_cost(), kUnitBox, cfg, x0);
  const auto [plan, next] = plan_cycle(example_plant(), example_cost(), kUnitBox, cfg, boot, x0);
  ASSERT_EQ(plan.applied.size(), 3);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(plan.applied[k], boot.sequence[k]);
    EXPECT_EQ(next.sequence[k], boot.sequence[3 + k]);
  }
  EXPECT_EQ(plan.handover_time, 6);
  EXPECT_EQ(next.cycle_start, 3);
  EXPECT_EQ(next.cycle_index, 1);
  EXPECT_LE((plan.handover_state - rollout(example_plant(), x0, boot.sequence).states.back()).cwiseAbs().maxCoeff(),
            0.0);
  // P = N_B: the input at cycle_start + P + N_B is mu_{N - N_B}(handover)
  const Vector mu = rh_control(example_plant(), example_cost(), kUnitBox, 3, plan.handover_state);
  EXPECT_LE((next.sequence[3] - mu).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(PlanCycle, EquilibriumStaysPut) {
  const auto cfg = DmbConfig{6, 3, 3};
  const DmbState idle{ControlSequence::zeros(6, 1), 0, 0};
  const auto [plan, next] = plan_cycle(example_plant(), example_cost(), kUnitBox, cfg, idle, Vector::Zero(2));
  EXPECT_TRUE(plan.applied.stacked().isZero(0.0));
  EXPECT_TRUE(next.sequence.stacked().isZero(0.0));
}

TEST(PlanCycle, RejectsInfeasibleInheritedSamples) {
  const DmbState bad{scalar_seq({0, 0, 0, 2.0, 0, 0}), 0, 0};
  EXPECT_THROW(plan_cycle(example_plant(), example_cost(), kUnitBox, DmbConfig{6, 3, 3}, bad, vec({1.0, -1.0})),
               ContractViolation);
}

TEST(PlanCycle, PrefixInheritanceAcrossManyCycles) {
  for (const auto cfg : {DmbConfig{6, 3, 3}, DmbConfig{8, 2, 1}, DmbConfig{7, 4, 2}}) {
    Vector x = vec({1.0, -1.0});
    auto state = bootstrap(example_plant(), example_cost(), kUnitBox, cfg, x);
    for (int c = 0; c < 10; ++c) {
      const auto [plan, next] = plan_cycle(example_plant(), example_cost(), kUnitBox, cfg, state, x);
      const int P = cfg.period();
      for (int k = 0; k < cfg.N_B; ++k) {
        ASSERT_TRUE(next.sequence[k] == state.sequence[P + k]) << "cycle " << c;
      }
      EXPECT_TRUE(next.sequence.within(kUnitBox));
      x = rollout(example_plant(), x, plan.applied).states.back();
      state = next;
    }
  }
}

TEST(DmbValue, Examples) {
  const auto cfg = DmbConfig{2, 1, 1};
  EXPECT_NEAR(dmb_value(scalar_plant(0.5), scalar_cost(), kWide, cfg, scalar(1.0), scalar_seq({0.4, 0.0})), 1.25, 1e-12);
  EXPECT_EQ(dmb_value(example_plant(), example_cost(), kUnitBox, DmbConfig{6, 3, 3}, Vector::Zero(2),
                      ControlSequence::zeros(6, 1)),
            0.0);
  const Vector x0 = vec({1.0, -1.0});
  const auto boot = bootstrap(example_plant(), example_cost(), kUnitBox, DmbConfig{6, 3, 3}, x0);
  const double v6 = value_function(example_plant(), example_cost(), kUnitBox, 6, x0);
  EXPECT_GE(dmb_value(example_plant(), example_cost(), kUnitBox, DmbConfig{6, 3, 3}, x0, boot.sequence), v6 - 1e-9);
}

TEST(DmbProperties, BlockedEqualsReducedOnRandomInstances) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3, m = 1 + trial % 2, N = 3 + trial % 6;
    const auto lq = testing::random_stable_lq(rng, n, m);
    const int N_B = 1 + trial % (N - 2);
    const auto cfg = DmbConfig{N, N_B, 1};
    const auto box = InputBox::symmetric(m, 1.0);
    std::vector<Vector> s;
    for (int k = 0; k < N; ++k) {
      Vector u(m);
      for (int j = 0; j < m; ++j) u[j] = unit(rng);
      s.push_back(u);
    }
    const ControlSequence utilde(s, m);
    const Vector x = testing::random_vector(rng, n, 2.0);
    const auto full = solve_blocked_full(lq.plant, lq.cost, box, cfg, x, utilde);
    const auto prefix = utilde.slice(N - N_B, N_B);
    const auto red = solve_reduced(lq.plant, lq.cost, box, cfg, predict_handover(lq.plant, x, prefix));
    const Vector tail = full.useq.stacked().tail(red.useq.stacked().size());
    EXPECT_LE((tail - red.useq.stacked()).cwiseAbs().maxCoeff(), 1e-6) << trial;
    const double delta = blocked_prefix_cost(lq.cost, lq.plant, x, prefix);
    EXPECT_LE(std::abs(full.value - (delta + red.value)), 1e-8 * std::max(1.0, full.value)) << trial;
    EXPECT_NEAR(dmb_value(lq.plant, lq.cost, box, cfg, x, utilde), delta + red.value, 1e-8 * std::max(1.0, full.value));
  }
}

TEST(DmbProperties, BlockingNeverBeatsTheFreeProblem) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3, N = 3 + trial % 6;
    const auto lq = testing::random_stable_lq(rng, n, 1);
    const auto box = InputBox::symmetric(1, 0.5);
    const Vector x = testing::random_vector(rng, n, 2.0);
    std::vector<double> parent;
    for (int k = 0; k < N - 1; ++k) parent.push_back(unit(rng));
    const double vN = value_function(lq.plant, lq.cost, box, N, x);
    double prev = vN;
    for (int N_B = 1; N_B <= N - 1; ++N_B) {
      // utilde whose last N_B samples are parent[0..N_B-1]: nested prefixes of one parent
      std::vector<Vector> s(static_cast<std::size_t>(N - N_B), Vector::Zero(1));
      for (int k = 0; k < N_B; ++k) s.push_back(scalar(parent[static_cast<std::size_t>(k)]));
      const double v = dmb_value(lq.plant, lq.cost, box, DmbConfig{N, N_B, 1}, x, ControlSequence(s, 1));
      EXPECT_LE(vN, v + 1e-9);
      EXPECT_LE(prev, v + 1e-9) << "N_B " << N_B;
      prev = v;
    }
  }
}

TEST(DmbConfig, BootstrapNames) {
  EXPECT_EQ(parse_bootstrap("zeros"), Bootstrap::zeros);
  EXPECT_EQ(parse_bootstrap(to_string(Bootstrap::full_solve)), Bootstrap::full_solve);
  EXPECT_THROW(parse_bootstrap("warm"), ConfigError);
}

}  // namespace
}  // namespace dmbmpc
