#include "fixtures.hpp"

#include "dmbmpc/errors.hpp"
#include "dmbmpc/ocp_solver.hpp"

#include <gtest/gtest.h>

namespace dmbmpc {
namespace {

using testing::scalar;
using testing::scalar_cost;
using testing::scalar_plant;
using testing::vec;

CondensedProblem box_qp(const Matrix& H, const Vector& g, double bound) {
  CondensedProblem p;
  p.H = H;
  p.g = g;
  p.c = 0.0;
  p.lower = Vector::Constant(g.size(), -bound);
  p.upper = Vector::Constant(g.size(), bound);
  p.horizon = static_cast<int>(g.size());
  p.input_dim = 1;
  return p;
}

TEST(Condense, ScalarIntegratorByHand) {
  // J2 = 1 + u0^2 + (1 + u0)^2 + u1^2
  const auto p = condense(scalar_plant(1.0), scalar_cost(), InputBox::unbounded(1), 2, scalar(1.0));
  Matrix H(2, 2);
  H << 4, 0, 0, 2;
  EXPECT_TRUE(p.H.isApprox(H, 1e-15));
  EXPECT_TRUE(p.g.isApprox(vec({2.0, 0.0}), 1e-15));
  EXPECT_DOUBLE_EQ(p.c, 2.0);
}

TEST(Condense, HomogeneousAtOrigin) {
  const auto p = condense(testing::example_plant(), testing::example_cost(), InputBox::symmetric(1, 1.0), 6,
                          Vector::Zero(2));
  EXPECT_TRUE(p.g.isZero(0.0));
  EXPECT_EQ(p.c, 0.0);
}

TEST(Condense, SingleStage) {
  const Vector x0 = vec({1.0, -1.0});
  const auto cost = testing::example_cost();
  const auto p = condense(testing::example_plant(), cost, InputBox::symmetric(1, 1.0), 1, x0);
  EXPECT_TRUE(p.H.isApprox(2.0 * cost.R(), 1e-15));
  EXPECT_TRUE(p.g.isZero(0.0));
  EXPECT_DOUBLE_EQ(p.c, x0.dot(cost.Q() * x0));
}

TEST(Condense, ObjectiveMatchesHorizonCost) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto lq = testing::random_stable_lq(rng, 1 + trial % 3, 1 + trial % 2);
    const int N = 1 + trial % 8;
    const int m = lq.plant.input_dim();
    const Vector x0 = testing::random_vector(rng, lq.plant.state_dim());
    const auto p = condense(lq.plant, lq.cost, InputBox::unbounded(m), N, x0);
    const Vector u = testing::random_vector(rng, N * m);
    const double direct = horizon_cost(lq.cost, lq.plant, x0, ControlSequence::from_stacked(u, m));
    EXPECT_NEAR(p.objective(u), direct, 1e-10 * std::max(1.0, direct));
  }
}

TEST(Condense, EmptyHorizonRejected) {
  EXPECT_THROW(condense(scalar_plant(1.0), scalar_cost(), InputBox::unbounded(1), 0, scalar(1.0)), ContractViolation);
}

TEST(BoxQp, Examples) {
  const auto interior = solve_box_qp(box_qp(Matrix::Constant(1, 1, 2.0), vec({0.0}), 1.0));
  EXPECT_NEAR(interior.useq[0][0], 0.0, 1e-12);
  EXPECT_NEAR(interior.value, 0.0, 1e-12);

  const auto lower = solve_box_qp(box_qp(Matrix::Constant(1, 1, 2.0), vec({2.0}), 1.0));
  EXPECT_NEAR(lower.useq[0][0], -1.0, 1e-12);
  EXPECT_NEAR(lower.value, -1.0, 1e-12);

  const auto sep = solve_box_qp(box_qp(2.0 * Matrix::Identity(2, 2), vec({-4.0, 1.0}), 1.0));
  EXPECT_NEAR(sep.useq[0][0], 1.0, 1e-12);
  EXPECT_NEAR(sep.useq[1][0], -0.5, 1e-12);
  EXPECT_NEAR(sep.value, -3.25, 1e-12);
  EXPECT_EQ(sep.status, SolverStatus::converged);
}

TEST(BoxQp, RejectsIndefiniteHessian) {
  Matrix H(2, 2);
  H << 1, 2, 2, 1;
  EXPECT_THROW(solve_box_qp(box_qp(H, vec({0.0, 0.0}), 1.0)), SolverError);
}

TEST(BoxQp, ReportsIterationLimit) {
  // Clamped unconstrained start is (1, -1); the optimum is (1, -0.495).
  Matrix H(2, 2);
  H << 2.0, 1.99, 1.99, 2.0;
  SolverOptions opts;
  opts.max_iter = 1;
  const auto sol = solve_box_qp(box_qp(H, vec({-3.0, -1.0}), 1.0), opts);
  EXPECT_EQ(sol.status, SolverStatus::iteration_limit);
  EXPECT_GT(sol.kkt_residual, opts.tol);
  const auto full = solve_box_qp(box_qp(H, vec({-3.0, -1.0}), 1.0));
  EXPECT_EQ(full.status, SolverStatus::converged);
  EXPECT_NEAR(full.useq[1][0], -0.495, 1e-9);
}

TEST(SolveOcp, ScalarExamples) {
  const auto wide = solve_ocp(scalar_plant(0.5), scalar_cost(), InputBox::symmetric(1, 10.0), 2, scalar(1.0));
  EXPECT_NEAR(wide.useq[0][0], -0.25, 1e-9);
  EXPECT_NEAR(wide.useq[1][0], 0.0, 1e-9);
  EXPECT_NEAR(wide.value, 1.125, 1e-12);

  const auto tight = solve_ocp(scalar_plant(1.0), scalar_cost(), InputBox::symmetric(1, 0.25), 2, scalar(1.0));
  EXPECT_NEAR(tight.useq[0][0], -0.25, 1e-12);
  EXPECT_NEAR(tight.useq[1][0], 0.0, 1e-9);
  EXPECT_NEAR(tight.value, 1.625, 1e-12);

  const auto target = solve_ocp(testing::example_plant(), testing::example_cost(), InputBox::symmetric(1, 1.0), 6,
                                Vector::Zero(2));
  EXPECT_TRUE(target.useq.stacked().isZero(0.0));
  EXPECT_EQ(target.value, 0.0);
}

TEST(ValueFunction, Examples) {
  const auto wide = InputBox::symmetric(1, 10.0);
  EXPECT_NEAR(value_function(scalar_plant(0.5), scalar_cost(), wide, 2, scalar(1.0)), 1.125, 1e-12);
  for (int N = 0; N <= 6; ++N) {
    EXPECT_EQ(value_function(testing::example_plant(), testing::example_cost(), InputBox::symmetric(1, 1.0), N,
                             Vector::Zero(2)),
              0.0);
  }
  const Vector x = vec({0.3, -0.7});
  const auto cost = testing::example_cost();
  EXPECT_NEAR(value_function(testing::example_plant(), cost, InputBox::symmetric(1, 1.0), 1, x), x.dot(cost.Q() * x),
              1e-12);
  EXPECT_EQ(value_function(scalar_plant(0.5), scalar_cost(), wide, 0, scalar(3.0)), 0.0);
}

TEST(RhControl, Examples) {
  EXPECT_NEAR(rh_control(scalar_plant(0.5), scalar_cost(), InputBox::symmetric(1, 10.0), 2, scalar(1.0))[0], -0.25,
              1e-9);
  EXPECT_EQ(rh_control(scalar_plant(0.5), scalar_cost(), InputBox::symmetric(1, 10.0), 4, scalar(0.0))[0], 0.0);
  EXPECT_NEAR(rh_control(scalar_plant(0.5), scalar_cost(), InputBox::symmetric(1, 0.1), 2, scalar(1.0))[0], -0.1,
              1e-12);
}

TEST(SolverProperties, UnconstrainedMatchesBatchLeastSquares) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3, m = 1 + (trial / 3) % 2, N = 1 + trial % 8;
    const auto lq = testing::random_stable_lq(rng, n, m);
    const Vector x0 = testing::random_vector(rng, n, 2.0);
    const auto box = InputBox::unbounded(m);
    const auto prob = condense(lq.plant, lq.cost, box, N, x0);
    const Vector batch = -prob.H.ldlt().solve(prob.g);
    const auto sol = solve_ocp(lq.plant, lq.cost, box, N, x0);
    EXPECT_LE((sol.useq.stacked() - batch).cwiseAbs().maxCoeff(), 1e-8) << "trial " << trial;
  }
}

TEST(SolverProperties, ConstrainedSolutionsSatisfyKkt) {
  std::mt19937_64 rng(33);
  int active = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3, m = 1 + (trial / 3) % 2, N = 2 + trial % 7;
    const auto lq = testing::random_stable_lq(rng, n, m);
    const Vector x0 = testing::random_vector(rng, n, 3.0);
    const auto box = InputBox::symmetric(m, 0.3);
    const auto prob = condense(lq.plant, lq.cost, box, N, x0);
    const auto sol = solve_box_qp(prob);
    EXPECT_EQ(sol.status, SolverStatus::converged);
    EXPECT_TRUE(satisfies_kkt(prob, sol.useq.stacked(), 1e-9)) << "trial " << trial;
    EXPECT_TRUE(sol.useq.within(box));
    active += (sol.useq.stacked().cwiseAbs().array() >= 0.3).any() ? 1 : 0;
  }
  EXPECT_GT(active, 10);  // the bounds actually bind on a good share of the instances
}

TEST(SolverProperties, BellmanConsistency) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3, m = 1 + trial % 2, N = 2 + trial % 6;
    const auto lq = testing::random_stable_lq(rng, n, m);
    const Vector x = testing::random_vector(rng, n, 2.0);
    const auto box = InputBox::symmetric(m, 0.5);
    const auto sol = solve_ocp(lq.plant, lq.cost, box, N, x);
    const Vector u0 = sol.useq[0];
    const double rhs = stage_cost(lq.cost, x, u0) + value_function(lq.plant, lq.cost, box, N - 1, step(lq.plant, x, u0));
    EXPECT_NEAR(sol.value, rhs, 5e-7 * std::max(1.0, sol.value));
  }
}

TEST(SolverProperties, ValueNondecreasingInHorizon) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 15; ++trial) {
    const auto lq = testing::random_stable_lq(rng, 1 + trial % 3, 1 + trial % 2);
    const Vector x = testing::random_vector(rng, lq.plant.state_dim(), 2.0);
    const auto box = InputBox::symmetric(lq.plant.input_dim(), 0.5);
    double prev = 0.0;
    for (int N = 1; N <= 10; ++N) {
      const double v = value_function(lq.plant, lq.cost, box, N, x);
      EXPECT_GE(v, prev - 1e-9);
      prev = v;
    }
  }
}

TEST(SolverProperties, Deterministic) {
  const auto a = solve_ocp(testing::example_plant(), testing::example_cost(), InputBox::symmetric(1, 1.0), 6,
                           vec({1.0, -1.0}));
  const auto b = solve_ocp(testing::example_plant(), testing::example_cost(), InputBox::symmetric(1, 1.0), 6,
                           vec({1.0, -1.0}));
  EXPECT_TRUE(a.useq == b.useq);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SolverProperties, PowerIterationBoundsSpectrum) {
  std::mt19937_64 rng(36);
  const Matrix M = testing::random_matrix(rng, 6, 6);
  const Matrix H = M.transpose() * M + Matrix::Identity(6, 6);
  const double exact = Eigen::SelfAdjointEigenSolver<Matrix>(H).eigenvalues().maxCoeff();
  EXPECT_NEAR(largest_eigenvalue(H), exact, 1e-6 * exact);
}

}  // namespace
}  // namespace dmbmpc
