#include "random_instances.hpp"

#include "dmbmpc/objective.hpp"

#include <algorithm>
#include <cmath>

namespace dmbmpc::cli {

namespace {

Matrix gaussian(std::mt19937_64& rng, int rows, int cols, double sd) {
  std::normal_distribution<double> dist(0.0, sd);
  Matrix M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) {
      M(i, k) = dist(rng);
    }
  }
  return M;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

RandomLqInstance random_lq_instance(std::mt19937_64& rng) {
  const int n = uniform_int(rng, 1, 3);
  const int m = uniform_int(rng, 1, 2);
  const int N = uniform_int(rng, 3, 8);
  const int N_B = uniform_int(rng, 1, N - 2);

  const Matrix A = gaussian(rng, n, n, 0.6);
  const Matrix B = gaussian(rng, n, m, 1.0);
  const Matrix Mq = gaussian(rng, n, n, 1.0);
  const Matrix Mr = gaussian(rng, m, m, 1.0);
  const Matrix Q = Mq.transpose() * Mq + 0.1 * Matrix::Identity(n, n);
  const Matrix R = Mr.transpose() * Mr + 0.1 * Matrix::Identity(m, m);

  std::uniform_real_distribution<double> width(0.3, 2.0);
  Vector lo(m), hi(m);
  for (int j = 0; j < m; ++j) {
    lo[j] = -width(rng);
    hi[j] = width(rng);
  }
  InputBox box(lo, hi);

  const Vector x0 = 2.0 * gaussian(rng, n, 1, 1.0);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vector> samples;
  samples.reserve(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    Vector u(m);
    for (int j = 0; j < m; ++j) {
      u[j] = lo[j] + unit(rng) * (hi[j] - lo[j]);
    }
    samples.push_back(std::move(u));
  }

  return RandomLqInstance{LinearPlant(A, B, Matrix::Identity(n, n)), QuadraticStageCost(Q, R), box,
                          DmbConfig{N, N_B, 1}, x0, ControlSequence(std::move(samples), m)};
}

EquivalenceCheck check_blocked_equivalence(const RandomLqInstance& inst, double tail_tol, double value_tol) {
  const auto& cfg = inst.horizon;
  const OcpSolution full = solve_blocked_full(inst.plant, inst.cost, inst.box, cfg, inst.x0, inst.utilde);

  const ControlSequence prefix = inst.utilde.slice(cfg.N - cfg.N_B, cfg.N_B);
  const Vector handover = predict_handover(inst.plant, inst.x0, prefix);
  const OcpSolution reduced = solve_reduced(inst.plant, inst.cost, inst.box, cfg, handover);
  const double delta = blocked_prefix_cost(inst.cost, inst.plant, inst.x0, prefix);

  EquivalenceCheck out;
  const Vector tail = full.useq.stacked().tail(reduced.useq.stacked().size());
  out.max_tail_diff = (tail - reduced.useq.stacked()).cwiseAbs().maxCoeff();
  out.value_rel_err = std::abs(full.value - (delta + reduced.value)) / std::max(1.0, std::abs(full.value));
  out.passed = out.max_tail_diff <= tail_tol && out.value_rel_err <= value_tol;
  return out;
}

}  // namespace dmbmpc::cli
