#pragma once

#include "dmbmpc/objective.hpp"
#include "dmbmpc/plant.hpp"

#include <random>

namespace dmbmpc::testing {

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    out[i++] = x;
  }
  return out;
}

inline Vector scalar(double x) { return Vector::Constant(1, x); }

// x+ = a x + u, l = q x^2 + r u^2
inline LinearPlant scalar_plant(double a) {
  return LinearPlant(Matrix::Constant(1, 1, a), Matrix::Identity(1, 1), Matrix::Identity(1, 1));
}

inline QuadraticStageCost scalar_cost(double q = 1.0, double r = 1.0) {
  return QuadraticStageCost(Matrix::Constant(1, 1, q), Matrix::Constant(1, 1, r));
}

inline ControlSequence scalar_seq(std::initializer_list<double> v) {
  std::vector<Vector> s;
  for (double x : v) {
    s.push_back(scalar(x));
  }
  return ControlSequence(std::move(s), 1);
}

inline LinearPlant example_plant() {
  Matrix A(2, 2), B(2, 1), C(1, 2);
  A << 0.9, 0.0, 0.6, 0.4;
  B << 0.1, 0.0;
  C << 0.0, 1.0;
  return LinearPlant(A, B, C);
}

inline QuadraticStageCost example_cost() {
  Matrix Q(2, 2);
  Q << 10.0, 0.0, 0.0, 100.0;
  return QuadraticStageCost(Q, Matrix::Identity(1, 1));
}

inline Matrix random_matrix(std::mt19937_64& rng, int r, int c, double sd = 1.0) {
  std::normal_distribution<double> d(0.0, sd);
  Matrix M(r, c);
  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < c; ++k) {
      M(i, k) = d(rng);
    }
  }
  return M;
}

inline Vector random_vector(std::mt19937_64& rng, int n, double sd = 1.0) { return random_matrix(rng, n, 1, sd); }

struct RandomLq {
  LinearPlant plant;
  QuadraticStageCost cost;
};

// Spectral radius scaled to 0.9 so long horizons stay well conditioned.
inline RandomLq random_stable_lq(std::mt19937_64& rng, int n, int m) {
  Matrix A = random_matrix(rng, n, n);
  const double rho = A.eigenvalues().cwiseAbs().maxCoeff();
  if (rho > 0.0) {
    A *= 0.9 / rho;
  }
  const Matrix Mq = random_matrix(rng, n, n);
  const Matrix Mr = random_matrix(rng, m, m);
  return {LinearPlant(A, random_matrix(rng, n, m), Matrix::Identity(n, n)),
          QuadraticStageCost(Mq.transpose() * Mq + 0.1 * Matrix::Identity(n, n),
                             Mr.transpose() * Mr + 0.1 * Matrix::Identity(m, m))};
}

}  // namespace dmbmpc::testing
