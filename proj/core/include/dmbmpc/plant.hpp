#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace dmbmpc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Pure state map x' = f(x, u). Rollouts and the enumeration oracle only see
/// this interface, so they work for any dynamics.
using StateMap = std::function<Vector(const Vector&, const Vector&)>;

/// Discrete-time LTI model x' = A x + B u, y = C x.
class LinearPlant {
public:
  LinearPlant(Matrix A, Matrix B, Matrix C);

  const Matrix& A() const noexcept { return A_; }
  const Matrix& B() const noexcept { return B_; }
  const Matrix& C() const noexcept { return C_; }

  int state_dim() const noexcept { return static_cast<int>(A_.rows()); }
  int input_dim() const noexcept { return static_cast<int>(B_.cols()); }
  int output_dim() const noexcept { return static_cast<int>(C_.rows()); }

  Vector step(const Vector& x, const Vector& u) const;
  Vector output(const Vector& x) const;

  /// Copies the plant into a StateMap closure.
  StateMap as_state_map() const;

private:
  Matrix A_;
  Matrix B_;
  Matrix C_;
};

/// Per-channel input bounds. Infinite bounds are allowed.
class InputBox {
public:
  InputBox(Vector lower, Vector upper);

  static InputBox unbounded(int m);
  static InputBox symmetric(int m, double bound);

  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }
  int dim() const noexcept { return static_cast<int>(lower_.size()); }

  Vector clamp(const Vector& u) const;
  bool contains(const Vector& u, double tol = kMembershipTol) const;

  static constexpr double kMembershipTol = 1e-12;

private:
  Vector lower_;
  Vector upper_;
};

/// Ordered list of input samples, all of the same dimension.
class ControlSequence {
public:
  ControlSequence() = default;
  ControlSequence(std::vector<Vector> samples, int input_dim);
  /// Same as above, additionally checking every sample against `box`.
  ControlSequence(std::vector<Vector> samples, const InputBox& box);

  static ControlSequence zeros(int length, int input_dim);
  /// Splits a stacked (length*m) vector into samples of size m.
  static ControlSequence from_stacked(const Vector& stacked, int input_dim);

  int size() const noexcept { return static_cast<int>(samples_.size()); }
  bool empty() const noexcept { return samples_.empty(); }
  int input_dim() const noexcept { return input_dim_; }

  const Vector& operator[](int k) const { return samples_.at(static_cast<std::size_t>(k)); }
  std::span<const Vector> samples() const noexcept { return samples_; }

  Vector stacked() const;
  /// Samples [begin, begin + count).
  ControlSequence slice(int begin, int count) const;
  ControlSequence concat(const ControlSequence& tail) const;
  bool within(const InputBox& box) const;

  friend bool operator==(const ControlSequence& a, const ControlSequence& b);

private:
  std::vector<Vector> samples_;
  int input_dim_ = 0;
};

/// states[k+1] = f(states[k], inputs[k]); states has one more entry than inputs.
struct Trajectory {
  std::vector<Vector> states;
  ControlSequence inputs;

  int steps() const noexcept { return inputs.size(); }
};

Vector step(const LinearPlant& plant, const Vector& x, const Vector& u);

Trajectory rollout(const LinearPlant& plant, const Vector& x0, const ControlSequence& useq);
Trajectory rollout(const StateMap& f, const Vector& x0, const ControlSequence& useq);

/// Final state of the rollout; x0 itself for an empty sequence.
Vector propagate(const StateMap& f, const Vector& x0, const ControlSequence& useq);

Vector clamp(const InputBox& box, const Vector& u);
bool contains(const InputBox& box, const Vector& u);

/// Checks the rollout invariant componentwise to `tol`.
bool is_consistent(const Trajectory& traj, const StateMap& f, double tol = 1e-12);

}  // namespace dmbmpc
