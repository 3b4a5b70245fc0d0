#include "dmbmpc/plant.hpp"

#include "dmbmpc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dmbmpc {

namespace {

void require_dim(const Vector& v, int expected, const char* what) {
  if (v.size() != expected) {
    throw ContractViolation(std::string(what) + ": expected dimension " + std::to_string(expected) +
                            ", got " + std::to_string(v.size()));
  }
}

}  // namespace

LinearPlant::LinearPlant(Matrix A, Matrix B, Matrix C) : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)) {
  if (A_.rows() == 0 || A_.rows() != A_.cols()) {
    throw ContractViolation("LinearPlant: A must be square and nonempty");
  }
  if (B_.rows() != A_.rows() || B_.cols() == 0) {
    throw ContractViolation("LinearPlant: B must have n rows and at least one column");
  }
  if (C_.cols() != A_.cols()) {
    throw ContractViolation("LinearPlant: C must have n columns");
  }
  if (!A_.allFinite() || !B_.allFinite() || !C_.allFinite()) {
    throw ContractViolation("LinearPlant: matrix entries must be finite");
  }
}

Vector LinearPlant::step(const Vector& x, const Vector& u) const {
  require_dim(x, state_dim(), "step: state");
  require_dim(u, input_dim(), "step: input");
  return A_ * x + B_ * u;
}

Vector LinearPlant::output(const Vector& x) const {
  require_dim(x, state_dim(), "output: state");
  return C_ * x;
}

StateMap LinearPlant::as_state_map() const {
  return [plant = *this](const Vector& x, const Vector& u) { return plant.step(x, u); };
}

InputBox::InputBox(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0) {
    throw ContractViolation("InputBox: lower and upper must have the same nonzero length");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (std::isnan(lower_[i]) || std::isnan(upper_[i])) {
      throw ContractViolation("InputBox: NaN bound on channel " + std::to_string(i));
    }
    if (lower_[i] > upper_[i]) {
      throw ContractViolation("InputBox: lower > upper on channel " + std::to_string(i));
    }
  }
}

InputBox InputBox::unbounded(int m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {Vector::Constant(m, -inf), Vector::Constant(m, inf)};
}

InputBox InputBox::symmetric(int m, double bound) {
  return {Vector::Constant(m, -bound), Vector::Constant(m, bound)};
}

Vector InputBox::clamp(const Vector& u) const {
  require_dim(u, dim(), "clamp");
  return u.cwiseMax(lower_).cwiseMin(upper_);
}

bool InputBox::contains(const Vector& u, double tol) const {
  require_dim(u, dim(), "contains");
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(u[i] >= lower_[i] - tol && u[i] <= upper_[i] + tol)) {
      return false;
    }
  }
  return true;
}

ControlSequence::ControlSequence(std::vector<Vector> samples, int input_dim)
    : samples_(std::move(samples)), input_dim_(input_dim) {
  if (input_dim_ <= 0) {
    throw ContractViolation("ControlSequence: input dimension must be positive");
  }
  for (const auto& u : samples_) {
    require_dim(u, input_dim_, "ControlSequence sample");
  }
}

ControlSequence::ControlSequence(std::vector<Vector> samples, const InputBox& box)
    : ControlSequence(std::move(samples), box.dim()) {
  for (int k = 0; k < size(); ++k) {
    if (!box.contains(samples_[static_cast<std::size_t>(k)])) {
      throw ContractViolation("ControlSequence: sample " + std::to_string(k) + " outside the input box");
    }
  }
}

ControlSequence ControlSequence::zeros(int length, int input_dim) {
  if (length < 0) {
    throw ContractViolation("ControlSequence::zeros: negative length");
  }
  return {std::vector<Vector>(static_cast<std::size_t>(length), Vector::Zero(input_dim)), input_dim};
}

ControlSequence ControlSequence::from_stacked(const Vector& stacked, int input_dim) {
  if (input_dim <= 0 || stacked.size() % input_dim != 0) {
    throw ContractViolation("ControlSequence::from_stacked: length not a multiple of the input dimension");
  }
  std::vector<Vector> samples;
  const auto len = stacked.size() / input_dim;
  samples.reserve(static_cast<std::size_t>(len));
  for (Eigen::Index k = 0; k < len; ++k) {
    samples.emplace_back(stacked.segment(k * input_dim, input_dim));
  }
  return {std::move(samples), input_dim};
}

Vector ControlSequence::stacked() const {
  Vector out(static_cast<Eigen::Index>(samples_.size()) * input_dim_);
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    out.segment(static_cast<Eigen::Index>(k) * input_dim_, input_dim_) = samples_[k];
  }
  return out;
}

ControlSequence ControlSequence::slice(int begin, int count) const {
  if (begin < 0 || count < 0 || begin + count > size()) {
    throw ContractViolation("ControlSequence::slice: range [" + std::to_string(begin) + ", " +
                            std::to_string(begin + count) + ") out of bounds for length " +
                            std::to_string(size()));
  }
  return {std::vector<Vector>(samples_.begin() + begin, samples_.begin() + begin + count), input_dim_};
}

ControlSequence ControlSequence::concat(const ControlSequence& tail) const {
  if (!tail.empty() && !empty() && tail.input_dim_ != input_dim_) {
    throw ContractViolation("ControlSequence::concat: input dimension mismatch");
  }
  std::vector<Vector> out = samples_;
  out.insert(out.end(), tail.samples_.begin(), tail.samples_.end());
  return {std::move(out), empty() ? tail.input_dim_ : input_dim_};
}

bool ControlSequence::within(const InputBox& box) const {
  return std::all_of(samples_.begin(), samples_.end(), [&](const Vector& u) { return box.contains(u); });
}

bool operator==(const ControlSequence& a, const ControlSequence& b) {
  if (a.input_dim_ != b.input_dim_ || a.samples_.size() != b.samples_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.samples_.size(); ++k) {
    if (a.samples_[k] != b.samples_[k]) {
      return false;
    }
  }
  return true;
}

Vector step(const LinearPlant& plant, const Vector& x, const Vector& u) { return plant.step(x, u); }

Trajectory rollout(const StateMap& f, const Vector& x0, const ControlSequence& useq) {
  if (useq.empty()) {
    throw ContractViolation("rollout: empty control sequence");
  }
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(useq.size()) + 1);
  traj.states.push_back(x0);
  for (const auto& u : useq.samples()) {
    traj.states.push_back(f(traj.states.back(), u));
  }
  traj.inputs = useq;
  return traj;
}

Trajectory rollout(const LinearPlant& plant, const Vector& x0, const ControlSequence& useq) {
  if (x0.size() != plant.state_dim()) {
    throw ContractViolation("rollout: initial state dimension mismatch");
  }
  return rollout([&plant](const Vector& x, const Vector& u) { return plant.step(x, u); }, x0, useq);
}

Vector propagate(const StateMap& f, const Vector& x0, const ControlSequence& useq) {
  Vector x = x0;
  for (const auto& u : useq.samples()) {
    x = f(x, u);
  }
  return x;
}

Vector clamp(const InputBox& box, const Vector& u) { return box.clamp(u); }

bool contains(const InputBox& box, const Vector& u) { return box.contains(u); }

bool is_consistent(const Trajectory& traj, const StateMap& f, double tol) {
  if (traj.states.size() != static_cast<std::size_t>(traj.inputs.size()) + 1) {
    return false;
  }
  for (int k = 0; k < traj.inputs.size(); ++k) {
    const Vector next = f(traj.states[static_cast<std::size_t>(k)], traj.inputs[k]);
    if ((next - traj.states[static_cast<std::size_t>(k) + 1]).cwiseAbs().maxCoeff() > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace dmbmpc
