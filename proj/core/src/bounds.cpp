#include "dmbmpc/bounds.hpp"

#include "dmbmpc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dmbmpc {

namespace {

// Above this exponent (g+1)^{h-2} may overflow; switch to log space.
constexpr int kLogSpaceHorizon = 300;

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ContractViolation("gamma must be a positive finite number");
  }
}

// ratio = g^h / (g+1)^{h-2}
double growth_ratio(double gamma, int h) {
  if (h > kLogSpaceHorizon) {
    return std::exp(h * std::log(gamma) - (h - 2) * std::log1p(gamma));
  }
  return std::pow(gamma, h) / std::pow(gamma + 1.0, h - 2);
}

bool lexicographically_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

double eta(double gamma, int h) {
  require_gamma(gamma);
  if (h < 2) {
    throw AdmissibilityError("eta requires reduced horizon N-N_B >= 2, got " + std::to_string(h));
  }
  if (h > kLogSpaceHorizon) {
    return 1.0 / (1.0 + growth_ratio(gamma, h));
  }
  const double a = std::pow(gamma + 1.0, h - 2);
  return a / (a + std::pow(gamma, h));
}

bool growth_condition_holds(double gamma, int h) {
  require_gamma(gamma);
  if (h > kLogSpaceHorizon) {
    return (h - 2) * std::log1p(gamma) > h * std::log(gamma);
  }
  return std::pow(gamma + 1.0, h - 2) > std::pow(gamma, h);
}

StabilityMargin stability_margin(double gamma, int h) {
  require_gamma(gamma);
  if (h < 2) {
    throw AdmissibilityError("stability margin requires reduced horizon N-N_B >= 2, got " + std::to_string(h));
  }
  if (!growth_condition_holds(gamma, h)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "growth condition (gamma+1)^(h-2) > gamma^h fails for gamma=" << gamma << ", h=" << h;
    if (h <= kLogSpaceHorizon) {
      msg << ": " << std::pow(gamma + 1.0, h - 2) << " <= " << std::pow(gamma, h);
    } else {
      msg << ": log sides " << (h - 2) * std::log1p(gamma) << " <= " << h * std::log(gamma);
    }
    throw AdmissibilityError(msg.str());
  }
  StabilityMargin out;
  if (h > kLogSpaceHorizon) {
    const double r = growth_ratio(gamma, h);
    out.alpha = 1.0 - r;
    out.upsilon = 1.0 / out.alpha;
    out.relative_bound = r / (1.0 - r);
    return out;
  }
  const double a = std::pow(gamma + 1.0, h - 2);
  const double b = std::pow(gamma, h);
  out.alpha = (a - b) / a;
  out.upsilon = a / (a - b);
  out.relative_bound = b / (a - b);
  return out;
}

bool check_first_bound(const DmbConfig& cfg) { return cfg.N_OP <= cfg.N_B && cfg.N_B <= cfg.N - 2; }

double nb_upper_bound(double gamma, int N) {
  require_gamma(gamma);
  const double lg1 = std::log1p(gamma);
  return N - 2.0 * lg1 / (lg1 - std::log(gamma));
}

double overall_bound(double gamma, int N, int N_B, double delta, double v_inf) {
  if (!(v_inf > 0.0)) {
    throw ContractViolation("overall_bound: v_inf must be positive");
  }
  if (delta < 0.0) {
    throw ContractViolation("overall_bound: delta must be nonnegative");
  }
  return stability_margin(gamma, N - N_B).relative_bound + delta / v_inf;
}

GammaEstimate estimate_gamma(const ValueOracle& oracle, int N, const std::vector<Vector>& sample_states) {
  if (N < 2) {
    throw ContractViolation("estimate_gamma: horizon must be >= 2");
  }
  if (sample_states.empty()) {
    throw ContractViolation("estimate_gamma: empty sample set");
  }
  constexpr double kDenominatorFloor = 1e-12;

  GammaEstimate est;
  est.horizon_checked = N;
  est.gamma = -std::numeric_limits<double>::infinity();
  for (const auto& x : sample_states) {
    const double v1 = oracle.value(1, x);
    if (v1 < kDenominatorFloor) {
      ++est.skipped;
      continue;
    }
    double worst = oracle.value(2, x) / v1 - 1.0;
    bool skip = false;
    for (int k = 2; k <= N && !skip; ++k) {
      const double l = oracle.stage_cost(x, oracle.first_input(k, x));
      if (l < kDenominatorFloor) {
        skip = true;
        break;
      }
      worst = std::max(worst, oracle.value(k, x) / l - 1.0);
    }
    if (skip) {
      ++est.skipped;
      continue;
    }
    ++est.samples;
    if (worst > est.gamma || (worst == est.gamma && lexicographically_less(x, est.worst_state))) {
      est.gamma = worst;
      est.worst_state = x;
    }
  }
  if (est.samples == 0) {
    throw EstimationError("estimate_gamma: all " + std::to_string(est.skipped) +
                          " sample states have vanishing denominators");
  }
  return est;
}

GammaEstimate estimate_gamma(const LinearPlant& plant, const QuadraticStageCost& cost, const InputBox& box, int N,
                             const std::vector<Vector>& sample_states, const SolverOptions& opts) {
  ValueOracle oracle;
  oracle.value = [&](int k, const Vector& x) { return value_function(plant, cost, box, k, x, opts); };
  oracle.first_input = [&](int k, const Vector& x) { return rh_control(plant, cost, box, k, x, opts); };
  oracle.stage_cost = [&cost](const Vector& x, const Vector& u) { return cost(x, u); };
  return estimate_gamma(oracle, N, sample_states);
}

std::vector<Vector> state_grid(int n, double radius, int points) {
  if (n < 1 || points < 1) {
    throw ContractViolation("state_grid: need n >= 1 and points >= 1");
  }
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    axis[static_cast<std::size_t>(i)] = points == 1 ? 0.0 : -radius + 2.0 * radius * i / (points - 1);
  }
  std::vector<Vector> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Vector x(n);
    for (int d = 0; d < n; ++d) {
      x[d] = axis[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
    }
    out.push_back(std::move(x));
    int d = n - 1;
    while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == points) {
      idx[static_cast<std::size_t>(d)] = 0;
      --d;
    }
    if (d < 0) {
      break;
    }
  }
  return out;
}

BoundReport make_bound_report(double gamma, const DmbConfig& cfg, std::optional<double> delta,
                              std::optional<double> v_inf, bool vinf_converged) {
  require_gamma(gamma);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  BoundReport r;
  r.gamma = gamma;
  r.N = cfg.N;
  r.N_B = cfg.N_B;
  r.first_bound_ok = check_first_bound(cfg);
  r.nb_upper = nb_upper_bound(gamma, cfg.N);
  const int h = cfg.N - cfg.N_B;
  r.eta = h >= 2 ? eta(gamma, h) : nan;
  r.assumption_ok = h >= 2 && growth_condition_holds(gamma, h);
  if (r.assumption_ok) {
    const auto margin = stability_margin(gamma, h);
    r.alpha = margin.alpha;
    r.upsilon = margin.upsilon;
    r.relative_bound = margin.relative_bound;
  } else {
    r.alpha = r.upsilon = r.relative_bound = nan;
  }
  if (delta && v_inf && *v_inf > 0.0) {
    r.delta_over_vinf = *delta / *v_inf;
    r.vinf_truncated = !vinf_converged;
    if (r.assumption_ok) {
      r.overall_bound = r.relative_bound + *r.delta_over_vinf;
    }
  }
  return r;
}

}  // namespace dmbmpc
