#pragma once

#include "dmbmpc/bounds.hpp"
#include "dmbmpc/simulator.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace dmbmpc::cli {

inline constexpr double kTableMpc = 15.9134;
inline constexpr double kTableDmb = 16.1334;

const char* tool_version();

nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const GammaEstimate& est);
nlohmann::json summary_json(const SimResult& result, const ExperimentConfig& cfg);

struct SweepPoint {
  MetricKind metric = MetricKind::sqrt_total_cost;
  int T = 0;
  double mpc = 0.0;
  double dmb = 0.0;
  double ratio = 0.0;
  double rel_err_mpc = 0.0;
  double rel_err_dmb = 0.0;
};

struct ReproduceReport {
  std::vector<SweepPoint> sweep;
  SweepPoint best;  ///< smallest max(rel_err_mpc, rel_err_dmb)
  bool matched = false;  ///< best within 2% on both values
  int check_T = 0;
  std::map<MetricKind, double> ratio_at_check_T;
  bool ratios_ok = false;  ///< every metric ratio in [1, 1.05] at check_T
};

/// Runs the comparison once at T_max and evaluates every metric on each
/// prefix T in [T_min, T_max] against the reference cost pair.
ReproduceReport reproduce_example(const ExperimentConfig& cfg, int T_min = 30, int T_max = 150);

nlohmann::json to_json(const ReproduceReport& report);

/// Entry point shared by the executable and the tests. args excludes argv[0].
/// Returns 0 on success, 1 on an invariant violation, 2 on a usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmbmpc::cli
