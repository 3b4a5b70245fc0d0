#include "config.hpp"

#include "dmbmpc/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

namespace dmbmpc::cli {

using nlohmann::json;

namespace {

const json& child(const json& parent, const std::string& key, const std::string& path) {
  if (!parent.is_object() || !parent.contains(key)) {
    throw ConfigError(path, "missing required key");
  }
  return parent.at(key);
}

double number(const json& j, const std::string& path) {
  if (j.is_number()) {
    return j.get<double>();
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") {
      return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
      return -std::numeric_limits<double>::infinity();
    }
  }
  throw ConfigError(path, "expected a number");
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) {
    throw ConfigError(path, "expected an integer");
  }
  return j.get<int>();
}

Matrix matrix(const json& j, const std::string& path) {
  if (j.is_number()) {
    return Matrix::Constant(1, 1, j.get<double>());
  }
  if (!j.is_array() || j.empty()) {
    throw ConfigError(path, "expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j.front().is_array()) {
    // A flat list is read as a column vector.
    Matrix out(rows, 1);
    for (Eigen::Index i = 0; i < rows; ++i) {
      out(i, 0) = number(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
    }
    return out;
  }
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(path, "ragged matrix: row " + std::to_string(i) + " has a different length");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      out(i, k) = number(row[static_cast<std::size_t>(k)], path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return out;
}

Vector vector(const json& j, const std::string& path, int expected) {
  if (j.is_number() || j.is_string()) {
    return Vector::Constant(expected, number(j, path));
  }
  if (!j.is_array()) {
    throw ConfigError(path, "expected an array");
  }
  if (static_cast<int>(j.size()) != expected) {
    throw ConfigError(path, "dimension mismatch: expected " + std::to_string(expected) + " entries, got " +
                                std::to_string(j.size()));
  }
  Vector out(expected);
  for (int i = 0; i < expected; ++i) {
    out[i] = number(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

json number_to_json(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  return v;
}

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) {
      row.push_back(number_to_json(M(i, k)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(number_to_json(v[i]));
  }
  return out;
}

template <typename Fn>
auto rethrow_as_config(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

ExperimentConfig parse_config_json(const json& doc) {
  // A run manifest carries the resolved config under "config".
  if (doc.is_object() && !doc.contains("plant") && doc.contains("config")) {
    return parse_config_json(doc.at("config"));
  }
  if (!doc.is_object()) {
    throw ConfigError("", "config root must be an object");
  }

  const json& plant_j = child(doc, "plant", "plant");
  const Matrix A = matrix(child(plant_j, "A", "plant.A"), "plant.A");
  const Matrix B = matrix(child(plant_j, "B", "plant.B"), "plant.B");
  const Matrix C = plant_j.contains("C") ? matrix(plant_j.at("C"), "plant.C") : Matrix::Identity(A.rows(), A.cols());
  if (A.rows() != A.cols()) {
    throw ConfigError("plant.A", "must be square");
  }
  if (B.rows() != A.rows()) {
    throw ConfigError("plant.B", "dimension mismatch: expected " + std::to_string(A.rows()) + " rows");
  }
  if (C.cols() != A.cols()) {
    throw ConfigError("plant.C", "dimension mismatch: expected " + std::to_string(A.cols()) + " columns");
  }
  LinearPlant plant = rethrow_as_config("plant", [&] { return LinearPlant(A, B, C); });
  const int n = plant.state_dim();
  const int m = plant.input_dim();

  const json& cost_j = child(doc, "cost", "cost");
  const Matrix Q = matrix(child(cost_j, "Q", "cost.Q"), "cost.Q");
  const Matrix R = matrix(child(cost_j, "R", "cost.R"), "cost.R");
  if (Q.rows() != n || Q.cols() != n) {
    throw ConfigError("cost.Q", "dimension mismatch: expected " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (R.rows() != m || R.cols() != m) {
    throw ConfigError("cost.R", "dimension mismatch: expected " + std::to_string(m) + "x" + std::to_string(m));
  }
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + Q.cwiseAbs().maxCoeff())) {
    throw ConfigError("cost.Q", "Q must be symmetric positive semidefinite (Q is not symmetric)");
  }
  if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + R.cwiseAbs().maxCoeff())) {
    throw ConfigError("cost.R", "R must be symmetric positive definite (R is not symmetric)");
  }
  Vector target = Vector::Zero(n);
  if (cost_j.contains("target")) {
    target = vector(cost_j.at("target"), "cost.target", n);
  }
  QuadraticStageCost cost = rethrow_as_config("cost", [&] { return QuadraticStageCost(Q, R, target); });

  const json& con_j = child(doc, "constraints", "constraints");
  const Vector u_min = vector(child(con_j, "u_min", "constraints.u_min"), "constraints.u_min", m);
  const Vector u_max = vector(child(con_j, "u_max", "constraints.u_max"), "constraints.u_max", m);
  InputBox box = rethrow_as_config("constraints", [&] { return InputBox(u_min, u_max); });

  const json& hor_j = child(doc, "horizon", "horizon");
  DmbConfig horizon{integer(child(hor_j, "N", "horizon.N"), "horizon.N"),
                    integer(child(hor_j, "N_B", "horizon.N_B"), "horizon.N_B"),
                    integer(child(hor_j, "N_OP", "horizon.N_OP"), "horizon.N_OP")};
  try {
    validate(horizon);
  } catch (const AdmissibilityError& e) {
    std::string key = "horizon";
    const std::string msg = e.what();
    if (msg.find("N_B <= N-2") != std::string::npos || msg.find("N_B < N") != std::string::npos) {
      key = "horizon.N_B";
    } else if (msg.find("N_OP") != std::string::npos) {
      key = "horizon.N_OP";
    } else if (msg.find("N >= 1") != std::string::npos) {
      key = "horizon.N";
    }
    throw ConfigError(key, msg + " (first bound N_OP <= N_B <= N-2)");
  }

  const json& sim_j = child(doc, "sim", "sim");
  const Vector x0 = vector(child(sim_j, "x0", "sim.x0"), "sim.x0", n);
  const int T = sim_j.contains("T") ? integer(sim_j.at("T"), "sim.T") : 100;
  if (T < horizon.N) {
    throw ConfigError("sim.T", "T must be >= N");
  }
  MetricKind metric = MetricKind::sqrt_total_cost;
  if (sim_j.contains("metric")) {
    if (!sim_j.at("metric").is_string()) {
      throw ConfigError("sim.metric", "expected a string");
    }
    metric = parse_metric_kind(sim_j.at("metric").get<std::string>());
  }

  Bootstrap boot = Bootstrap::full_solve;
  if (doc.contains("dmb") && doc.at("dmb").contains("bootstrap")) {
    const auto& b = doc.at("dmb").at("bootstrap");
    if (!b.is_string()) {
      throw ConfigError("dmb.bootstrap", "expected a string");
    }
    boot = parse_bootstrap(b.get<std::string>());
  }

  SolverOptions solver;
  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    if (s.contains("tol")) {
      solver.tol = number(s.at("tol"), "solver.tol");
      if (!(solver.tol > 0.0)) {
        throw ConfigError("solver.tol", "must be positive");
      }
    }
    if (s.contains("max_iter")) {
      solver.max_iter = integer(s.at("max_iter"), "solver.max_iter");
      if (solver.max_iter < 1) {
        throw ConfigError("solver.max_iter", "must be >= 1");
      }
    }
  }

  return ExperimentConfig{std::move(plant), std::move(cost), std::move(box), horizon, x0, T, metric, boot, solver};
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("", "cannot open config file " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "malformed JSON in " + path.string() + ": " + e.what());
  }
  return parse_config_json(doc);
}

json emit_config(const ExperimentConfig& cfg) {
  json doc;
  doc["plant"] = {{"A", matrix_to_json(cfg.plant.A())},
                  {"B", matrix_to_json(cfg.plant.B())},
                  {"C", matrix_to_json(cfg.plant.C())}};
  doc["cost"] = {{"Q", matrix_to_json(cfg.cost.Q())},
                 {"R", matrix_to_json(cfg.cost.R())},
                 {"target", vector_to_json(cfg.cost.target())}};
  doc["constraints"] = {{"u_min", vector_to_json(cfg.box.lower())}, {"u_max", vector_to_json(cfg.box.upper())}};
  doc["horizon"] = {{"N", cfg.horizon.N}, {"N_B", cfg.horizon.N_B}, {"N_OP", cfg.horizon.N_OP}};
  doc["sim"] = {{"x0", vector_to_json(cfg.x0)}, {"T", cfg.T}, {"metric", std::string(to_string(cfg.metric))}};
  doc["dmb"] = {{"bootstrap", std::string(to_string(cfg.bootstrap))}};
  doc["solver"] = {{"tol", cfg.solver.tol}, {"max_iter", cfg.solver.max_iter}};
  return doc;
}

}  // namespace dmbmpc::cli
