/*
 Copyright 2026 The lqgsi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "lqgsi/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lqgsi/error.hpp"

namespace lqgsi::io {

namespace {

constexpr double kAsymmetryTol = 1e-9;

[[noreturn]] void field_error(const std::string& source, const std::string& field,
                              const std::string& what) {
  throw InvalidModel(source + ": field '" + field + "': " + what);
}

bool is_matrix_literal(const json& j) {
  return j.is_number() || (j.is_array() && (j.empty() || j.front().is_array()));
}

Mat parse_matrix(const json& j, const std::string& source, const std::string& field) {
  if (j.is_number()) {
    Mat X(1, 1);
    X(0, 0) = j.get<double>();
    return X;
  }
  if (!j.is_array()) field_error(source, field, "expected a matrix (nested array)");
  if (j.empty()) return Mat(0, 0);
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j.front().is_array()) {
    field_error(source, field, "expected rows as arrays, e.g. [[1, 0], [0, 1]]");
  }
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Mat X(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      field_error(source, field,
                  "row " + std::to_string(r) + " has " +
                      (row.is_array() ? std::to_string(row.size()) : std::string("no")) +
                      " entries, expected " + std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        field_error(source, field,
                    "entry (" + std::to_string(r) + ", " + std::to_string(c) + ") is not a number");
      }
      X(r, c) = v.get<double>();
    }
  }
  return X;
}

/// A single matrix, or an array of matrices (time-varying sequence).
MatSeq parse_sequence(const json& j, const std::string& source, const std::string& field) {
  const bool sequence = j.is_array() && !j.empty() && j.front().is_array() &&
                        !j.front().empty() && is_matrix_literal(j.front()) &&
                        j.front().front().is_array();
  if (!sequence) return {parse_matrix(j, source, field)};
  MatSeq seq;
  for (std::size_t t = 0; t < j.size(); ++t) {
    seq.push_back(parse_matrix(j[t], source, field + "[" + std::to_string(t) + "]"));
  }
  return seq;
}

void symmetrize_checked(MatSeq& seq, const std::string& source, const std::string& field) {
  for (std::size_t t = 0; t < seq.size(); ++t) {
    Mat& X = seq[t];
    if (X.rows() != X.cols() || X.size() == 0) continue;
    const double asym = linalg::relative_asymmetry(X);
    if (asym > kAsymmetryTol) {
      std::ostringstream msg;
      msg << "not symmetric (relative asymmetry " << asym << ")";
      field_error(source, seq.size() == 1 ? field : field + "[" + std::to_string(t) + "]",
                  msg.str());
    }
    X = linalg::symmetrize(X);
  }
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

int read_dim(const json& j, const char* key, const std::string& source) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long>() < 0) {
    field_error(source, key, "expected a non-negative integer");
  }
  return v.get<int>();
}

}  // namespace

ProblemConfig config_from_json(const json& j, const std::string& source) {
  if (!j.is_object()) throw InvalidModel(source + ": top level must be a JSON object");
  ProblemConfig cfg;
  SystemModel& model = cfg.model;

  if (!j.contains("horizon")) field_error(source, "horizon", "missing");
  const json& h = j["horizon"];
  if (h.is_string() && h.get<std::string>() == "infinite") {
    model.horizon = Horizon::infinite();
  } else if (h.is_number_integer() && h.get<long>() >= 1) {
    model.horizon = Horizon::finite(h.get<int>());
  } else {
    field_error(source, "horizon", "expected \"infinite\" or an integer T >= 1");
  }

  auto required = [&](const char* key) -> MatSeq {
    if (!j.contains(key)) field_error(source, key, "missing");
    return parse_sequence(j[key], source, key);
  };
  model.A = required("A");
  model.B = required("B");
  model.W = required("W");
  cfg.cost.Q = required("Q");
  cfg.cost.R = required("R");
  const int n = static_cast<int>(model.A.front().rows());
  model.C = j.contains("C") ? parse_sequence(j["C"], source, "C") : MatSeq{Mat(0, 0)};
  model.V = j.contains("V") ? parse_sequence(j["V"], source, "V") : MatSeq{Mat(0, 0)};
  for (Mat& C : model.C) {
    if (C.size() == 0) C.resize(0, n);
  }
  const int p = static_cast<int>(model.C.front().rows());
  for (Mat& V : model.V) {
    if (V.size() == 0 && p == 0) V.resize(0, 0);
  }
  if (p > 0 && !j.contains("V")) field_error(source, "V", "missing (required when p > 0)");

  if (j.contains("n") && read_dim(j, "n", source) != n) {
    field_error(source, "n", "does not match A (" + std::to_string(n) + " rows)");
  }
  if (j.contains("m") && read_dim(j, "m", source) != model.B.front().cols()) {
    field_error(source, "m", "does not match the columns of B");
  }
  if (j.contains("p") && read_dim(j, "p", source) != p) {
    field_error(source, "p", "does not match the rows of C");
  }

  if (j.contains("P_init")) {
    model.P_init = parse_matrix(j["P_init"], source, "P_init");
  } else {
    model.P_init = model.W.front();
  }

  symmetrize_checked(model.W, source, "W");
  symmetrize_checked(model.V, source, "V");
  symmetrize_checked(cfg.cost.Q, source, "Q");
  symmetrize_checked(cfg.cost.R, source, "R");
  MatSeq pinit{model.P_init};
  symmetrize_checked(pinit, source, "P_init");
  model.P_init = pinit.front();

  if (!j.contains("gamma") || !j["gamma"].is_number()) {
    field_error(source, "gamma", "missing or not a number");
  }
  cfg.cost.gamma = j["gamma"].get<double>();
  if (j.contains("gamma_sweep")) {
    const json& s = j["gamma_sweep"];
    if (!s.is_array()) field_error(source, "gamma_sweep", "expected an array of numbers");
    for (const auto& v : s) {
      if (!v.is_number()) field_error(source, "gamma_sweep", "expected an array of numbers");
      cfg.gamma_sweep.push_back(v.get<double>());
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) field_error(source, "seed", "expected an unsigned integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  const ValidationReport report = validate(model, cfg.cost);
  if (!report.ok()) throw InvalidModel(source + ": " + report.summary());
  return cfg;
}

ProblemConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    throw InvalidModel(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                       ": JSON syntax error: " + e.what());
  }
  return config_from_json(j, source);
}

ProblemConfig load_config(const std::string& path) { return parse_config(read_file(path), path); }

json matrix_to_json(const Mat& X) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < X.cols(); ++c) row.push_back(X(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                     const std::string& field) {
  Mat X = parse_matrix(j, "<policy>", field);
  if (X.size() == 0 && (rows == 0 || cols == 0)) return Mat(rows, cols);
  if (X.rows() != rows || X.cols() != cols) {
    field_error("<policy>", field,
                "expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                    std::to_string(X.rows()) + "x" + std::to_string(X.cols()));
  }
  return X;
}

namespace {

json sequence_to_json(const MatSeq& seq) {
  if (seq.size() == 1) return matrix_to_json(seq.front());
  json out = json::array();
  for (const auto& X : seq) out.push_back(matrix_to_json(X));
  return out;
}

}  // namespace

json config_to_json(const SystemModel& model, const CostModel& cost) {
  json j;
  j["n"] = model.n();
  j["m"] = model.m();
  j["p"] = model.p();
  if (model.horizon.is_infinite()) {
    j["horizon"] = "infinite";
  } else {
    j["horizon"] = model.horizon.steps();
  }
  j["A"] = sequence_to_json(model.A);
  j["B"] = sequence_to_json(model.B);
  j["C"] = sequence_to_json(model.C);
  j["W"] = sequence_to_json(model.W);
  j["V"] = sequence_to_json(model.V);
  j["Q"] = sequence_to_json(cost.Q);
  j["R"] = sequence_to_json(cost.R);
  j["P_init"] = matrix_to_json(model.P_init);
  j["gamma"] = cost.gamma;
  return j;
}

json policy_to_json(const Policy& policy, const SystemModel& model) {
  json j;
  j["format"] = "lqgsi-policy";
  j["version"] = 1;
  j["mode"] = policy.stationary ? "stationary" : "finite";
  j["status"] = to_string(policy.status);
  j["gamma"] = policy.gamma;
  j["rate_nats"] = policy.rate_nats;
  j["rate_bits"] = policy.rate_bits();
  j["predicted_cost"] = policy.predicted_cost;
  if (policy.stationary) {
    j["stability"] = {{"closed_loop_radius", policy.closed_loop_radius},
                      {"riccati_residual", policy.riccati_residual},
                      {"stable", policy.closed_loop_radius < 1.0}};
  }
  j["model"] = config_to_json(model, policy.cost);
  json steps = json::array();
  for (const auto& s : policy.steps) {
    steps.push_back({{"q", s.encoder.q()},
                     {"D", matrix_to_json(s.encoder.D)},
                     {"M", matrix_to_json(s.encoder.M)},
                     {"K", matrix_to_json(s.K)},
                     {"L", matrix_to_json(s.L)},
                     {"snr_F", matrix_to_json(s.snr_F)},
                     {"P_pred", matrix_to_json(s.P_pred)},
                     {"P_post", matrix_to_json(s.P_post)},
                     {"rate_nats", s.rate_nats}});
  }
  j["steps"] = std::move(steps);
  return j;
}

LoadedPolicy policy_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != "lqgsi-policy") {
    throw InvalidModel("<policy>: not an lqgsi policy file");
  }
  LoadedPolicy out;
  const ProblemConfig cfg = config_from_json(j.at("model"), "<policy model>");
  out.model = cfg.model;
  Policy& p = out.policy;
  p.cost = cfg.cost;
  p.gamma = j.at("gamma").get<double>();
  p.stationary = j.at("mode").get<std::string>() == "stationary";
  const std::string status = j.at("status").get<std::string>();
  p.status = status == "zero_rate" ? SolveStatus::ZeroRate : SolveStatus::Optimal;
  p.rate_nats = j.at("rate_nats").get<double>();
  p.predicted_cost = j.at("predicted_cost").get<double>();
  if (p.stationary) {
    p.closed_loop_radius = j.at("stability").at("closed_loop_radius").get<double>();
    p.riccati_residual = j.at("stability").at("riccati_residual").get<double>();
  }
  const Eigen::Index n = out.model.n();
  const Eigen::Index m = out.model.m();
  const Eigen::Index pdim = out.model.p();
  const json& steps = j.at("steps");
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const json& s = steps[t];
    const std::string tag = "steps[" + std::to_string(t) + "].";
    const Eigen::Index q = s.at("q").get<Eigen::Index>();
    PolicyStep ps;
    ps.encoder.D = matrix_from_json(s.at("D"), q, n, tag + "D");
    ps.encoder.M = matrix_from_json(s.at("M"), q, q, tag + "M");
    ps.K = matrix_from_json(s.at("K"), m, n, tag + "K");
    ps.L = matrix_from_json(s.at("L"), n, pdim + q, tag + "L");
    ps.snr_F = matrix_from_json(s.at("snr_F"), n, n, tag + "snr_F");
    ps.P_pred = matrix_from_json(s.at("P_pred"), n, n, tag + "P_pred");
    ps.P_post = matrix_from_json(s.at("P_post"), n, n, tag + "P_post");
    ps.rate_nats = s.at("rate_nats").get<double>();
    p.steps.push_back(std::move(ps));
  }
  return out;
}

LoadedPolicy load_policy(const std::string& path) {
  json j;
  const std::string text = read_file(path);
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    throw InvalidModel(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                       ": JSON syntax error: " + e.what());
  }
  try {
    return policy_from_json(j);
  } catch (const json::exception& e) {
    throw InvalidModel(path + ": malformed policy: " + e.what());
  }
}

json sim_report_to_json(const SimReport& r) {
  json j;
  j["format"] = "lqgsi-sim-report";
  j["version"] = 1;
  j["mode"] = r.stationary ? "stationary" : "finite";
  j["seed"] = r.seed;
  j["steps_per_batch"] = r.steps_per_batch;
  j["recorded_steps"] = r.recorded_steps;
  j["empirical_avg_cost"] = r.avg_cost;
  j["cost_stderr"] = r.cost_stderr;
  j["batch_means"] = r.batch_means;
  j["predicted_cost"] = r.predicted_cost;
  j["empirical_error_covariance"] = matrix_to_json(r.error_covariance);
  j["predicted_P"] = matrix_to_json(r.predicted_P);
  j["state_norm"] = {{"mean", r.state_norm_mean}, {"max", r.state_norm_max}};
  j["innovation_lag1_corr"] = r.innovation_lag1_corr;
  j["q"] = r.q;
  if (r.q == 0) j["note"] = "encoder silent (q = 0); controller runs on the free observation";
  return j;
}

json spectral_to_json(const SpectralReport& r) {
  json eig = json::array();
  for (const auto& l : r.eigenvalues) {
    eig.push_back({{"re", l.real()}, {"im", l.imag()}, {"abs", std::abs(l)}});
  }
  return {{"eigenvalues", eig},
          {"stabilization_rate_bits", r.stabilization_rate_bits},
          {"stabilizable", r.stabilizable},
          {"detectable_y", r.detectable_y},
          {"observable_Q", r.observable_Q}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidModel(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error(path + ": write failed");
}

}  // namespace lqgsi::io
