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
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lqgsi/model.hpp"
#include "lqgsi/sdp.hpp"
#include "lqgsi/sim.hpp"
#include "lqgsi/synthesis.hpp"

namespace lqgsi::io {

using json = nlohmann::json;

/// Problem instance as read from a config file.
///
/// Fields: "n", "m", "p" (optional, inferred from A, B, C), "horizon"
/// ("infinite" or an integer T), matrices "A", "B", "C", "W", "V", "Q", "R",
/// "P_init" as row-major nested arrays, "gamma", optional "gamma_sweep" and
/// "seed".  A matrix entry may also be an array of T matrices (time-varying)
/// or a bare number for a 1x1 matrix.  With p = 0, "C" and "V" may be omitted.
/// "P_init" defaults to W (the first W for a time-varying model).
struct ProblemConfig {
  SystemModel model;
  CostModel cost;
  std::vector<double> gamma_sweep;
  std::optional<std::uint64_t> seed;
};

/// Throws InvalidModel with "source:line:col" for syntax errors and the field
/// name for structural ones.  Symmetric matrices are symmetrized after the
/// asymmetry check.
ProblemConfig parse_config(const std::string& text, const std::string& source = "<config>");
ProblemConfig config_from_json(const json& j, const std::string& source = "<config>");
ProblemConfig load_config(const std::string& path);

json config_to_json(const SystemModel& model, const CostModel& cost);

json matrix_to_json(const Mat& X);
/// Reads a rows x cols matrix; an empty array is accepted when rows or cols is 0.
Mat matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols, const std::string& field);

json policy_to_json(const Policy& policy, const SystemModel& model);

struct LoadedPolicy {
  SystemModel model;
  Policy policy;
};
LoadedPolicy policy_from_json(const json& j);
LoadedPolicy load_policy(const std::string& path);

json sim_report_to_json(const SimReport& report);

json spectral_to_json(const SpectralReport& report);

std::string read_file(const std::string& path);
/// Writes `j` with two-space indentation and a trailing newline.
void write_json(const std::string& path, const json& j);

}  // namespace lqgsi::io
