// Copyright 2026 The safearea Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SAFEAREA_CONFIG_HPP_
#define SAFEAREA_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "safearea/estimator.hpp"
#include "safearea/evolution.hpp"
#include "safearea/kernel.hpp"
#include "safearea/limit_process.hpp"

namespace safearea {

// Parses the TOML subset used by scenario files: [table] and [a.b] headers,
// key = value pairs, strings, integers, floats, booleans, (nested) arrays
// and inline tables. Throws ValidationError with a line number on bad input.
nlohmann::json parse_toml(const std::string& text);

enum class EstimatorMode { kIid, kDependent };

struct EstimatorSettings {
  EstimatorMode mode = EstimatorMode::kIid;
  double alpha = 0.1;
  double epsilon = 0.1;
  CnMethod cn_method = CnMethod::kMonteCarlo;
  std::size_t cn_reps = 10000;
  double dkw_beta = 0.05;
  std::size_t paths = 100000;
  std::size_t grid = 512;
  SupMode sup_mode = SupMode::kBridgeInterpolated;
};

struct ScenarioConfig {
  std::size_t dimension = 2;
  std::size_t horizon = 200;
  std::size_t particles = 0;
  std::size_t replications = 2000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  bool simulate_full = false;
  bool allow_violations = false;
  std::string output_dir = ".";
  std::vector<std::size_t> n_ladder;  // empty: {horizon}

  SupportSet s0 = SupportSet::ball(Site::origin(2), 0.0);
  KernelSpec kernel;
  NoiseDriver noise = NoiseDriver::uniform(0.0, 1.0);
  CovariateProcess covariate = CovariateProcess::constant(1.0);
  EstimatorSettings estimator;

  EpidemicConfig epidemic() const;
  std::vector<std::size_t> ladder() const;
  // Radius law F0 for the iid regime; throws ValidationError when radii
  // depend on a nonconstant covariate.
  CdfModel iid_radius_law() const;

  // Echo of the settings, written into reports.
  nlohmann::json to_json() const;
};

// Strict schema validation: unknown tables or keys, wrong types and out of
// range values raise ValidationError.
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& toml_text);

// Reference scenario with every key at its default, printed by --init.
const std::string& default_scenario_toml();

}  // namespace safearea

#endif  // SAFEAREA_CONFIG_HPP_
