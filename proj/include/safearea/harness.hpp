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

#ifndef SAFEAREA_HARNESS_HPP_
#define SAFEAREA_HARNESS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "safearea/config.hpp"

namespace safearea {

struct ReplicationRecord {
  std::size_t rep = 0;
  bool feasible = false;
  double delta = 0.0;
  double next_radius = 0.0;  // r_{n+1}
  double tail = 0.0;         // 1 - F(delta), dependent regime
  bool breach = false;       // iid: r_{n+1} > delta; dependent: tail > epsilon
};

struct CoverageCell {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t feasible = 0;
  std::size_t breaches = 0;
  std::optional<double> coverage;  // breaches / feasible
  double se = 0.0;                 // binomial standard error of coverage
  double constant = 0.0;           // C_n or C_alpha
  double constant_se = 0.0;
  double threshold = 0.0;
  std::size_t min_n = 0;  // when the threshold is not positive
  std::size_t geometric_checks = 0;
  std::size_t geometric_mismatches = 0;
  std::vector<ReplicationRecord> per_rep;

  // coverage <= target + k * se, or no feasible replication at all.
  bool within(double target, double k = 2.0) const;
};

struct PhaseTimings {
  double constants = 0.0;
  double simulate = 0.0;
  double estimate = 0.0;
  double aggregate = 0.0;
};

struct CoverageReport {
  std::string regime;  // "iid" or "dependent"
  double alpha = 0.0;
  std::optional<double> epsilon;
  bool assumption_violating = false;
  std::vector<CoverageCell> ladder;  // ascending n; the last one is the headline
  nlohmann::json scenario;
  PhaseTimings timings;

  const CoverageCell& headline() const { return ladder.back(); }
  // Timings change from run to run, so they are opt-in.
  nlohmann::json to_json(bool include_timings = false) const;
};

CoverageReport run_coverage_iid(const ScenarioConfig& cfg);
CoverageReport run_coverage_dependent(const ScenarioConfig& cfg);
CoverageReport run_coverage(const ScenarioConfig& cfg);

}  // namespace safearea

#endif  // SAFEAREA_HARNESS_HPP_
