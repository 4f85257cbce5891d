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

#ifndef SAFEAREA_ESTIMATOR_HPP_
#define SAFEAREA_ESTIMATOR_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "safearea/cdf_model.hpp"
#include "safearea/geometry.hpp"
#include "safearea/limit_process.hpp"
#include "safearea/rng.hpp"

namespace safearea {

enum class CnMethod { kMonteCarlo, kAsymptotic, kDkw };

std::string to_string(CnMethod m);
CnMethod parse_cn_method(const std::string& s);

struct IidEstimatorConfig {
  double alpha = 0.05;
  CdfModel f0 = CdfModel::uniform(0.0, 1.0);
  CnMethod cn_method = CnMethod::kMonteCarlo;
  std::size_t reps = 10000;  // MonteCarlo
  double dkw_beta = 0.05;    // Dkw
  unsigned workers = 0;
};

struct DependentEstimatorConfig {
  double alpha = 0.05;
  double epsilon = 0.1;
  LimitProcessModel limit_model = bridge_model();
  std::size_t paths = 100000;
  LimitSimOptions sim;
};

// A constant used to shrink the empirical tail threshold.
struct ConstantEstimate {
  double value = 0.0;
  double se = 0.0;
};

ConstantEstimate estimate_cn(std::size_t n, const IidEstimatorConfig& cfg, Rng& rng);

// Smallest n for which alpha exceeds the chosen C_n (asymptotic formula for
// MonteCarlo, closed form otherwise).
std::size_t min_n_iid(double alpha, CnMethod method, double dkw_beta = 0.05);
// Smallest n with epsilon > c_alpha / sqrt(n).
std::size_t min_n_dependent(double epsilon, double c_alpha);

struct DeltaResult {
  double delta = 0.0;
  double threshold_used = 0.0;
  std::size_t count_above = 0;
  std::size_t n = 0;
  bool feasible = false;
  std::string constant_name;  // "c_n" or "c_alpha"
  double constant = 0.0;
  double constant_se = 0.0;
  std::size_t min_n = 0;  // set when infeasible

  nlohmann::json to_json() const;
};

// Smallest t in {0} and the sample with #{r_i > t} / n < threshold. An
// infeasible result is returned when threshold <= 0.
DeltaResult delta_from_threshold(std::span<const double> radii, double threshold);

DeltaResult delta_iid(std::span<const double> radii, const IidEstimatorConfig& cfg, Rng& rng);
// With a precomputed C_n.
DeltaResult delta_iid(std::span<const double> radii, double alpha, const ConstantEstimate& cn,
                      CnMethod method = CnMethod::kMonteCarlo, double dkw_beta = 0.05);

DeltaResult delta_dependent(std::span<const double> radii, const DependentEstimatorConfig& cfg,
                            Rng& rng);
// With a precomputed C_alpha.
DeltaResult delta_dependent(std::span<const double> radii, double epsilon,
                            const ConstantEstimate& c_alpha);

// Throws NoFeasibleDelta for infeasible results.
SafetyArea make_safety_area(const SupportSet& s_n, const DeltaResult& d, double level,
                            std::optional<double> epsilon = {});

}  // namespace safearea

#endif  // SAFEAREA_ESTIMATOR_HPP_
