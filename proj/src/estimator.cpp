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

#include "safearea/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "safearea/empirical.hpp"
#include "safearea/error.hpp"

namespace safearea {

std::string to_string(CnMethod m) {
  switch (m) {
    case CnMethod::kMonteCarlo:
      return "monte_carlo";
    case CnMethod::kAsymptotic:
      return "asymptotic";
    case CnMethod::kDkw:
      return "dkw";
  }
  return "?";
}

CnMethod parse_cn_method(const std::string& s) {
  if (s == "monte_carlo" || s == "mc") return CnMethod::kMonteCarlo;
  if (s == "asymptotic") return CnMethod::kAsymptotic;
  if (s == "dkw") return CnMethod::kDkw;
  throw InvalidArgument("unknown C_n method '" + s + "'");
}

namespace {

void check_probability(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument(std::string(name) + " must lie in (0, 1)");
}

std::size_t smallest_n_above(double ratio) {
  // Smallest integer n with n > ratio.
  return static_cast<std::size_t>(std::floor(ratio)) + 1;
}

}  // namespace

ConstantEstimate estimate_cn(std::size_t n, const IidEstimatorConfig& cfg, Rng& rng) {
  if (n == 0) throw InvalidArgument("C_n needs n >= 1");
  const double dn = static_cast<double>(n);
  switch (cfg.cn_method) {
    case CnMethod::kMonteCarlo: {
      const McEstimate e = expected_ks_sup(n, cfg.f0, cfg.reps, rng, cfg.workers);
      return {e.mean, e.se};
    }
    case CnMethod::kAsymptotic:
      return {kBridgeSupMean / std::sqrt(dn), 0.0};
    case CnMethod::kDkw:
      check_probability(cfg.dkw_beta, "dkw beta");
      return {std::sqrt(std::log(2.0 / cfg.dkw_beta) / (2.0 * dn)), 0.0};
  }
  return {};
}

std::size_t min_n_iid(double alpha, CnMethod method, double dkw_beta) {
  check_probability(alpha, "alpha");
  if (method == CnMethod::kDkw) {
    check_probability(dkw_beta, "dkw beta");
    return smallest_n_above(std::log(2.0 / dkw_beta) / (2.0 * alpha * alpha));
  }
  const double r = kBridgeSupMean / alpha;
  return smallest_n_above(r * r);
}

std::size_t min_n_dependent(double epsilon, double c_alpha) {
  check_probability(epsilon, "epsilon");
  const double r = c_alpha / epsilon;
  return smallest_n_above(r * r);
}

nlohmann::json DeltaResult::to_json() const {
  nlohmann::json j;
  j["feasible"] = feasible;
  j["delta"] = feasible ? nlohmann::json(delta) : nlohmann::json(nullptr);
  j["threshold_used"] = threshold_used;
  j["count_above"] = count_above;
  j["n"] = n;
  j[constant_name.empty() ? "constant" : constant_name] = constant;
  j["constant_se"] = constant_se;
  if (!feasible) j["min_n"] = min_n;
  return j;
}

DeltaResult delta_from_threshold(std::span<const double> radii, double threshold) {
  if (radii.empty()) throw InvalidArgument("safety threshold needs at least one radius");
  std::vector<double> sorted(radii.begin(), radii.end());
  for (double r : sorted)
    if (!std::isfinite(r) || r < 0.0) throw InvalidArgument("radii must be finite and >= 0");
  std::sort(sorted.begin(), sorted.end());

  DeltaResult out;
  out.n = sorted.size();
  out.threshold_used = threshold;
  if (!(threshold > 0.0)) {
    out.feasible = false;
    out.count_above = sorted.size();
    return out;
  }
  const double dn = static_cast<double>(sorted.size());
  auto above = [&](double t) {
    return static_cast<std::size_t>(sorted.end() -
                                    std::upper_bound(sorted.begin(), sorted.end(), t));
  };
  out.feasible = true;
  std::size_t count = above(0.0);
  if (static_cast<double>(count) / dn < threshold) {
    out.delta = 0.0;
    out.count_above = count;
    return out;
  }
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    count = sorted.size() - (i + 1);
    if (static_cast<double>(count) / dn < threshold) {
      out.delta = sorted[i];
      out.count_above = count;
      return out;
    }
  }
  out.delta = sorted.back();
  out.count_above = 0;
  return out;
}

DeltaResult delta_iid(std::span<const double> radii, double alpha, const ConstantEstimate& cn,
                      CnMethod method, double dkw_beta) {
  check_probability(alpha, "alpha");
  DeltaResult out = delta_from_threshold(radii, alpha - cn.value);
  out.constant_name = "c_n";
  out.constant = cn.value;
  out.constant_se = cn.se;
  if (!out.feasible) out.min_n = min_n_iid(alpha, method, dkw_beta);
  return out;
}

DeltaResult delta_iid(std::span<const double> radii, const IidEstimatorConfig& cfg, Rng& rng) {
  check_probability(cfg.alpha, "alpha");
  if (radii.empty()) throw InvalidArgument("safety threshold needs at least one radius");
  const ConstantEstimate cn = estimate_cn(radii.size(), cfg, rng);
  return delta_iid(radii, cfg.alpha, cn, cfg.cn_method, cfg.dkw_beta);
}

DeltaResult delta_dependent(std::span<const double> radii, double epsilon,
                            const ConstantEstimate& c_alpha) {
  check_probability(epsilon, "epsilon");
  if (radii.empty()) throw InvalidArgument("safety threshold needs at least one radius");
  const double threshold = epsilon - c_alpha.value / std::sqrt(static_cast<double>(radii.size()));
  DeltaResult out = delta_from_threshold(radii, threshold);
  out.constant_name = "c_alpha";
  out.constant = c_alpha.value;
  out.constant_se = c_alpha.se;
  if (!out.feasible) out.min_n = min_n_dependent(epsilon, c_alpha.value);
  return out;
}

DeltaResult delta_dependent(std::span<const double> radii, const DependentEstimatorConfig& cfg,
                            Rng& rng) {
  check_probability(cfg.alpha, "alpha");
  const double c = c_alpha(cfg.limit_model, cfg.alpha, cfg.paths, rng, cfg.sim);
  return delta_dependent(radii, cfg.epsilon, ConstantEstimate{c, 0.0});
}

SafetyArea make_safety_area(const SupportSet& s_n, const DeltaResult& d, double level,
                            std::optional<double> epsilon) {
  if (!d.feasible)
    throw NoFeasibleDelta("no feasible safety threshold at n = " + std::to_string(d.n), d.min_n);
  return SafetyArea(s_n, d.delta, level, epsilon);
}

}  // namespace safearea
