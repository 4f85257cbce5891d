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

#ifndef SAFEAREA_EMPIRICAL_HPP_
#define SAFEAREA_EMPIRICAL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "safearea/cdf_model.hpp"
#include "safearea/rng.hpp"

namespace safearea {

// Right-continuous empirical distribution function of a finite sample.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);

  double operator()(double t) const;
  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

inline Ecdf ecdf(std::vector<double> samples) { return Ecdf(std::move(samples)); }

// sup_t |F_e(t) - F(t)| for continuous F, evaluated at the order statistics.
double ks_statistic(const Ecdf& e, const CdfModel& f);
// Same for an already sorted sample (no copy).
double ks_statistic_sorted(std::span<const double> sorted, const CdfModel& f);

// Kolmogorov distribution P(sup |b(t)| <= x) of the Brownian bridge sup.
double kolmogorov_cdf(double x);
// Inverse of kolmogorov_cdf for p in (0, 1).
double kolmogorov_quantile(double p);

// E sup |b(t)| = sqrt(pi / 2) ln 2.
inline constexpr double kBridgeSupMean = 0.86873115316261;

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t reps = 0;
};

// Monte Carlo estimate of E sup_t |F^n(t) - F0(t)| for n draws from F0.
// Repetitions are split into fixed batches with their own substreams, so the
// result does not depend on the number of workers.
McEstimate expected_ks_sup(std::size_t n, const CdfModel& f0, std::size_t reps, Rng& rng,
                           unsigned workers = 0);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace safearea

#endif  // SAFEAREA_EMPIRICAL_HPP_
