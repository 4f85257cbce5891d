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

#include "safearea/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "safearea/error.hpp"
#include "safearea/parallel.hpp"

namespace safearea {

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw InvalidArgument("ecdf of an empty sample");
  for (double v : sorted_)
    if (std::isnan(v)) throw InvalidArgument("ecdf sample contains NaN");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double t) const {
  const auto k = std::upper_bound(sorted_.begin(), sorted_.end(), t) - sorted_.begin();
  return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

double ks_statistic_sorted(std::span<const double> sorted, const CdfModel& f) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double fi = f.cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - fi, fi - static_cast<double>(i) / n});
  }
  return d;
}

double ks_statistic(const Ecdf& e, const CdfModel& f) { return ks_statistic_sorted(e.sorted(), f); }

double kolmogorov_cdf(double x) {
  if (std::isnan(x) || x < 0.0) throw InvalidArgument("kolmogorov_cdf needs x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  constexpr double kTol = 1e-12;
  if (x < 1.0) {
    // Theta-function form; the alternating series converges slowly here.
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double s = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * c);
      s += term;
      if (term < kTol) break;
    }
    return std::min(1.0, std::sqrt(2.0 * std::numbers::pi) / x * s);
  }
  double s = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1) ? term : -term;
    if (term < kTol) break;
  }
  return std::clamp(1.0 - 2.0 * s, 0.0, 1.0);
}

double kolmogorov_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("kolmogorov_quantile needs p in (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  while (kolmogorov_cdf(hi) < p) hi *= 2.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

McEstimate expected_ks_sup(std::size_t n, const CdfModel& f0, std::size_t reps, Rng& rng,
                           unsigned workers) {
  if (n == 0 || reps == 0) throw InvalidArgument("expected_ks_sup needs n >= 1 and reps >= 1");
  constexpr std::size_t kBatch = 64;
  const std::uint64_t seed = rng();
  const std::size_t batches = (reps + kBatch - 1) / kBatch;
  std::vector<double> sum(batches, 0.0);
  std::vector<double> sum2(batches, 0.0);
  parallel_for(batches, workers, [&](std::size_t b) {
    Rng local(derive_seed(seed, {stream::kChunk, b}));
    std::vector<double> xs(n);
    const std::size_t end = std::min(reps, (b + 1) * kBatch);
    for (std::size_t r = b * kBatch; r < end; ++r) {
      for (double& x : xs) x = f0.sample(local);
      std::sort(xs.begin(), xs.end());
      const double d = ks_statistic_sorted(xs, f0);
      sum[b] += d;
      sum2[b] += d * d;
    }
  });
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    s += sum[b];
    s2 += sum2[b];
  }
  const double m = static_cast<double>(reps);
  McEstimate out;
  out.reps = reps;
  out.mean = s / m;
  if (reps > 1) {
    const double var = std::max(0.0, (s2 - m * out.mean * out.mean) / (m - 1.0));
    out.se = std::sqrt(var / m);
  }
  return out;
}

}  // namespace safearea
