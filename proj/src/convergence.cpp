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

#include "safearea/convergence.hpp"

#include <algorithm>
#include <cmath>

#include "safearea/error.hpp"

namespace safearea {

VanishingSequence vanishing_sequence(const TailProb& tail_prob, double a0, std::size_t horizon,
                                     std::size_t search_limit) {
  if (!(a0 > 0.0) || !std::isfinite(a0)) throw InvalidArgument("vanishing_sequence needs a0 > 0");
  if (horizon == 0) throw InvalidArgument("vanishing_sequence needs horizon >= 1");
  if (search_limit == 0) search_limit = 4 * horizon;
  search_limit = std::max(search_limit, horizon);

  VanishingSequence out;
  out.a.reserve(horizon);
  double current = a0;
  std::size_t prev = 0;  // n_{k-1}
  for (std::size_t level = 0; out.a.size() < horizon; ++level) {
    const double threshold = a0 / std::ldexp(1.0, static_cast<int>(level) + 1);
    const double bound = std::ldexp(1.0, -(static_cast<int>(level) + 1));
    if (!(threshold > 0.0)) {
      out.a.resize(horizon, current);
      break;
    }
    if (tail_prob(search_limit, threshold) >= bound) {
      out.stalled = true;
      out.stalled_level = level;
      out.a.resize(horizon, current);
      break;
    }
    std::size_t last_fail = 0;
    for (std::size_t m = search_limit - 1; m > prev; --m) {
      if (tail_prob(m, threshold) >= bound) {
        last_fail = m;
        break;
      }
    }
    const std::size_t nk = std::max(last_fail, prev + 1);
    while (out.a.size() < std::min(nk, horizon)) out.a.push_back(current);
    prev = nk;
    current = threshold;
    if (prev < horizon) out.change_points.push_back(prev + 1);
  }
  return out;
}

GapBound uniform_gap(const std::function<double(double)>& f_n, const CdfModel& f,
                     std::size_t grid_density) {
  if (grid_density < 1) throw InvalidArgument("uniform_gap needs a positive grid density");
  GapBound out;
  std::vector<double> xs;
  xs.reserve(grid_density + 1);
  for (std::size_t i = 0; i <= grid_density; ++i)
    xs.push_back(f.quantile(static_cast<double>(i) / static_cast<double>(grid_density)));
  double prev_f = 0.0;
  for (double x : xs) {
    const double fx = f.cdf(x);
    out.grid_max = std::max(out.grid_max, std::abs(f_n(x) - fx));
    out.oscillation = std::max(out.oscillation, fx - prev_f);
    prev_f = fx;
  }
  // Past the last grid point f is 1 and f_n can only move towards it.
  out.oscillation = std::max(out.oscillation, 1.0 - prev_f);
  out.points = xs.size();
  out.bound = out.grid_max + out.oscillation;
  return out;
}

}  // namespace safearea
