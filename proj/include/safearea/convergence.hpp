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

#ifndef SAFEAREA_CONVERGENCE_HPP_
#define SAFEAREA_CONVERGENCE_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "safearea/cdf_model.hpp"

namespace safearea {

// tail_prob(n, a) estimates P(|Z_n| > a).
using TailProb = std::function<double(std::size_t n, double a)>;

struct VanishingSequence {
  std::vector<double> a;                    // a[i] is a_{i+1}
  std::vector<std::size_t> change_points;  // first index n with each new value
  bool stalled = false;
  std::size_t stalled_level = 0;
};

// Halving construction: level k uses threshold a0 / 2^(k+1) and tail bound
// 2^-(k+1). n_k is the last n <= search_limit where the bound fails (at
// least n_{k-1} + 1), and a_n = a0 / 2^k on (n_{k-1}, n_k]. A level whose
// bound still fails at search_limit stalls the construction; the remaining
// terms keep the last value.
VanishingSequence vanishing_sequence(const TailProb& tail_prob, double a0, std::size_t horizon,
                                     std::size_t search_limit = 0);

struct GapBound {
  double bound = 0.0;        // rigorous upper bound on sup |f_n - f|
  double grid_max = 0.0;     // max |f_n - f| over the grid
  double oscillation = 0.0;  // max increment of f between grid points
  std::size_t points = 0;
};

// Upper bound on sup_x |f_n(x) - f(x)| for nondecreasing f_n, using the grid
// of f-quantiles at i / grid_density.
GapBound uniform_gap(const std::function<double(double)>& f_n, const CdfModel& f,
                     std::size_t grid_density = 1000);

}  // namespace safearea

#endif  // SAFEAREA_CONVERGENCE_HPP_
