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

#ifndef SAFEAREA_LIMIT_PROCESS_HPP_
#define SAFEAREA_LIMIT_PROCESS_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "safearea/cdf_model.hpp"
#include "safearea/rng.hpp"

namespace safearea {

// Centered Gaussian process U on a grid with covariance
//   G(s, t) = sum_i w_i F_i(min(s, t)) (1 - F_i(max(s, t))).
struct LimitProcessModel {
  std::vector<CdfModel> components;
  std::vector<double> weights;  // normalized
  CdfModel mean_cdf = CdfModel::uniform(0.0, 1.0);
  std::vector<double> grid;  // strictly increasing
  Eigen::MatrixXd gram;      // G on grid x grid

  double covariance(double s, double t) const;
};

// Empty weights means equal weights.
LimitProcessModel build_limit_model(std::vector<CdfModel> components, std::vector<double> grid,
                                    std::vector<double> weights = {});

// m points at the j / (m + 1) quantiles of `mean`.
std::vector<double> default_grid(const CdfModel& mean, std::size_t m = 512);

// Brownian bridge in F-time: one Uniform(0, 1) component on the default grid.
LimitProcessModel bridge_model(std::size_t m = 512);

enum class SupMode {
  // max_j |U(t_j)| only.
  kGridMax,
  // Adds the sup between grid points, drawn from the exact law of a
  // Brownian-bridge excursion given the endpoint values.
  kBridgeInterpolated,
};

struct LimitSimOptions {
  SupMode mode = SupMode::kBridgeInterpolated;
  unsigned workers = 0;
  double nugget = 1e-10;
};

// `paths` draws of sup |U|, sorted ascending.
std::vector<double> simulate_limit_sup(const LimitProcessModel& model, std::size_t paths, Rng& rng,
                                       const LimitSimOptions& opts = {});

// (1 - alpha) quantile of a sorted sup sample.
double upper_quantile(const std::vector<double>& sorted, double alpha);

double c_alpha(const LimitProcessModel& model, double alpha, std::size_t paths, Rng& rng,
               const LimitSimOptions& opts = {});

// sup over t in grid of F(t + delta) - F(t), refined locally around the best
// grid point.
double modulus_of_continuity(const CdfModel& f, double delta, const std::vector<double>& grid);
// Grid of 4096 points covering the support of f.
double modulus_of_continuity(const CdfModel& f, double delta);

struct ModulusReport {
  double delta = 0.0;
  double value = 0.0;
  std::vector<double> per_component;
};

ModulusReport averaged_modulus(const LimitProcessModel& model, double delta);

struct MarginalCheck {
  double t = 0.0;
  double variance_limit = 0.0;
  double variance_empirical = 0.0;
  double ks = 0.0;        // sqrt(reps) * D
  double critical = 0.0;  // K^{-1}(0.99)
  bool degenerate = false;
  bool rejected = false;
};

struct CovarianceCheck {
  double s = 0.0;
  double t = 0.0;
  double expected = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  bool within = false;
};

struct FindimReport {
  std::size_t n = 0;
  std::size_t reps = 0;
  std::vector<MarginalCheck> marginals;
  std::vector<CovarianceCheck> covariances;
  std::size_t rejections = 0;
  bool pass = false;

  nlohmann::json to_json() const;
};

// Simulates U_n(t) = sqrt(n) (F_X^n(t) - n^{-1} sum F_i(t)) with X_i ~ F_{i mod k}
// and checks it against the Gaussian limit. Marginals get a uniform jitter of
// one lattice step, compensated in the reference variance.
FindimReport findim_gaussian_test(const std::vector<CdfModel>& components,
                                  const std::vector<double>& t_points, std::size_t n,
                                  std::size_t reps, Rng& rng, unsigned workers = 0);

}  // namespace safearea

#endif  // SAFEAREA_LIMIT_PROCESS_HPP_
