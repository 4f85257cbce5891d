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

#ifndef SAFEAREA_KERNEL_HPP_
#define SAFEAREA_KERNEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "safearea/cdf_model.hpp"
#include "safearea/geometry.hpp"
#include "safearea/rng.hpp"

namespace safearea {

// Law of the iid noise sequence xi_n. Every family has a support bounded
// above, which keeps kernel supports compact.
class NoiseDriver {
 public:
  enum class Family { kUniform, kBeta, kTruncExp };

  static NoiseDriver uniform(double a, double b);
  static NoiseDriver beta(double p, double q, double scale);
  static NoiseDriver trunc_exp(double rate, double cap);

  Family family() const noexcept { return family_; }
  const CdfModel& law() const noexcept { return law_; }
  double draw(Rng& rng) const { return law_.sample(rng); }

  nlohmann::json to_json() const;

 private:
  NoiseDriver(Family f, CdfModel law) : family_(f), law_(std::move(law)) {}
  Family family_;
  CdfModel law_;
};

// Limit lambda^Y of the covariate empirical measure: either a finite set of
// atoms or a continuous law.
struct CovariateLimit {
  std::vector<double> atoms;    // sorted, distinct
  std::vector<double> weights;  // same length as atoms
  std::optional<CdfModel> continuous;

  double cdf(double y) const;
};

// The explicative process Y_n.
class CovariateProcess {
 public:
  enum class Mode { kConstant, kCycle, kLowDiscrepancy, kIidViolating };

  static CovariateProcess constant(double y);
  static CovariateProcess cycle(std::vector<double> values);
  // Y_n = lo + (hi - lo) * vdc(n), vdc the base-2 van der Corput sequence.
  static CovariateProcess low_discrepancy(double lo, double hi);
  // Y_n iid from `law`; does not satisfy the root-n empirical rate condition.
  static CovariateProcess iid(CdfModel law);

  Mode mode() const noexcept { return mode_; }
  bool assumption_violating() const noexcept { return mode_ == Mode::kIidViolating; }

  // Y_index for index >= 1. Only the iid mode consumes randomness.
  double value(std::size_t index, Rng& rng) const;
  std::vector<double> path(std::size_t n, Rng& rng) const;

  CovariateLimit limit() const;

  const std::vector<double>& cycle_values() const noexcept { return values_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  const std::optional<CdfModel>& iid_law() const noexcept { return law_; }

  nlohmann::json to_json() const;

 private:
  explicit CovariateProcess(Mode m) : mode_(m) {}
  Mode mode_;
  std::vector<double> values_;
  double lo_ = 0.0;
  double hi_ = 1.0;
  std::optional<CdfModel> law_;
};

// Base-2 radical inverse of n.
double van_der_corput(std::uint64_t n) noexcept;

// sqrt(n) * sup_y |F^n_Y(y) - lambda^Y(y)| for the first n covariates.
double covariate_ecdf_gap(const CovariateProcess& y, std::size_t n, Rng& rng);

enum class RadiusMap { kIdentity, kScaled, kShifted };
enum class KernelProfile { kUniformBall, kTriangularRadial };

inline constexpr double kRadiusFloor = 1e-12;

struct KernelSpec {
  RadiusMap radius_map = RadiusMap::kIdentity;
  KernelProfile profile = KernelProfile::kUniformBall;

  // r(xi, y); continuous in y for every map.
  double radius(double xi, double y) const;

  nlohmann::json to_json() const;
};

std::string to_string(RadiusMap m);
std::string to_string(KernelProfile p);
RadiusMap parse_radius_map(const std::string& s);
KernelProfile parse_kernel_profile(const std::string& s);

// A kernel pi(.; s) = Pi(.; s)(xi, y) for one time step: the same radius and
// profile apply to every source site.
struct RealizedKernel {
  double radius = 1.0;
  KernelProfile profile = KernelProfile::kUniformBall;
};

RealizedKernel realize_kernel(const KernelSpec& spec, double xi, double y);

// Density of pi(.; s) at distance rho from s in R^dim (0 outside the ball).
double profile_density(const RealizedKernel& k, std::size_t dim, double rho);

// Draws a destination for a source at `source`, writing `out` (same size).
// The result lies in the open ball B(source, k.radius).
void sample_transition(const RealizedKernel& k, std::span<const double> source,
                       std::span<double> out, Rng& rng);
Site sample_transition(const RealizedKernel& k, const Site& source, Rng& rng);

// Radius law r(xi, y) for fixed y, when it is continuous.
CdfModel radius_law(const KernelSpec& spec, const NoiseDriver& noise, double y);

// Limit radius law F(t) = int F(t; y) lambda^Y(dy) as weighted components.
// Atoms map to one component each; continuous covariate limits are resolved
// by Gauss-Legendre quadrature in probability space.
struct RadiusLimit {
  std::vector<CdfModel> components;
  std::vector<double> weights;
  CdfModel mean() const;
};
RadiusLimit limit_radius_law(const KernelSpec& spec, const NoiseDriver& noise,
                             const CovariateProcess& covariate, std::size_t quadrature_nodes = 64);

}  // namespace safearea

#endif  // SAFEAREA_KERNEL_HPP_
