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

#include "safearea/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "safearea/error.hpp"

namespace safearea {

// ---------------------------------------------------------------------------
// Noise

NoiseDriver NoiseDriver::uniform(double a, double b) {
  return NoiseDriver(Family::kUniform, CdfModel::uniform(a, b));
}

NoiseDriver NoiseDriver::beta(double p, double q, double scale) {
  return NoiseDriver(Family::kBeta, CdfModel::beta(p, q, scale));
}

NoiseDriver NoiseDriver::trunc_exp(double rate, double cap) {
  return NoiseDriver(Family::kTruncExp, CdfModel::trunc_exp(rate, cap));
}

nlohmann::json NoiseDriver::to_json() const { return law_.to_json(); }

// ---------------------------------------------------------------------------
// Covariates

double CovariateLimit::cdf(double y) const {
  if (continuous) return continuous->cdf(y);
  double s = 0.0;
  for (std::size_t i = 0; i < atoms.size() && atoms[i] <= y; ++i) s += weights[i];
  return std::min(s, 1.0);
}

CovariateProcess CovariateProcess::constant(double y) {
  if (!std::isfinite(y)) throw InvalidArgument("constant covariate must be finite");
  CovariateProcess p(Mode::kConstant);
  p.values_ = {y};
  return p;
}

CovariateProcess CovariateProcess::cycle(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("cycle covariate needs at least one value");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidArgument("cycle values must be finite");
  CovariateProcess p(Mode::kCycle);
  p.values_ = std::move(values);
  return p;
}

CovariateProcess CovariateProcess::low_discrepancy(double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw InvalidArgument("low-discrepancy covariate needs finite lo < hi");
  CovariateProcess p(Mode::kLowDiscrepancy);
  p.lo_ = lo;
  p.hi_ = hi;
  return p;
}

CovariateProcess CovariateProcess::iid(CdfModel law) {
  CovariateProcess p(Mode::kIidViolating);
  p.lo_ = law.lower();
  p.hi_ = law.upper();
  p.law_ = std::move(law);
  return p;
}

double van_der_corput(std::uint64_t n) noexcept {
  double v = 0.0;
  double denom = 0.5;
  while (n != 0) {
    if (n & 1U) v += denom;
    n >>= 1;
    denom *= 0.5;
  }
  return v;
}

double CovariateProcess::value(std::size_t index, Rng& rng) const {
  if (index == 0) throw InvalidArgument("covariate indices start at 1");
  switch (mode_) {
    case Mode::kConstant:
      return values_.front();
    case Mode::kCycle:
      return values_[(index - 1) % values_.size()];
    case Mode::kLowDiscrepancy:
      return lo_ + (hi_ - lo_) * van_der_corput(index);
    case Mode::kIidViolating:
      return law_->sample(rng);
  }
  return 0.0;
}

std::vector<double> CovariateProcess::path(std::size_t n, Rng& rng) const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = value(i + 1, rng);
  return out;
}

CovariateLimit CovariateProcess::limit() const {
  CovariateLimit lim;
  if (mode_ == Mode::kConstant || mode_ == Mode::kCycle) {
    std::map<double, double> mass;
    for (double v : values_) mass[v] += 1.0 / static_cast<double>(values_.size());
    for (const auto& [atom, w] : mass) {
      lim.atoms.push_back(atom);
      lim.weights.push_back(w);
    }
  } else if (mode_ == Mode::kLowDiscrepancy) {
    lim.continuous = CdfModel::uniform(lo_, hi_);
  } else {
    lim.continuous = *law_;
  }
  return lim;
}

nlohmann::json CovariateProcess::to_json() const {
  switch (mode_) {
    case Mode::kConstant:
      return {{"mode", "constant"}, {"value", values_.front()}};
    case Mode::kCycle:
      return {{"mode", "cycle"}, {"values", values_}};
    case Mode::kLowDiscrepancy:
      return {{"mode", "low_discrepancy"}, {"lo", lo_}, {"hi", hi_}};
    case Mode::kIidViolating:
      return {{"mode", "iid"}, {"law", law_->to_json()}, {"assumption_violating", true}};
  }
  return {};
}

double covariate_ecdf_gap(const CovariateProcess& y, std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidArgument("covariate_ecdf_gap needs n >= 1");
  std::vector<double> ys = y.path(n, rng);
  std::sort(ys.begin(), ys.end());
  const CovariateLimit lim = y.limit();
  const double dn = static_cast<double>(n);
  double sup = 0.0;
  if (lim.continuous) {
    for (std::size_t i = 0; i < n; ++i) {
      const double f = lim.continuous->cdf(ys[i]);
      sup = std::max({sup, static_cast<double>(i + 1) / dn - f, f - static_cast<double>(i) / dn});
    }
  } else {
    // Both functions are right-continuous steps; any extra observed value is
    // also an evaluation point.
    std::vector<double> points = lim.atoms;
    points.insert(points.end(), ys.begin(), ys.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    for (double p : points) {
      const auto count = std::upper_bound(ys.begin(), ys.end(), p) - ys.begin();
      sup = std::max(sup, std::abs(static_cast<double>(count) / dn - lim.cdf(p)));
    }
  }
  return std::sqrt(dn) * sup;
}

// ---------------------------------------------------------------------------
// Kernels

std::string to_string(RadiusMap m) {
  switch (m) {
    case RadiusMap::kIdentity:
      return "identity";
    case RadiusMap::kScaled:
      return "scaled";
    case RadiusMap::kShifted:
      return "shifted";
  }
  return "?";
}

std::string to_string(KernelProfile p) {
  return p == KernelProfile::kUniformBall ? "uniform_ball" : "triangular_radial";
}

RadiusMap parse_radius_map(const std::string& s) {
  if (s == "identity") return RadiusMap::kIdentity;
  if (s == "scaled") return RadiusMap::kScaled;
  if (s == "shifted") return RadiusMap::kShifted;
  throw InvalidArgument("unknown radius map '" + s + "'");
}

KernelProfile parse_kernel_profile(const std::string& s) {
  if (s == "uniform_ball") return KernelProfile::kUniformBall;
  if (s == "triangular_radial") return KernelProfile::kTriangularRadial;
  throw InvalidArgument("unknown kernel profile '" + s + "'");
}

double KernelSpec::radius(double xi, double y) const {
  switch (radius_map) {
    case RadiusMap::kIdentity:
      return xi;
    case RadiusMap::kScaled:
      return xi * y;
    case RadiusMap::kShifted:
      return std::max(xi + y, kRadiusFloor);
  }
  return xi;
}

nlohmann::json KernelSpec::to_json() const {
  return {{"radius_map", to_string(radius_map)}, {"profile", to_string(profile)}};
}

RealizedKernel realize_kernel(const KernelSpec& spec, double xi, double y) {
  const double r = spec.radius(xi, y);
  if (!std::isfinite(r) || r <= 0.0)
    throw DegenerateKernel("radius map produced a nonpositive radius");
  return RealizedKernel{std::max(r, kRadiusFloor), spec.profile};
}

namespace {

double unit_ball_volume(std::size_t d) {
  const double h = 0.5 * static_cast<double>(d);
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

double unit_sphere_area(std::size_t d) {
  const double h = 0.5 * static_cast<double>(d);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

// Distance from the center as a fraction of the radius.
double radial_fraction(KernelProfile p, std::size_t d, Rng& rng) {
  if (p == KernelProfile::kUniformBall) {
    return std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  }
  // Beta(d, 2): the second largest of d + 1 uniforms.
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i <= d; ++i) {
    const double u = rng.uniform();
    if (u > first) {
      second = first;
      first = u;
    } else if (u > second) {
      second = u;
    }
  }
  return second;
}

}  // namespace

double profile_density(const RealizedKernel& k, std::size_t dim, double rho) {
  if (rho < 0.0 || rho >= k.radius) return 0.0;
  const double rd = std::pow(k.radius, static_cast<double>(dim));
  if (k.profile == KernelProfile::kUniformBall) return 1.0 / (unit_ball_volume(dim) * rd);
  const double d = static_cast<double>(dim);
  return d * (d + 1.0) / (unit_sphere_area(dim) * rd) * (1.0 - rho / k.radius);
}

void sample_transition(const RealizedKernel& k, std::span<const double> source,
                       std::span<double> out, Rng& rng) {
  const std::size_t d = source.size();
  if (out.size() != d) throw InvalidArgument("dimension mismatch");
  for (;;) {
    double norm2 = 0.0;
    if (d == 1) {
      out[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
      norm2 = 1.0;
    } else {
      do {
        norm2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          out[i] = rng.normal();
          norm2 += out[i] * out[i];
        }
      } while (norm2 == 0.0);
    }
    const double scale = k.radius * radial_fraction(k.profile, d, rng) / std::sqrt(norm2);
    double dist2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double step = out[i] * scale;
      out[i] = source[i] + step;
      const double back = out[i] - source[i];
      dist2 += back * back;
    }
    // Rounding can push a point sitting on the sphere outside the open ball.
    if (std::sqrt(dist2) < k.radius) return;
  }
}

Site sample_transition(const RealizedKernel& k, const Site& source, Rng& rng) {
  std::vector<double> out(source.dim());
  sample_transition(k, source.coords(), out, rng);
  return Site(std::move(out));
}

CdfModel radius_law(const KernelSpec& spec, const NoiseDriver& noise, double y) {
  switch (spec.radius_map) {
    case RadiusMap::kIdentity:
      return noise.law();
    case RadiusMap::kScaled:
      if (!(y > 0.0)) throw Unsupported("scaled radius law needs a positive covariate");
      return CdfModel::affine(noise.law(), y, 0.0);
    case RadiusMap::kShifted:
      if (!(noise.law().lower() + y > 0.0))
        throw Unsupported("shifted radius law would put mass on the radius floor");
      return CdfModel::affine(noise.law(), 1.0, y);
  }
  return noise.law();
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
void gauss_legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jj = static_cast<double>(j);
        p1 = ((2.0 * jj + 1.0) * z * p2 - jj * p3) / (jj + 1.0);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

}  // namespace

CdfModel RadiusLimit::mean() const { return CdfModel::mixture(weights, components); }

RadiusLimit limit_radius_law(const KernelSpec& spec, const NoiseDriver& noise,
                             const CovariateProcess& covariate, std::size_t quadrature_nodes) {
  RadiusLimit out;
  const CovariateLimit lim = covariate.limit();
  if (!lim.continuous) {
    for (std::size_t i = 0; i < lim.atoms.size(); ++i) {
      out.components.push_back(radius_law(spec, noise, lim.atoms[i]));
      out.weights.push_back(lim.weights[i]);
    }
    return out;
  }
  if (spec.radius_map == RadiusMap::kIdentity) {
    out.components.push_back(noise.law());
    out.weights.push_back(1.0);
    return out;
  }
  std::vector<double> x, w;
  gauss_legendre(quadrature_nodes, x, w);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double y = lim.continuous->quantile(0.5 * (x[k] + 1.0));
    out.components.push_back(radius_law(spec, noise, y));
    out.weights.push_back(0.5 * w[k]);
  }
  return out;
}

}  // namespace safearea
