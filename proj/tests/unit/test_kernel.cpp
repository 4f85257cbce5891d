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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "safearea/error.hpp"
#include "safearea/evolution.hpp"
#include "safearea/kernel.hpp"

using namespace safearea;

namespace {

// Simpson rule on [a, b] with an even number of panels.
template <typename F>
double simpson(F f, double a, double b, int panels = 2000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double sphere_area(std::size_t d) {
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("realize_kernel examples") {
    KernelSpec id;
    CHECK(realize_kernel(id, 0.3, 7.0).radius == 0.3);
    KernelSpec sc{RadiusMap::kScaled, KernelProfile::kUniformBall};
    CHECK(realize_kernel(sc, 0.3, 2.0).radius == doctest::Approx(0.6));
    KernelSpec sh{RadiusMap::kShifted, KernelProfile::kUniformBall};
    CHECK(realize_kernel(sh, 0.3, 0.2).radius == doctest::Approx(0.5));
    CHECK(realize_kernel(sh, 0.3, -5.0).radius == kRadiusFloor);
    CHECK(realize_kernel(id, 1e-300, 0.0).radius == kRadiusFloor);
  }

  TEST_CASE("nonpositive radius is a degenerate kernel") {
    KernelSpec id;
    CHECK_THROWS_AS(realize_kernel(id, 0.0, 1.0), DegenerateKernel);
    CHECK_THROWS_AS(realize_kernel(id, -0.1, 1.0), DegenerateKernel);
    KernelSpec sc{RadiusMap::kScaled, KernelProfile::kUniformBall};
    CHECK_THROWS_AS(realize_kernel(sc, 0.5, -1.0), DegenerateKernel);
    CHECK_THROWS_AS(realize_kernel(id, std::nan(""), 1.0), DegenerateKernel);
  }

  TEST_CASE("profiles carry unit mass on the ball") {
    Rng rng(31);
    for (auto profile : {KernelProfile::kUniformBall, KernelProfile::kTriangularRadial}) {
      for (std::size_t d : {1, 2, 3}) {
        for (int i = 0; i < 100; ++i) {
          const KernelSpec spec{RadiusMap::kScaled, profile};
          const auto k = realize_kernel(spec, rng.uniform(0.05, 1.0), rng.uniform(0.5, 3.0));
          const double mass = simpson(
              [&](double rho) {
                const double shell = d == 1 ? 2.0 : sphere_area(d) * std::pow(rho, d - 1.0);
                return profile_density(k, d, rho) * shell;
              },
              0.0, k.radius * (1.0 - 1e-12));
          CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
          CHECK(profile_density(k, d, k.radius) == 0.0);
        }
      }
    }
  }

  TEST_CASE("transitions stay in the open ball and reach its rim") {
    Rng rng(32);
    for (auto profile : {KernelProfile::kUniformBall, KernelProfile::kTriangularRadial}) {
      const RealizedKernel k{1.0, profile};
      const Site s{0.0, 0.0};
      int rim = 0;
      double max_dist = 0.0;
      for (int i = 0; i < 100000; ++i) {
        const double dist = distance(sample_transition(k, s, rng), s);
        max_dist = std::max(max_dist, dist);
        if (dist > 0.99) ++rim;
      }
      CHECK(max_dist < 1.0);
      CHECK(rim > 0);
    }
  }

  TEST_CASE("uniform ball in one dimension is centred") {
    Rng rng(33);
    const RealizedKernel k{2.0, KernelProfile::kUniformBall};
    const int n = 100000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += sample_transition(k, Site{5.0}, rng)[0];
    const double se = 2.0 / std::sqrt(3.0) / std::sqrt(n);
    CHECK(std::abs(s / n - 5.0) < 3.0 * se);
  }

  TEST_CASE("uniform ball in two dimensions has mean squared displacement 1/2") {
    const double oracle = simpson([](double rho) { return rho * rho * 2.0 * rho; }, 0.0, 1.0);
    CHECK(oracle == doctest::Approx(0.5));
    Rng rng(34);
    const RealizedKernel k{1.0, KernelProfile::kUniformBall};
    const int n = 100000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const Site x = sample_transition(k, Site{0.0, 0.0}, rng);
      s += x[0] * x[0] + x[1] * x[1];
    }
    CHECK(std::abs(s / n - oracle) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  }

  TEST_CASE("triangular radial profile has the expected mean radius") {
    // rho / r ~ Beta(d, 2) in d dimensions: mean d / (d + 2).
    Rng rng(35);
    for (std::size_t d : {1, 2, 3}) {
      const RealizedKernel k{1.0, KernelProfile::kTriangularRadial};
      const int n = 50000;
      double s = 0.0;
      std::vector<double> src(d, 0.0), out(d);
      for (int i = 0; i < n; ++i) {
        sample_transition(k, src, out, rng);
        double r2 = 0.0;
        for (double v : out) r2 += v * v;
        s += std::sqrt(r2);
      }
      const double mean = double(d) / (d + 2.0);
      CHECK(std::abs(s / n - mean) < 0.01);
    }
  }

  TEST_CASE("covariate gap: constant is zero") {
    Rng rng(36);
    const auto y = CovariateProcess::constant(2.5);
    for (std::size_t n : {1, 10, 1000}) CHECK(covariate_ecdf_gap(y, n, rng) == 0.0);
  }

  TEST_CASE("covariate gap: cycle matches residue counting") {
    Rng rng(37);
    const auto y = CovariateProcess::cycle({1.0, 2.0, 3.0, 4.0});
    for (std::size_t n : {1, 2, 3, 5, 7, 100, 399, 400, 401}) {
      // Oracle: count residues directly.
      double sup = 0.0;
      for (int atom = 1; atom <= 4; ++atom) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (static_cast<int>(i % 4) + 1 <= atom) ++count;
        sup = std::max(sup, std::abs(double(count) / n - atom / 4.0));
      }
      const double gap = covariate_ecdf_gap(y, n, rng);
      CHECK(gap == doctest::Approx(std::sqrt(double(n)) * sup).epsilon(1e-12));
      CHECK(gap <= std::sqrt(double(n)) / n + 1e-12);
    }
    CHECK(covariate_ecdf_gap(y, 400, rng) <= 0.05);
  }

  TEST_CASE("covariate gap: low discrepancy vanishes") {
    Rng rng(38);
    const auto y = CovariateProcess::low_discrepancy(1.0, 2.0);
    const double g1 = covariate_ecdf_gap(y, 1000, rng);
    const double g2 = covariate_ecdf_gap(y, 100000, rng);
    CHECK(g2 < g1);
    // Star discrepancy of van der Corput: N * D_N <= log N / (3 log 2) + 1.
    const double n = 100000.0;
    CHECK(g2 <= std::sqrt(n) * (std::log(n) / (3.0 * std::log(2.0)) + 1.0) / n);
  }

  TEST_CASE("covariate gap: iid does not vanish") {
    Rng rng(39);
    const auto y = CovariateProcess::iid(CdfModel::uniform(0.0, 1.0));
    CHECK(y.assumption_violating());
    std::vector<double> gaps;
    for (int i = 0; i < 200; ++i) gaps.push_back(covariate_ecdf_gap(y, 10000, rng));
    std::nth_element(gaps.begin(), gaps.begin() + 100, gaps.end());
    CHECK(gaps[100] > 0.5);
  }

  TEST_CASE("van der Corput sequence") {
    CHECK(van_der_corput(1) == 0.5);
    CHECK(van_der_corput(2) == 0.25);
    CHECK(van_der_corput(3) == 0.75);
    CHECK(van_der_corput(6) == 0.375);
  }

  TEST_CASE("noise is independent of the covariate path") {
    EpidemicConfig a;
    a.kernel.radius_map = RadiusMap::kScaled;
    a.covariate = CovariateProcess::cycle({1.0, 2.0, 3.0});
    EpidemicConfig b = a;
    b.covariate = CovariateProcess::cycle({3.0, 1.0, 2.0});
    SimulationStreams sa(99), sb(99);
    const auto da = draw_radii(a, 50, sa);
    const auto db = draw_radii(b, 50, sb);
    CHECK(da.noise == db.noise);
    CHECK(da.radii != db.radii);
  }

  TEST_CASE("kernel sequences are deterministic") {
    EpidemicConfig cfg;
    cfg.covariate = CovariateProcess::iid(CdfModel::uniform(1.0, 2.0));
    cfg.kernel.radius_map = RadiusMap::kScaled;
    SimulationStreams s1(5), s2(5);
    const auto d1 = draw_radii(cfg, 100, s1);
    const auto d2 = draw_radii(cfg, 100, s2);
    CHECK(d1.radii == d2.radii);
    CHECK(d1.covariates == d2.covariates);
  }

  TEST_CASE("limit radius law for a two-value cycle") {
    const KernelSpec spec{RadiusMap::kScaled, KernelProfile::kUniformBall};
    const auto lim = limit_radius_law(spec, NoiseDriver::uniform(0.0, 1.0), CovariateProcess::cycle({1.0, 2.0}));
    const CdfModel f = lim.mean();
    for (double t : {0.1, 0.5, 0.99, 1.0, 1.5, 2.0, 2.5})
      CHECK(f.cdf(t) == doctest::Approx(0.5 * (std::min(t, 1.0) + std::min(t / 2.0, 1.0))));
  }

  TEST_CASE("limit radius law for a continuous covariate limit") {
    const KernelSpec spec{RadiusMap::kScaled, KernelProfile::kUniformBall};
    const auto lim = limit_radius_law(spec, NoiseDriver::uniform(0.0, 1.0),
                                      CovariateProcess::low_discrepancy(1.0, 2.0));
    const CdfModel f = lim.mean();
    // F(t) = int_1^2 min(t / y, 1) dy.
    CHECK(f.cdf(0.5) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-9));
    const double t = 1.5;
    // The kink at y = t limits 64-node quadrature to about 1e-5.
    CHECK(std::abs(f.cdf(t) - (0.5 + t * std::log(2.0 / 1.5))) < 1e-4);
  }

  TEST_CASE("radius law of the shifted map") {
    const KernelSpec spec{RadiusMap::kShifted, KernelProfile::kUniformBall};
    const auto f = radius_law(spec, NoiseDriver::uniform(0.0, 1.0), 0.5);
    CHECK(f.cdf(1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(radius_law(spec, NoiseDriver::uniform(0.0, 1.0), -0.5), Unsupported);
  }

  TEST_CASE("noise draws stay in the declared support") {
    Rng rng(40);
    for (const auto& nd : {NoiseDriver::uniform(0.2, 0.7), NoiseDriver::beta(2.0, 5.0, 3.0),
                           NoiseDriver::trunc_exp(3.0, 0.5)}) {
      for (int i = 0; i < 20000; ++i) {
        const double x = nd.draw(rng);
        REQUIRE(x >= nd.law().lower());
        REQUIRE(x <= nd.law().upper());
      }
    }
  }
}
