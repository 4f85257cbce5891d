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

#include <Eigen/Eigenvalues>

#include "safearea/empirical.hpp"
#include "safearea/error.hpp"
#include "safearea/limit_process.hpp"

using namespace safearea;

TEST_SUITE("limit_process") {
  TEST_CASE("single component gives the bridge covariance") {
    const auto f = CdfModel::beta(2.0, 5.0);
    const auto m = build_limit_model({f}, default_grid(f, 20));
    for (std::size_t i = 0; i < m.grid.size(); ++i)
      for (std::size_t j = i; j < m.grid.size(); ++j)
        CHECK(m.gram(i, j) == doctest::Approx(f.cdf(m.grid[i]) * (1.0 - f.cdf(m.grid[j]))));
  }

  TEST_CASE("two uniform components, hand evaluation") {
    const auto m = build_limit_model({CdfModel::uniform(0, 1), CdfModel::uniform(0, 2)}, {0.5, 1.0, 1.5});
    CHECK(m.covariance(0.5, 0.5) == doctest::Approx((0.5 * 0.5 + 0.25 * 0.75) / 2.0));
    CHECK(m.gram(0, 0) == doctest::Approx(0.21875));
    CHECK(m.gram(0, 1) == doctest::Approx((0.5 * 0.0 + 0.25 * 0.5) / 2.0));
    CHECK(m.mean_cdf.cdf(1.0) == doctest::Approx(0.75));
  }

  TEST_CASE("gram is symmetric, PSD and bounded by 1/4") {
    Rng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<CdfModel> comps;
      const int k = 1 + static_cast<int>(rng.below(4));
      for (int c = 0; c < k; ++c) {
        if (rng.uniform() < 0.5) {
          comps.push_back(CdfModel::uniform(0.0, rng.uniform(0.5, 2.0)));
        } else {
          comps.push_back(CdfModel::beta(rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0)));
        }
      }
      const auto m = build_limit_model(comps, default_grid(CdfModel::equal_mixture(comps), 64));
      CHECK((m.gram - m.gram.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(m.gram.diagonal().maxCoeff() <= 0.25);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.gram);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
  }

  TEST_CASE("degenerate covariance gives zero sups") {
    const auto m = build_limit_model({CdfModel::uniform(1.0, 2.0)}, {0.1, 0.5, 0.9});
    Rng rng(52);
    const auto s = simulate_limit_sup(m, 100, rng);
    CHECK(std::all_of(s.begin(), s.end(), [](double v) { return v == 0.0; }));
  }

  TEST_CASE("non-PSD covariance is rejected") {
    auto m = bridge_model(4);
    m.gram = Eigen::MatrixXd::Identity(4, 4);
    m.gram(0, 1) = m.gram(1, 0) = 2.0;
    Rng rng(53);
    CHECK_THROWS_AS(simulate_limit_sup(m, 10, rng), CovarianceError);
  }

  TEST_CASE("bridge sup quantiles match the kolmogorov law") {
    Rng rng(54);
    const auto s = simulate_limit_sup(bridge_model(128), 20000, rng);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::abs(upper_quantile(s, 0.05) - kolmogorov_quantile(0.95)) < 0.03);
    CHECK(std::abs(upper_quantile(s, 0.5) - kolmogorov_quantile(0.5)) < 0.03);
  }

  TEST_CASE("grid max sits below the interpolated sup") {
    Rng r1(55), r2(55);
    LimitSimOptions grid_only;
    grid_only.mode = SupMode::kGridMax;
    const auto g = simulate_limit_sup(bridge_model(64), 5000, r1, grid_only);
    const auto b = simulate_limit_sup(bridge_model(64), 5000, r2);
    double mg = 0.0, mb = 0.0;
    for (double v : g) mg += v;
    for (double v : b) mb += v;
    CHECK(mg < mb);
  }

  TEST_CASE("c_alpha decreases in alpha") {
    const auto m = bridge_model(64);
    double prev = 1e9;
    for (double a : {0.01, 0.05, 0.1, 0.5, 0.9}) {
      Rng rng(56);
      const double c = c_alpha(m, a, 5000, rng);
      CHECK(c < prev);
      prev = c;
    }
    Rng rng(56);
    CHECK_THROWS_AS(c_alpha(m, 1.0, 10, rng), InvalidArgument);
  }

  TEST_CASE("simulation does not depend on the worker count") {
    LimitSimOptions one, four;
    one.workers = 1;
    four.workers = 4;
    Rng r1(57), r2(57);
    CHECK(simulate_limit_sup(bridge_model(32), 1000, r1, one) ==
          simulate_limit_sup(bridge_model(32), 1000, r2, four));
  }

  TEST_CASE("modulus of continuity examples") {
    const auto u = CdfModel::uniform(0.0, 1.0);
    CHECK(modulus_of_continuity(u, 0.1) == doctest::Approx(0.1));
    CHECK(modulus_of_continuity(u, 0.0) == 0.0);
    CHECK(modulus_of_continuity(u, 2.0) == doctest::Approx(1.0));
  }

  TEST_CASE("modulus of mixtures matches a dense scan") {
    const std::vector<CdfModel> laws = {
        CdfModel::mixture({1.0, 2.0}, {CdfModel::uniform(0.0, 0.3), CdfModel::beta(5.0, 2.0)}),
        CdfModel::equal_mixture({CdfModel::beta(0.7, 3.0), CdfModel::trunc_exp(4.0, 2.0)}),
        CdfModel::equal_mixture({CdfModel::uniform(0.0, 1.0), CdfModel::uniform(0.0, 2.0)})};
    for (const auto& f : laws) {
      for (double delta : {0.01, 0.05, 0.2}) {
        const double lo = f.lower() - delta;
        const double hi = f.upper();
        // Support endpoints join the scan; the beta density is unbounded at 0.
        double scan = std::max(f.cdf(f.lower() + delta), 1.0 - f.cdf(f.upper() - delta));
        const int pts = 1000000;
        for (int i = 0; i <= pts; ++i) {
          const double t = lo + (hi - lo) * i / pts;
          scan = std::max(scan, f.cdf(t + delta) - f.cdf(t));
        }
        CHECK(std::abs(modulus_of_continuity(f, delta) - scan) < 1e-6);
      }
    }
  }

  TEST_CASE("averaged modulus shrinks with delta") {
    const auto m = build_limit_model({CdfModel::uniform(0, 1), CdfModel::beta(2, 5)}, {0.2, 0.5});
    double prev = 2.0;
    for (double d : {0.5, 0.2, 0.1, 0.01, 0.001}) {
      const auto r = averaged_modulus(m, d);
      CHECK(r.value <= prev);
      CHECK(r.value >= 0.0);
      CHECK(r.per_component.size() == 2);
      prev = r.value;
    }
  }

  TEST_CASE("findim test: identical uniforms") {
    Rng rng(58);
    const auto r = findim_gaussian_test({CdfModel::uniform(0, 1)}, {0.5}, 500, 4000, rng);
    REQUIRE(r.marginals.size() == 1);
    CHECK(r.marginals[0].variance_limit == doctest::Approx(0.25));
    CHECK(std::abs(r.marginals[0].variance_empirical - 0.25) < 0.03);
    CHECK(r.pass);
  }

  TEST_CASE("findim test: endpoint has zero variance") {
    Rng rng(59);
    const auto r = findim_gaussian_test({CdfModel::uniform(0, 1)}, {0.0, 1.0, 0.3}, 100, 200, rng);
    CHECK(r.marginals[0].degenerate);
    CHECK(r.marginals[1].degenerate);
    CHECK_FALSE(r.marginals[0].rejected);
    CHECK_FALSE(r.marginals[1].rejected);
    CHECK(r.marginals[0].variance_empirical == 0.0);
  }

  TEST_CASE("findim test: heterogeneous components") {
    Rng rng(60);
    const std::vector<CdfModel> comps = {CdfModel::uniform(0, 1), CdfModel::uniform(0, 2)};
    const auto r = findim_gaussian_test(comps, {0.5, 1.0}, 500, 4000, rng);
    const auto m = build_limit_model(comps, {0.5, 1.0});
    REQUIRE(r.covariances.size() == 1);
    CHECK(r.covariances[0].expected == doctest::Approx(m.gram(0, 1)));
    CHECK(r.covariances[0].within);
    CHECK(r.pass);
  }
}
