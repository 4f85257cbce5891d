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

#include "safearea/empirical.hpp"
#include "safearea/error.hpp"

using namespace safearea;

TEST_SUITE("empirical") {
  TEST_CASE("ecdf examples") {
    const auto e = ecdf({3.0, 1.0, 2.0});
    CHECK(e(2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(e(0.5) == 0.0);
    CHECK(e(3.0) == 1.0);
    const auto one = ecdf({5.0});
    CHECK(one(4.9) == 0.0);
    CHECK(one(5.0) == 1.0);
    const auto ties = ecdf({1.0, 1.0, 2.0, 2.0});
    CHECK(ties(1.0) == 0.5);
    CHECK_THROWS_AS(ecdf({}), InvalidArgument);
  }

  TEST_CASE("ks statistic examples") {
    const auto u = CdfModel::uniform(0.0, 1.0);
    CHECK(ks_statistic(ecdf({0.5}), u) == 0.5);
    const auto b = CdfModel::beta(2.0, 5.0);
    for (std::size_t n : {3, 10, 57}) {
      std::vector<double> xs;
      for (std::size_t i = 1; i <= n; ++i) xs.push_back(b.quantile((i - 0.5) / n));
      CHECK(ks_statistic(ecdf(xs), b) == doctest::Approx(0.5 / n).epsilon(1e-9));
    }
  }

  TEST_CASE("ks statistic matches a dense scan") {
    Rng rng(41);
    const auto u = CdfModel::uniform(0.0, 1.0);
    std::vector<double> xs(20);
    for (double& x : xs) x = rng.uniform();
    const auto e = ecdf(xs);
    // Dense scan of both one-sided limits.
    double scan = 0.0;
    for (double x : e.sorted()) {
      scan = std::max(scan, std::abs(e(x) - x));
      scan = std::max(scan, std::abs(e(std::nextafter(x, 0.0)) - x));
    }
    CHECK(ks_statistic(e, u) == doctest::Approx(scan).epsilon(1e-12));
  }

  TEST_CASE("kolmogorov cdf values") {
    CHECK(kolmogorov_cdf(0.0) == 0.0);
    CHECK(kolmogorov_cdf(1.3581) == doctest::Approx(0.95).epsilon(0.0005 / 0.95));
    CHECK(std::abs(kolmogorov_cdf(0.8276) - 0.5) < 0.0005);
    CHECK(kolmogorov_cdf(10.0) == 1.0);
    CHECK_THROWS_AS(kolmogorov_cdf(-0.1), InvalidArgument);
  }

  TEST_CASE("kolmogorov series forms agree where both converge") {
    for (double x = 0.5; x <= 1.5; x += 0.05) {
      double s = 0.0;
      for (int k = 1; k < 200; ++k) s += (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
      CHECK(kolmogorov_cdf(x) == doctest::Approx(1.0 - 2.0 * s).epsilon(1e-10));
    }
  }

  TEST_CASE("kolmogorov quantile") {
    CHECK(std::abs(kolmogorov_quantile(0.95) - 1.3581) < 1e-3);
    CHECK(std::abs(kolmogorov_quantile(0.99) - 1.6276) < 1e-3);
    for (int i = 1; i <= 99; ++i) {
      const double p = i / 100.0;
      CHECK(std::abs(kolmogorov_cdf(kolmogorov_quantile(p)) - p) < 1e-6);
    }
    CHECK_THROWS_AS(kolmogorov_quantile(0.0), InvalidArgument);
    CHECK_THROWS_AS(kolmogorov_quantile(1.0), InvalidArgument);
  }

  TEST_CASE("kolmogorov cdf is nondecreasing") {
    double prev = 0.0;
    for (double x = 0.0; x < 4.0; x += 0.001) {
      const double v = kolmogorov_cdf(x);
      CHECK(v >= prev);
      prev = v;
    }
    CHECK(prev == doctest::Approx(1.0));
  }

  TEST_CASE("expected ks sup at n = 1 is 3/4") {
    Rng rng(42);
    const auto e = expected_ks_sup(1, CdfModel::beta(2.0, 5.0), 40000, rng);
    CHECK(std::abs(e.mean - 0.75) < 3.0 * e.se);
  }

  TEST_CASE("expected ks sup is pivotal") {
    Rng r1(43), r2(44);
    const auto a = expected_ks_sup(50, CdfModel::uniform(0.0, 1.0), 20000, r1);
    const auto b = expected_ks_sup(50, CdfModel::beta(2.0, 5.0), 20000, r2);
    CHECK(std::abs(a.mean - b.mean) < 3.0 * std::hypot(a.se, b.se));
  }

  TEST_CASE("expected ks sup does not depend on the worker count") {
    Rng r1(45), r2(45);
    const auto a = expected_ks_sup(30, CdfModel::uniform(0.0, 1.0), 1000, r1, 1);
    const auto b = expected_ks_sup(30, CdfModel::uniform(0.0, 1.0), 1000, r2, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.se == b.se);
  }

  TEST_CASE("scaled ks statistic follows the kolmogorov law") {
    Rng rng(46);
    const std::size_t n = 1000, reps = 2000;
    const auto f = CdfModel::trunc_exp(2.0, 3.0);
    std::vector<double> stats;
    std::vector<double> xs(n);
    for (std::size_t r = 0; r < reps; ++r) {
      for (double& x : xs) x = f.sample(rng);
      stats.push_back(std::sqrt(double(n)) * ks_statistic(ecdf(xs), f));
    }
    std::sort(stats.begin(), stats.end());
    double d = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
      const double k = kolmogorov_cdf(stats[i]);
      d = std::max({d, (i + 1.0) / reps - k, k - double(i) / reps});
    }
    CHECK(d < 1.63 / std::sqrt(double(reps)));
  }
}
