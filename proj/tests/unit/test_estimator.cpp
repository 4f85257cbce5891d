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
#include <numeric>

#include "safearea/empirical.hpp"
#include "safearea/error.hpp"
#include "safearea/estimator.hpp"

using namespace safearea;

namespace {

// Smallest t in {0} u radii with #{r > t} / n < theta, by direct scan.
double brute_delta(const std::vector<double>& radii, double theta, bool& feasible) {
  feasible = theta > 0.0;
  if (!feasible) return 0.0;
  std::vector<double> cand = radii;
  cand.push_back(0.0);
  std::sort(cand.begin(), cand.end());
  for (double t : cand) {
    std::size_t c = 0;
    for (double r : radii) c += r > t;
    if (static_cast<double>(c) / radii.size() < theta) return t;
  }
  return cand.back();
}

}  // namespace

TEST_SUITE("estimator") {
  TEST_CASE("threshold examples") {
    const std::vector<double> r = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    auto d = delta_from_threshold(r, 0.15);
    CHECK(d.feasible);
    CHECK(d.delta == 0.8);
    CHECK(d.count_above == 1);

    d = delta_from_threshold(std::vector<double>{1, 2, 3, 4}, 0.5);
    CHECK(d.delta == 3.0);
    CHECK(d.count_above == 1);

    d = delta_from_threshold(std::vector<double>{0, 0, 1}, 0.5);
    CHECK(d.delta == 0.0);
    CHECK(d.count_above == 1);
  }

  TEST_CASE("iid infeasible at small n") {
    const std::vector<double> r = {0.1, 0.2, 0.3, 0.4, 0.5};
    const double c5 = kBridgeSupMean / std::sqrt(5.0);
    const auto d = delta_iid(r, 0.01, ConstantEstimate{c5, 0.0}, CnMethod::kAsymptotic);
    CHECK_FALSE(d.feasible);
    CHECK(d.min_n == 7547);
    CHECK(d.to_json()["delta"].is_null());
    CHECK_THROWS_AS(make_safety_area(SupportSet::ball(Site{0.0, 0.0}, 1.0), d, 0.01), NoFeasibleDelta);
  }

  TEST_CASE("dependent threshold examples") {
    std::vector<double> r(100);
    std::iota(r.begin(), r.end(), 1.0);
    auto d = delta_dependent(r, 0.1, ConstantEstimate{1.358, 0.0});
    CHECK_FALSE(d.feasible);
    CHECK(d.min_n == 185);

    r.resize(400);
    std::iota(r.begin(), r.end(), 1.0);
    d = delta_dependent(r, 0.1, ConstantEstimate{1.358, 0.0});
    CHECK(d.feasible);
    CHECK(d.delta == 388.0);
    CHECK(d.count_above == 12);
    CHECK(d.constant_name == "c_alpha");

    r[0] = 0.0;
    d = delta_dependent(r, 1.0 - 1e-12, ConstantEstimate{1e-6, 0.0});
    CHECK(d.delta == 0.0);
  }

  TEST_CASE("min_n formulas") {
    CHECK(min_n_dependent(0.1, 1.358) == 185);
    CHECK(min_n_dependent(0.5, 1.0) == 5);
    CHECK(min_n_iid(0.1, CnMethod::kAsymptotic) == 76);
    CHECK(min_n_iid(0.1, CnMethod::kDkw, 0.05) == 185);
  }

  TEST_CASE("threshold matches a brute-force scan") {
    Rng rng(81);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + rng.below(40);
      std::vector<double> r(n);
      for (auto& x : r) x = rng.uniform() < 0.2 ? 0.0 : std::round(rng.uniform(0.0, 5.0) * 4.0) / 4.0;
      const double theta = rng.uniform(-0.1, 1.0);
      bool feasible = false;
      const double expect = brute_delta(r, theta, feasible);
      const auto d = delta_from_threshold(r, theta);
      CHECK(d.feasible == feasible);
      if (feasible) {
        CHECK(d.delta == expect);
        std::size_t c = 0;
        for (double x : r) c += x > d.delta;
        CHECK(d.count_above == c);
      }
    }
  }

  TEST_CASE("delta is monotone in the threshold") {
    Rng rng(82);
    std::vector<double> r(200);
    for (auto& x : r) x = rng.uniform();
    double prev = 1e9;
    for (double theta = 0.01; theta < 1.0; theta += 0.01) {
      const auto d = delta_from_threshold(r, theta);
      CHECK(d.delta <= prev);
      prev = d.delta;
    }
  }

  TEST_CASE("delta depends only on the past") {
    Rng rng(83);
    std::vector<double> r(50);
    for (auto& x : r) x = rng.uniform();
    const auto before = delta_from_threshold(std::span<const double>(r).first(40), 0.2);
    r[45] = 100.0;
    const auto after = delta_from_threshold(std::span<const double>(r).first(40), 0.2);
    CHECK(before.delta == after.delta);
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(delta_from_threshold(std::vector<double>{}, 0.1), InvalidArgument);
    CHECK_THROWS_AS(delta_from_threshold(std::vector<double>{-1.0}, 0.1), InvalidArgument);
    CHECK_THROWS_AS(delta_from_threshold(std::vector<double>{NAN}, 0.1), InvalidArgument);
    CHECK_THROWS_AS(delta_iid(std::vector<double>{1.0}, 1.5, ConstantEstimate{}), InvalidArgument);
    CHECK_THROWS_AS(parse_cn_method("bogus"), InvalidArgument);
  }

  TEST_CASE("cn methods") {
    IidEstimatorConfig cfg;
    cfg.reps = 2000;
    Rng rng(84);
    cfg.cn_method = CnMethod::kAsymptotic;
    CHECK(estimate_cn(100, cfg, rng).value == doctest::Approx(kBridgeSupMean / 10.0));
    cfg.cn_method = CnMethod::kDkw;
    CHECK(estimate_cn(100, cfg, rng).value == doctest::Approx(std::sqrt(std::log(40.0) / 200.0)));
    cfg.cn_method = CnMethod::kMonteCarlo;
    const auto mc = estimate_cn(100, cfg, rng);
    CHECK(std::abs(mc.value - kBridgeSupMean / 10.0) < 0.01);
    CHECK(mc.se > 0.0);
    CHECK(parse_cn_method(to_string(CnMethod::kDkw)) == CnMethod::kDkw);
    CHECK(parse_cn_method("mc") == CnMethod::kMonteCarlo);
  }

  TEST_CASE("safety area from a feasible result") {
    const std::vector<double> r = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const auto d = delta_from_threshold(r, 0.15);
    const auto k = make_safety_area(SupportSet::ball(Site{0.0, 0.0}, 1.0), d, 0.05);
    CHECK(k.delta == 0.8);
    CHECK_FALSE(k.contains(Site{1.5, 0.0}));
    CHECK(k.contains(Site{1.9, 0.0}));
  }
}
