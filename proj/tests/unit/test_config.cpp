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

#include <cmath>

#include "safearea/config.hpp"
#include "safearea/error.hpp"

using namespace safearea;

namespace {

// Replaces the default-scenario line that starts with `prefix`.
std::string with(const std::string& prefix, const std::string& replacement,
                 std::string s = default_scenario_toml()) {
  const auto pos = s.find("\n" + prefix);
  REQUIRE(pos != std::string::npos);
  const auto eol = s.find('\n', pos + 1);
  s.replace(pos + 1, eol - pos - 1, replacement);
  return s;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("toml scalars and arrays") {
    const auto j = parse_toml(R"(
top = "x"  # trailing comment
[a]
i = -42
f = 1.5e3
u = 1_000
t = true
s = 'lit\n'
e = "esc\t\"q\""
inf = inf
arr = [1, 2.5,
       3]  # multiline
nested = [[0.0, 1.0], [2.0, 3.0]]
inl = { x = 1, y = "z" }
[a.b]
k = false
)");
    CHECK(j["top"] == "x");
    CHECK(j["a"]["i"] == -42);
    CHECK(j["a"]["i"].is_number_integer());
    CHECK(j["a"]["f"].get<double>() == 1500.0);
    CHECK(j["a"]["u"] == 1000);
    CHECK(j["a"]["t"] == true);
    CHECK(j["a"]["s"] == "lit\\n");
    CHECK(j["a"]["e"] == "esc\t\"q\"");
    CHECK(std::isinf(j["a"]["inf"].get<double>()));
    CHECK(j["a"]["arr"].size() == 3);
    CHECK(j["a"]["nested"][1][0].get<double>() == 2.0);
    CHECK(j["a"]["inl"]["y"] == "z");
    CHECK(j["a"]["b"]["k"] == false);
  }

  TEST_CASE("toml errors") {
    CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), ValidationError);
    CHECK_THROWS_AS(parse_toml("[t]\n[t]\n"), ValidationError);
    CHECK_THROWS_AS(parse_toml("a = \n"), ValidationError);
    CHECK_THROWS_AS(parse_toml("a = [1, 2\n"), ValidationError);
    CHECK_THROWS_AS(parse_toml("a = \"open\n"), ValidationError);
    try {
      parse_toml("x = 1\n\ny = @\n");
      FAIL("expected a parse error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
  }

  TEST_CASE("default scenario parses") {
    const auto cfg = parse_scenario(default_scenario_toml());
    CHECK(cfg.dimension == 2);
    CHECK(cfg.horizon == 200);
    CHECK(cfg.replications == 2000);
    CHECK(cfg.ladder() == std::vector<std::size_t>{200});
    CHECK(cfg.estimator.mode == EstimatorMode::kIid);
    CHECK(cfg.estimator.alpha == 0.1);
    CHECK(cfg.s0.dim() == 2);
    CHECK(diameter(cfg.s0) == 0.0);
    CHECK(cfg.iid_radius_law().cdf(0.5) == doctest::Approx(0.5));
    const auto echo = cfg.to_json();
    CHECK(echo.is_object());
    CHECK(scenario_from_json(parse_toml(default_scenario_toml())).to_json() == echo);
  }

  TEST_CASE("scenario variants") {
    auto cfg = parse_scenario(with("kind", "kind = \"ball\"\nradius = 2.0"));
    CHECK(diameter(cfg.s0) == 4.0);

    cfg = parse_scenario(with("value", "values = [1.0, 2.0]", with("mode = \"constant\"", "mode = \"cycle\"")));
    CHECK(cfg.covariate.mode() == CovariateProcess::Mode::kCycle);

    cfg = parse_scenario(with("b = ", "", with("a = ", "p = 2.0\nq = 5.0", with("family", "family = \"beta\""))));
    CHECK(cfg.noise.family() == NoiseDriver::Family::kBeta);

    cfg = parse_scenario(with("n_ladder", "n_ladder = [50, 100]"));
    CHECK(cfg.ladder() == std::vector<std::size_t>{50, 100});
  }

  TEST_CASE("unknown keys and tables are rejected") {
    CHECK_THROWS_AS(parse_scenario(default_scenario_toml() + "\n[bogus]\nx = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario(with("seed = 1", "seed = 1\nsede = 2")), ValidationError);
  }

  TEST_CASE("validation errors") {
    CHECK_THROWS_AS(parse_scenario(with("dimension", "dimension = 0")), ValidationError);
    CHECK_THROWS_AS(parse_scenario(with("alpha", "alpha = 1.5")), ValidationError);
    CHECK_THROWS_AS(parse_scenario(with("horizon", "horizon = \"x\"")), ValidationError);
    CHECK_THROWS_AS(parse_scenario(with("a = ", "a = 2.0")), ValidationError);
    CHECK_THROWS_AS(parse_scenario(with("cn_method", "cn_method = \"x\"")), ValidationError);
    CHECK_THROWS_AS(parse_scenario(with("center", "center = [0.0]")), ValidationError);
    CHECK_THROWS_AS(parse_scenario(with("kind", "kind = \"cube\"")), ValidationError);
  }

  TEST_CASE("cross-table checks") {
    const std::string iid_cov =
        with("value", "lo = 0.5\nhi = 1.5", with("mode = \"constant\"", "mode = \"iid\""));
    CHECK_NOTHROW(parse_scenario(iid_cov));
    const std::string scaled = with("radius_map", "radius_map = \"scaled\"", iid_cov);
    CHECK_THROWS_AS(parse_scenario(scaled), ValidationError);

    const std::string dep = with("value", "lo = 0.5\nhi = 1.5",
                                 with("mode = \"constant\"", "mode = \"iid\"",
                                      with("mode = \"iid\"", "mode = \"dependent\"")));
    CHECK_THROWS_AS(parse_scenario(dep), ValidationError);
    const auto cfg = parse_scenario(with("allow_violations", "allow_violations = true", dep));
    CHECK(cfg.covariate.assumption_violating());

    const std::string negative = with("value", "value = -1.0",
                                      with("radius_map", "radius_map = \"scaled\""));
    CHECK_THROWS_AS(parse_scenario(negative), ValidationError);
  }
}
