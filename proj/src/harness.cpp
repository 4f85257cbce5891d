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

#include "safearea/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "safearea/error.hpp"
#include "safearea/parallel.hpp"

namespace safearea {

using nlohmann::json;

bool CoverageCell::within(double target, double k) const {
  return !coverage || *coverage <= target + k * se;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::size_t> sorted_ladder(const ScenarioConfig& cfg) {
  auto l = cfg.ladder();
  std::sort(l.begin(), l.end());
  l.erase(std::unique(l.begin(), l.end()), l.end());
  return l;
}

std::vector<double> replication_radii(const ScenarioConfig& cfg, const EpidemicConfig& epi,
                                      std::size_t count, std::size_t rep) {
  SimulationStreams streams(derive_seed(cfg.seed, {stream::kReplication, rep}));
  if (cfg.simulate_full) return extract_radii(run_epidemic(epi, count, streams));
  return draw_radii(epi, count, streams).radii;
}

// Geometric form of the breach event for replication radii r_1..r_{n+1}:
// intersect K = (S_n^delta)^c with S_{n+1} through the support chain and
// through the farthest point of S_{n+1} along the first axis.
bool geometric_agrees(const SupportSet& s0, std::span<const double> radii, std::size_t n,
                      double delta, double level) {
  const AnalyticChain chain = analytic_chain(s0, radii.subspan(0, n + 1));
  const SafetyArea k(chain.supports[n], delta, level);
  const bool expected = radii[n] > delta;
  bool ok = breach(k, chain.supports[n + 1]) == expected;
  if (const auto* b = s0.as_ball()) {
    double reach = b->radius;
    for (std::size_t i = 0; i <= n; ++i) reach += radii[i];
    std::vector<double> x(b->center.coords().begin(), b->center.coords().end());
    x[0] += reach;
    ok = ok && k.contains(x) == expected;
  }
  return ok;
}

void aggregate(CoverageCell& cell) {
  cell.m = cell.per_rep.size();
  cell.feasible = 0;
  cell.breaches = 0;
  for (const auto& r : cell.per_rep) {
    if (!r.feasible) continue;
    ++cell.feasible;
    if (r.breach) ++cell.breaches;
  }
  if (cell.feasible > 0) {
    const double p = static_cast<double>(cell.breaches) / static_cast<double>(cell.feasible);
    cell.coverage = p;
    cell.se = std::sqrt(p * (1.0 - p) / static_cast<double>(cell.feasible));
  }
}

// Half the spread between order statistics one binomial SD either side of the
// (1 - alpha) rank, divided by two SDs: a plain standard error for a quantile.
double quantile_se(const std::vector<double>& sorted, double alpha) {
  const double p = static_cast<double>(sorted.size());
  const double h = std::ceil(std::sqrt(p * alpha * (1.0 - alpha)));
  const double k = std::ceil((1.0 - alpha) * p) - 1.0;
  const auto lo = static_cast<std::size_t>(std::max(0.0, k - h));
  const auto hi = static_cast<std::size_t>(std::min(p - 1.0, k + h));
  return 0.5 * (sorted[hi] - sorted[lo]);
}

}  // namespace

CoverageReport run_coverage_iid(const ScenarioConfig& cfg) {
  if (cfg.estimator.mode != EstimatorMode::kIid)
    throw ValidationError("run_coverage_iid needs estimator.mode = iid");
  CoverageReport rep;
  rep.regime = "iid";
  rep.alpha = cfg.estimator.alpha;
  rep.assumption_violating = cfg.covariate.assumption_violating();
  rep.scenario = cfg.to_json();

  IidEstimatorConfig ic;
  ic.alpha = cfg.estimator.alpha;
  ic.f0 = cfg.iid_radius_law();
  ic.cn_method = cfg.estimator.cn_method;
  ic.reps = cfg.estimator.cn_reps;
  ic.dkw_beta = cfg.estimator.dkw_beta;
  ic.workers = cfg.workers;

  const auto ladder = sorted_ladder(cfg);
  const std::size_t max_n = ladder.back();
  auto t0 = Clock::now();
  std::vector<ConstantEstimate> cn;
  for (std::size_t n : ladder) {
    Rng crng(derive_seed(cfg.seed, {stream::kConstant, n}));
    cn.push_back(estimate_cn(n, ic, crng));
  }
  rep.timings.constants = seconds_since(t0);

  rep.ladder.resize(ladder.size());
  for (std::size_t c = 0; c < ladder.size(); ++c) {
    rep.ladder[c].n = ladder[c];
    rep.ladder[c].constant = cn[c].value;
    rep.ladder[c].constant_se = cn[c].se;
    rep.ladder[c].threshold = ic.alpha - cn[c].value;
    if (!(rep.ladder[c].threshold > 0.0))
      rep.ladder[c].min_n = min_n_iid(ic.alpha, ic.cn_method, ic.dkw_beta);
    rep.ladder[c].per_rep.resize(cfg.replications);
  }

  const EpidemicConfig epi = cfg.epidemic();
  std::vector<double> sim_time(cfg.replications, 0.0);
  std::vector<double> est_time(cfg.replications, 0.0);
  std::vector<std::vector<char>> geo(ladder.size(), std::vector<char>(cfg.replications, 0));
  // Nested parallelism would oversubscribe; replications own the pool.
  EpidemicConfig inner = epi;
  inner.step.workers = 1;
  parallel_for(cfg.replications, cfg.workers, [&](std::size_t j) {
    auto ts = Clock::now();
    const std::vector<double> radii = replication_radii(cfg, inner, max_n + 1, j);
    sim_time[j] = seconds_since(ts);
    ts = Clock::now();
    for (std::size_t c = 0; c < ladder.size(); ++c) {
      const std::size_t n = ladder[c];
      const DeltaResult d = delta_iid(std::span<const double>(radii.data(), n), ic.alpha, cn[c],
                                      ic.cn_method, ic.dkw_beta);
      ReplicationRecord& r = rep.ladder[c].per_rep[j];
      r.rep = j;
      r.feasible = d.feasible;
      r.delta = d.delta;
      r.next_radius = radii[n];
      r.breach = d.feasible && radii[n] > d.delta;
      if (d.feasible && j % 100 == 0)
        geo[c][j] = geometric_agrees(cfg.s0, radii, n, d.delta, ic.alpha) ? 1 : 2;
    }
    est_time[j] = seconds_since(ts);
  });

  t0 = Clock::now();
  for (std::size_t c = 0; c < ladder.size(); ++c) {
    aggregate(rep.ladder[c]);
    for (char g : geo[c]) {
      if (g != 0) ++rep.ladder[c].geometric_checks;
      if (g == 2) ++rep.ladder[c].geometric_mismatches;
    }
  }
  for (std::size_t j = 0; j < cfg.replications; ++j) {
    rep.timings.simulate += sim_time[j];
    rep.timings.estimate += est_time[j];
  }
  rep.timings.aggregate = seconds_since(t0);
  return rep;
}

CoverageReport run_coverage_dependent(const ScenarioConfig& cfg) {
  if (cfg.estimator.mode != EstimatorMode::kDependent)
    throw ValidationError("run_coverage_dependent needs estimator.mode = dependent");
  if (cfg.covariate.assumption_violating() && !cfg.allow_violations)
    throw ValidationError("covariate mode violates the rate condition; allow_violations is off");
  CoverageReport rep;
  rep.regime = "dependent";
  rep.alpha = cfg.estimator.alpha;
  rep.epsilon = cfg.estimator.epsilon;
  rep.assumption_violating = cfg.covariate.assumption_violating();
  rep.scenario = cfg.to_json();

  auto t0 = Clock::now();
  const RadiusLimit limit = limit_radius_law(cfg.kernel, cfg.noise, cfg.covariate);
  const CdfModel f = limit.mean();
  const LimitProcessModel model =
      build_limit_model(limit.components, default_grid(f, cfg.estimator.grid), limit.weights);
  Rng crng(derive_seed(cfg.seed, {stream::kConstant}));
  LimitSimOptions sim;
  sim.mode = cfg.estimator.sup_mode;
  sim.workers = cfg.workers;
  const std::vector<double> sups = simulate_limit_sup(model, cfg.estimator.paths, crng, sim);
  const ConstantEstimate ca{upper_quantile(sups, cfg.estimator.alpha),
                            quantile_se(sups, cfg.estimator.alpha)};
  rep.timings.constants = seconds_since(t0);

  const auto ladder = sorted_ladder(cfg);
  const std::size_t max_n = ladder.back();
  rep.ladder.resize(ladder.size());
  for (std::size_t c = 0; c < ladder.size(); ++c) {
    CoverageCell& cell = rep.ladder[c];
    cell.n = ladder[c];
    cell.constant = ca.value;
    cell.constant_se = ca.se;
    cell.threshold = cfg.estimator.epsilon - ca.value / std::sqrt(static_cast<double>(cell.n));
    if (!(cell.threshold > 0.0)) cell.min_n = min_n_dependent(cfg.estimator.epsilon, ca.value);
    cell.per_rep.resize(cfg.replications);
  }

  EpidemicConfig inner = cfg.epidemic();
  inner.step.workers = 1;
  std::vector<double> sim_time(cfg.replications, 0.0);
  std::vector<double> est_time(cfg.replications, 0.0);
  parallel_for(cfg.replications, cfg.workers, [&](std::size_t j) {
    auto ts = Clock::now();
    const std::vector<double> radii = replication_radii(cfg, inner, max_n + 1, j);
    sim_time[j] = seconds_since(ts);
    ts = Clock::now();
    for (std::size_t c = 0; c < ladder.size(); ++c) {
      const std::size_t n = ladder[c];
      const DeltaResult d =
          delta_dependent(std::span<const double>(radii.data(), n), cfg.estimator.epsilon, ca);
      ReplicationRecord& r = rep.ladder[c].per_rep[j];
      r.rep = j;
      r.feasible = d.feasible;
      r.delta = d.delta;
      r.next_radius = radii[n];
      r.tail = d.feasible ? 1.0 - f.cdf(d.delta) : 1.0;
      r.breach = d.feasible && r.tail > cfg.estimator.epsilon;
    }
    est_time[j] = seconds_since(ts);
  });

  t0 = Clock::now();
  for (auto& cell : rep.ladder) aggregate(cell);
  for (std::size_t j = 0; j < cfg.replications; ++j) {
    rep.timings.simulate += sim_time[j];
    rep.timings.estimate += est_time[j];
  }
  rep.timings.aggregate = seconds_since(t0);
  return rep;
}

CoverageReport run_coverage(const ScenarioConfig& cfg) {
  return cfg.estimator.mode == EstimatorMode::kIid ? run_coverage_iid(cfg)
                                                   : run_coverage_dependent(cfg);
}

namespace {

json cell_json(const CoverageCell& c, bool dependent, bool with_records) {
  json j;
  j["n"] = c.n;
  j["m"] = c.m;
  j["feasible"] = c.feasible;
  j["infeasible"] = c.m - c.feasible;
  j["breaches"] = c.breaches;
  j["coverage"] = c.coverage ? json(*c.coverage) : json(nullptr);
  j["se"] = c.se;
  j[dependent ? "c_alpha" : "c_n"] = c.constant;
  j[dependent ? "c_alpha_se" : "c_n_se"] = c.constant_se;
  j["threshold"] = c.threshold;
  if (c.min_n > 0) j["min_n"] = c.min_n;
  if (!dependent) {
    j["geometric_checks"] = c.geometric_checks;
    j["geometric_mismatches"] = c.geometric_mismatches;
  }
  if (with_records) {
    json recs = json::array();
    for (const auto& r : c.per_rep) {
      json o;
      o["rep"] = r.rep;
      o["feasible"] = r.feasible;
      o["delta"] = r.feasible ? json(r.delta) : json(nullptr);
      o["next_radius"] = r.next_radius;
      if (dependent) o["tail"] = r.feasible ? json(r.tail) : json(nullptr);
      o["breach"] = r.breach;
      recs.push_back(std::move(o));
    }
    j["per_rep"] = std::move(recs);
  }
  return j;
}

}  // namespace

json CoverageReport::to_json(bool include_timings) const {
  const bool dependent = regime == "dependent";
  const CoverageCell& h = headline();
  json j;
  j["regime"] = regime;
  j["m"] = h.m;
  j["feasible"] = h.feasible;
  j["breaches"] = h.breaches;
  j["coverage"] = h.coverage ? json(*h.coverage) : json(nullptr);
  j["se"] = h.se;
  j["alpha"] = alpha;
  if (epsilon) j["epsilon"] = *epsilon;
  j["n"] = h.n;
  j["assumption_violating"] = assumption_violating;
  json flags = json::array();
  if (assumption_violating) flags.push_back("covariate_assumption_violated");
  for (const auto& c : ladder)
    if (c.feasible == 0) flags.push_back("no_feasible_replication_at_n_" + std::to_string(c.n));
  j["flags"] = std::move(flags);
  j["within_bound"] = h.within(alpha, 2.0);
  j["constants_origin"] = "scenario design choice";
  json lad = json::array();
  for (std::size_t i = 0; i < ladder.size(); ++i)
    lad.push_back(cell_json(ladder[i], dependent, i + 1 < ladder.size()));
  j["ladder"] = std::move(lad);
  j["per_rep"] = cell_json(h, dependent, true)["per_rep"];
  j["scenario"] = scenario;
  if (include_timings) {
    j["timings"] = {{"constants_s", timings.constants},
                    {"simulate_s", timings.simulate},
                    {"estimate_s", timings.estimate},
                    {"aggregate_s", timings.aggregate}};
  }
  return j;
}

}  // namespace safearea
