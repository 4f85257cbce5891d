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

#include "safearea/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "safearea/config.hpp"
#include "safearea/empirical.hpp"
#include "safearea/error.hpp"
#include "safearea/estimator.hpp"
#include "safearea/evolution.hpp"
#include "safearea/harness.hpp"
#include "safearea/limit_process.hpp"

namespace safearea {

namespace {

using nlohmann::json;

std::string fmt(double v, int digits = 17) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// "uniform:a,b", "beta:p,q[,scale]" or "trunc_exp:rate,cap".
CdfModel parse_law(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::istringstream in(spec.substr(colon + 1));
    std::string cell;
    while (std::getline(in, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) throw ValidationError("bad number in law '" + spec + "'");
      args.push_back(v);
    }
  }
  try {
    if (name == "uniform" && args.size() == 2) return CdfModel::uniform(args[0], args[1]);
    if (name == "beta" && (args.size() == 2 || args.size() == 3))
      return CdfModel::beta(args[0], args[1], args.size() == 3 ? args[2] : 1.0);
    if (name == "trunc_exp" && args.size() == 2) return CdfModel::trunc_exp(args[0], args[1]);
  } catch (const InvalidArgument& e) {
    throw ValidationError(std::string("law '") + spec + "': " + e.what());
  }
  throw ValidationError("unknown law '" + spec +
                        "' (expected uniform:a,b, beta:p,q[,scale] or trunc_exp:rate,cap)");
}

std::vector<ExactLength> exact_diameters_from_json(const json& trace) {
  std::vector<ExactLength> d;
  for (const auto& s : trace.at("steps")) d.push_back(ExactLength::parse(s.at("diameter_exact")));
  return d;
}

// Radii from a radius CSV, a trace CSV or a trace JSON.
std::vector<double> load_radii(const std::string& path) {
  const std::string text = read_file(path);
  if (ends_with(path, ".json")) {
    json j;
    try {
      j = json::parse(text);
      return extract_radii(exact_diameters_from_json(j));
    } catch (const json::exception& e) {
      throw ValidationError("'" + path + "' is not a trace JSON: " + e.what());
    }
  }
  const std::string header = text.substr(0, text.find('\n'));
  std::istringstream hs(header);
  std::string cell;
  bool has_radius = false;
  bool has_recovered = false;
  while (std::getline(hs, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    has_radius = has_radius || cell == "radius";
    has_recovered = has_recovered || cell == "radius_recovered";
  }
  if (!has_radius && !has_recovered)
    throw ValidationError("'" + path + "' has neither a radius nor a radius_recovered column");
  try {
    return read_csv_column(text, has_radius ? "radius" : "radius_recovered");
  } catch (const InvalidArgument& e) {
    throw ValidationError(e.what());
  }
}

ScenarioConfig scenario_or_default(const std::string& path) {
  return path.empty() ? parse_scenario(default_scenario_toml()) : load_scenario(path);
}

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Safety areas for random-kernel epidemic spread", "safearea"};
  app.require_subcommand(0, 1);
  bool init = false;
  app.add_flag("--init", init, "Print the reference scenario config and exit");

  std::uint64_t seed = 0;
  auto add_seed = [&](CLI::App* sub) {
    return sub->add_option("--seed", seed, "Master seed (overrides the config)");
  };

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one epidemic and write its trace");
  std::string sim_config, sim_csv, sim_json;
  std::size_t sim_horizon = 0, sim_particles = 0;
  sim->add_option("--config", sim_config, "Scenario file");
  sim->add_option("--horizon", sim_horizon, "Number of steps (default: scenario horizon)");
  auto* sim_particles_opt = sim->add_option("--particles", sim_particles, "Particle count");
  sim->add_option("--csv", sim_csv, "Write the trace CSV here (default: standard output)");
  sim->add_option("--json", sim_json, "Write the full trace JSON here");
  auto* sim_seed = add_seed(sim);

  // radii
  auto* rad = app.add_subcommand("radii", "Recover radii from a trace file");
  std::string rad_trace, rad_column = "analytic";
  rad->add_option("--trace", rad_trace, "Trace CSV or JSON")->required();
  rad->add_option("--column", rad_column, "Diameter view: analytic or particle")
      ->check(CLI::IsMember({"analytic", "particle"}));
  add_seed(rad);

  // estimate
  auto* est = app.add_subcommand("estimate", "Safety threshold from observed radii");
  std::string est_radii, est_mode = "iid", est_cn_method = "monte_carlo", est_f0 = "uniform:0,1";
  double est_alpha = 0.05, est_epsilon = 0.1, est_dkw = 0.05, est_cn_value = 0.0;
  std::size_t est_reps = 10000, est_paths = 100000, est_grid = 512;
  est->add_option("--radii", est_radii, "Radius CSV (column radius) or trace CSV/JSON")->required();
  est->add_option("--mode", est_mode, "iid or dependent")->check(CLI::IsMember({"iid", "dependent"}));
  est->add_option("--alpha", est_alpha, "Level alpha");
  est->add_option("--epsilon", est_epsilon, "Tail tolerance epsilon (dependent)");
  est->add_option("--cn-method", est_cn_method, "monte_carlo, asymptotic or dkw")
      ->check(CLI::IsMember({"monte_carlo", "mc", "asymptotic", "dkw"}));
  auto* est_cn_opt = est->add_option("--cn-value", est_cn_value, "Use this C_n (or C_alpha)");
  est->add_option("--reps", est_reps, "Monte Carlo repetitions for C_n");
  est->add_option("--dkw-beta", est_dkw, "Confidence parameter of the DKW bound");
  est->add_option("--f0", est_f0, "Reference law for Monte Carlo C_n");
  est->add_option("--paths", est_paths, "Limit-process paths for C_alpha");
  est->add_option("--grid", est_grid, "Limit-process grid size");
  auto* est_seed = add_seed(est);

  // coverage
  auto* cov = app.add_subcommand("coverage", "Monte Carlo coverage of the safety area");
  std::string cov_config, cov_out;
  std::size_t cov_reps = 0;
  unsigned cov_workers = 0;
  bool cov_timings = false;
  cov->add_option("--config", cov_config, "Scenario file")->required();
  cov->add_option("--out", cov_out, "Report path (default: <output_dir>/coverage_report.json)");
  auto* cov_reps_opt = cov->add_option("--replications", cov_reps, "Override replications");
  auto* cov_workers_opt = cov->add_option("--workers", cov_workers, "Override worker count");
  cov->add_flag("--timings", cov_timings, "Include wall-clock timings in the report");
  auto* cov_seed = add_seed(cov);

  // dist
  auto* dis = app.add_subcommand("dist", "Kolmogorov and limit-sup tables");
  bool dis_kol = false, dis_limit = false, dis_quantiles = false;
  double dis_p = 0.0, dis_x = 0.0;
  std::size_t dis_paths = 10000, dis_grid = 512;
  std::string dis_out, dis_sup_mode = "bridge_interpolated";
  dis->add_flag("--kolmogorov", dis_kol, "Kolmogorov distribution");
  dis->add_flag("--limit-sup", dis_limit, "Brownian-bridge sup samples");
  auto* dis_p_opt = dis->add_option("--p", dis_p, "Quantile at probability p");
  auto* dis_x_opt = dis->add_option("--x", dis_x, "CDF at x");
  dis->add_flag("--quantiles", dis_quantiles, "Quantile table instead of a CDF table");
  dis->add_option("--paths", dis_paths, "Limit-sup paths");
  dis->add_option("--grid", dis_grid, "Limit-sup grid size");
  dis->add_option("--sup-mode", dis_sup_mode, "bridge_interpolated or grid_max")
      ->check(CLI::IsMember({"bridge_interpolated", "grid_max"}));
  dis->add_option("--out", dis_out, "Write the CSV here (default: standard output)");
  auto* dis_seed = add_seed(dis);

  // limit-check
  auto* lim = app.add_subcommand("limit-check", "Gaussian limit and covariate-rate diagnostics");
  std::string lim_config;
  std::size_t lim_n = 500, lim_reps = 5000;
  std::vector<double> lim_t;
  lim->add_option("--config", lim_config, "Scenario file (default: alternating uniforms)");
  lim->add_option("--n", lim_n, "Sample size n");
  lim->add_option("--reps", lim_reps, "Replications");
  lim->add_option("--t", lim_t, "Evaluation times (up to 3)");
  auto* lim_seed = add_seed(lim);

  std::vector<std::string> argv_store{"safearea"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (init) {
      out << default_scenario_toml();
      return 0;
    }

    if (sim->parsed()) {
      ScenarioConfig sc = scenario_or_default(sim_config);
      if (sim_seed->count() > 0) sc.seed = seed;
      if (sim_particles_opt->count() > 0) sc.particles = sim_particles;
      EpidemicConfig epi = sc.epidemic();
      SimulationStreams streams(sc.seed);
      const EpidemicTrace trace = run_epidemic(epi, sim_horizon > 0 ? sim_horizon : sc.horizon, streams);
      if (!sim_json.empty()) write_file(sim_json, trace.to_json().dump(1) + "\n");
      if (!sim_csv.empty()) {
        write_file(sim_csv, trace.to_csv());
      } else if (sim_json.empty()) {
        out << trace.to_csv();
      }
      return 0;
    }

    if (rad->parsed()) {
      std::vector<double> radii;
      const std::string text = read_file(rad_trace);
      if (ends_with(rad_trace, ".json")) {
        const json j = json::parse(text);
        if (rad_column == "analytic") {
          radii = extract_radii(exact_diameters_from_json(j));
        } else {
          std::vector<double> d;
          for (const auto& s : j.at("steps")) d.push_back(s.at("diameter_particle").get<double>());
          radii = extract_radii(d);
        }
      } else {
        std::vector<double> d;
        try {
          d = read_csv_column(text, "diameter_" + rad_column);
        } catch (const InvalidArgument& e) {
          throw ValidationError(e.what());
        }
        radii = extract_radii(d);
      }
      std::string csv = "step,radius\n";
      for (std::size_t i = 0; i < radii.size(); ++i)
        csv += std::to_string(i + 1) + "," + fmt(radii[i]) + "\n";
      out << csv;
      return 0;
    }

    if (est->parsed()) {
      const std::vector<double> radii = load_radii(est_radii);
      if (radii.empty()) throw ValidationError("no radii in '" + est_radii + "'");
      if (!(est_alpha > 0.0 && est_alpha < 1.0)) throw ValidationError("--alpha must lie in (0, 1)");
      Rng rng(est_seed->count() > 0 ? seed : 1);
      DeltaResult d;
      json extra;
      if (est_mode == "iid") {
        IidEstimatorConfig ic;
        ic.alpha = est_alpha;
        ic.cn_method = parse_cn_method(est_cn_method);
        ic.reps = est_reps;
        ic.dkw_beta = est_dkw;
        ic.f0 = parse_law(est_f0);
        ConstantEstimate cn;
        if (est_cn_opt->count() > 0) {
          cn.value = est_cn_value;
        } else {
          cn = estimate_cn(radii.size(), ic, rng);
        }
        d = delta_iid(radii, ic.alpha, cn, ic.cn_method, ic.dkw_beta);
        extra["cn_method"] = est_cn_opt->count() > 0 ? "given" : to_string(ic.cn_method);
      } else {
        if (!(est_epsilon > 0.0 && est_epsilon < 1.0))
          throw ValidationError("--epsilon must lie in (0, 1)");
        ConstantEstimate ca;
        if (est_cn_opt->count() > 0) {
          ca.value = est_cn_value;
        } else {
          ca.value = c_alpha(bridge_model(est_grid), est_alpha, est_paths, rng);
        }
        d = delta_dependent(radii, est_epsilon, ca);
        extra["epsilon"] = est_epsilon;
      }
      json j = d.to_json();
      j["mode"] = est_mode;
      j["alpha"] = est_alpha;
      j.update(extra);
      out << j.dump(1) << "\n";
      return 0;
    }

    if (cov->parsed()) {
      ScenarioConfig sc = load_scenario(cov_config);
      if (cov_seed->count() > 0) sc.seed = seed;
      if (cov_reps_opt->count() > 0) {
        if (cov_reps == 0) throw ValidationError("--replications must be >= 1");
        sc.replications = cov_reps;
      }
      if (cov_workers_opt->count() > 0) sc.workers = cov_workers;
      const CoverageReport r = run_coverage(sc);
      const std::string path =
          cov_out.empty() ? (std::filesystem::path(sc.output_dir) / "coverage_report.json").string()
                          : cov_out;
      write_file(path, r.to_json(cov_timings).dump(1) + "\n");
      const auto& h = r.headline();
      json summary = {{"report", path},
                      {"n", h.n},
                      {"m", h.m},
                      {"feasible", h.feasible},
                      {"breaches", h.breaches},
                      {"coverage", h.coverage ? json(*h.coverage) : json(nullptr)},
                      {"se", h.se}};
      out << summary.dump() << "\n";
      return 0;
    }

    if (dis->parsed()) {
      if (dis_kol == dis_limit) throw ValidationError("dist needs exactly one of --kolmogorov, --limit-sup");
      std::string csv;
      if (dis_kol) {
        if (dis_p_opt->count() > 0) {
          csv = "p,K_inv(p)\n" + fmt(dis_p, 12) + "," + fmt(kolmogorov_quantile(dis_p), 12) + "\n";
        } else if (dis_x_opt->count() > 0) {
          csv = "x,K(x)\n" + fmt(dis_x, 12) + "," + fmt(kolmogorov_cdf(dis_x), 12) + "\n";
        } else if (dis_quantiles) {
          csv = "p,K_inv(p)\n";
          for (int i = 1; i <= 99; ++i) {
            const double p = i / 100.0;
            csv += fmt(p, 12) + "," + fmt(kolmogorov_quantile(p), 12) + "\n";
          }
        } else {
          csv = "x,K(x)\n";
          for (int i = 0; i <= 60; ++i) {
            const double x = i * 0.05;
            csv += fmt(x, 12) + "," + fmt(kolmogorov_cdf(x), 12) + "\n";
          }
        }
      } else {
        if (dis_paths == 0) throw ValidationError("--paths must be >= 1");
        if (dis_grid < 2) throw ValidationError("--grid must be >= 2");
        Rng rng(dis_seed->count() > 0 ? seed : 1);
        LimitSimOptions so;
        so.mode = dis_sup_mode == "grid_max" ? SupMode::kGridMax : SupMode::kBridgeInterpolated;
        const auto sups = simulate_limit_sup(bridge_model(dis_grid), dis_paths, rng, so);
        csv = "index,sup\n";
        for (std::size_t i = 0; i < sups.size(); ++i) csv += std::to_string(i) + "," + fmt(sups[i]) + "\n";
      }
      if (dis_out.empty()) {
        out << csv;
      } else {
        write_file(dis_out, csv);
      }
      return 0;
    }

    if (lim->parsed()) {
      if (lim_n == 0 || lim_reps < 2) throw ValidationError("limit-check needs --n >= 1 and --reps >= 2");
      if (lim_t.size() > 3) throw ValidationError("limit-check takes at most 3 times");
      std::vector<CdfModel> comps;
      CovariateProcess covariate = CovariateProcess::cycle({1.0, 2.0});
      json j;
      if (lim_config.empty()) {
        comps = {CdfModel::uniform(0.0, 1.0), CdfModel::uniform(0.0, 2.0)};
        j["components"] = "alternating uniform(0,1), uniform(0,2)";
      } else {
        const ScenarioConfig sc = load_scenario(lim_config);
        if (lim_seed->count() == 0) seed = sc.seed;
        covariate = sc.covariate;
        if (sc.covariate.mode() == CovariateProcess::Mode::kConstant ||
            sc.covariate.mode() == CovariateProcess::Mode::kCycle) {
          for (double y : sc.covariate.cycle_values()) comps.push_back(radius_law(sc.kernel, sc.noise, y));
        }
        j["assumption_violating"] = sc.covariate.assumption_violating();
      }
      const std::uint64_t s = (lim_seed->count() > 0 || !lim_config.empty()) ? seed : 1;
      if (!comps.empty()) {
        std::vector<double> t = lim_t;
        if (t.empty()) {
          const CdfModel mean = CdfModel::equal_mixture(comps);
          t = {mean.quantile(0.25), mean.quantile(0.5), mean.quantile(0.75)};
        }
        Rng rng(derive_seed(s, {stream::kReplication}));
        j["findim"] = findim_gaussian_test(comps, t, lim_n, lim_reps, rng).to_json();
      } else {
        j["findim"] = nullptr;
        j["findim_skipped"] = "covariate mode has no periodic component sequence";
      }
      json gaps = json::array();
      for (std::size_t n : {100, 400, 1600, 6400}) {
        Rng rng(derive_seed(s, {stream::kCovariate, n}));
        gaps.push_back({{"n", n}, {"gap", covariate_ecdf_gap(covariate, n, rng)}});
      }
      j["covariate"] = covariate.to_json();
      j["covariate_gap"] = std::move(gaps);
      out << j.dump(1) << "\n";
      return 0;
    }

    out << app.help();
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NoFeasibleDelta& e) {
    err << "error: " << e.what() << " (need n >= " << e.min_n() << ")\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace safearea
