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

#include "safearea/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "safearea/error.hpp"
#include "safearea/parallel.hpp"

namespace safearea {

double ParticleMeasure::total_weight() const {
  // Neumaier summation.
  double sum = 0.0;
  double comp = 0.0;
  for (double w : weights) {
    const double t = sum + w;
    comp += std::abs(sum) >= std::abs(w) ? (sum - t) + w : (w - t) + sum;
    sum = t;
  }
  return sum + comp;
}

ParticleMeasure ParticleMeasure::dirac(const Site& s) {
  ParticleMeasure mu;
  mu.dim = s.dim();
  mu.coords.assign(s.coords().begin(), s.coords().end());
  mu.weights = {1.0};
  return mu;
}

ParticleMeasure ParticleMeasure::from_support(const SupportSet& support, std::size_t count,
                                              Rng& rng) {
  if (const auto* b = support.as_ball()) {
    if (b->radius == 0.0 || count == 0) return dirac(b->center);
    ParticleMeasure mu;
    mu.dim = b->center.dim();
    mu.coords.resize(count * mu.dim);
    mu.weights.assign(count, 1.0 / static_cast<double>(count));
    const RealizedKernel fill{b->radius, KernelProfile::kUniformBall};
    for (std::size_t i = 0; i < count; ++i)
      sample_transition(fill, b->center.coords(), {mu.coords.data() + i * mu.dim, mu.dim}, rng);
    return mu;
  }
  if (const auto* pc = support.as_point_cloud()) {
    ParticleMeasure mu;
    mu.dim = pc->dim;
    mu.coords = pc->coords;
    mu.weights.assign(pc->size(), 1.0 / static_cast<double>(pc->size()));
    return mu;
  }
  throw Unsupported("initial support must be a ball or a point cloud");
}

ParticleMeasure step(const ParticleMeasure& mu, const RealizedKernel& k, std::size_t particles_out,
                     Rng& rng, const StepOptions& opts) {
  if (mu.size() == 0) throw InvalidArgument("step needs a nonempty particle measure");
  if (particles_out == 0) throw InvalidArgument("step needs particles_out >= 1");
  const std::size_t chunk = std::max<std::size_t>(opts.chunk, 1);
  std::vector<double> cum(mu.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    acc += mu.weights[i];
    cum[i] = acc;
  }

  ParticleMeasure out;
  out.dim = mu.dim;
  out.generation = mu.generation + 1;
  out.coords.resize(particles_out * mu.dim);
  out.weights.assign(particles_out, 1.0 / static_cast<double>(particles_out));

  const std::uint64_t seed = rng();
  const std::size_t chunks = (particles_out + chunk - 1) / chunk;
  parallel_for(chunks, opts.workers, [&](std::size_t c) {
    Rng local(derive_seed(seed, {stream::kChunk, c}));
    const std::size_t end = std::min(particles_out, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      const double u = local.uniform() * acc;
      auto idx = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
      idx = std::min(idx, mu.size() - 1);
      sample_transition(k, mu.point(idx), {out.coords.data() + i * mu.dim, mu.dim}, local);
    }
  });
  return out;
}

AnalyticChain analytic_chain(const SupportSet& s0, std::span<const double> radii) {
  AnalyticChain chain;
  chain.supports.reserve(radii.size() + 1);
  chain.diameters.reserve(radii.size() + 1);
  chain.supports.push_back(s0);
  chain.diameters.push_back(exact_diameter(s0));
  for (double r : radii) {
    if (!std::isfinite(r) || r < 0.0) throw InvalidArgument("radii must be finite and >= 0");
    chain.supports.push_back(SupportSet::dilated(chain.supports.back(), r));
    chain.diameters.push_back(chain.diameters.back() + ExactLength(r).twice());
  }
  return chain;
}

namespace {

void validate(const EpidemicConfig& cfg, std::size_t horizon) {
  if (horizon == 0) throw InvalidArgument("horizon must be >= 1");
  if (cfg.dim == 0) throw InvalidArgument("dimension must be >= 1");
  if (cfg.s0.dim() != cfg.dim) throw InvalidArgument("initial support has the wrong dimension");
}

}  // namespace

RadiusDraws draw_radii(const EpidemicConfig& cfg, std::size_t horizon, SimulationStreams& streams) {
  if (horizon == 0) throw InvalidArgument("horizon must be >= 1");
  RadiusDraws d;
  d.covariates.reserve(horizon);
  d.noise.reserve(horizon);
  d.radii.reserve(horizon);
  for (std::size_t i = 1; i <= horizon; ++i) {
    const double y = cfg.covariate.value(i, streams.covariate);
    const double xi = cfg.noise.draw(streams.noise);
    d.covariates.push_back(y);
    d.noise.push_back(xi);
    d.radii.push_back(realize_kernel(cfg.kernel, xi, y).radius);
  }
  return d;
}

EpidemicTrace run_epidemic(const EpidemicConfig& cfg, std::size_t horizon,
                           SimulationStreams& streams) {
  validate(cfg, horizon);
  EpidemicTrace trace;
  trace.dim = cfg.dim;
  trace.analytic.reserve(horizon + 1);
  trace.analytic.push_back(cfg.s0);
  trace.diameters_exact.push_back(exact_diameter(cfg.s0));

  const bool particles = cfg.particles > 0;
  ParticleMeasure mu;
  if (particles) {
    mu = ParticleMeasure::from_support(cfg.s0, cfg.particles, streams.particles);
    trace.particle_diameters.push_back(point_cloud_diameter(mu.dim, mu.coords));
    if (cfg.keep_point_clouds) trace.clouds.push_back(mu.cloud());
  }

  for (std::size_t i = 1; i <= horizon; ++i) {
    const double y = cfg.covariate.value(i, streams.covariate);
    const double xi = cfg.noise.draw(streams.noise);
    const RealizedKernel k = realize_kernel(cfg.kernel, xi, y);
    trace.covariates.push_back(y);
    trace.noise.push_back(xi);
    trace.true_radii.push_back(k.radius);
    trace.analytic.push_back(SupportSet::dilated(trace.analytic.back(), k.radius));
    trace.diameters_exact.push_back(trace.diameters_exact.back() + ExactLength(k.radius).twice());
    if (particles) {
      mu = step(mu, k, cfg.particles, streams.particles, cfg.step);
      trace.particle_diameters.push_back(point_cloud_diameter(mu.dim, mu.coords));
      if (cfg.keep_point_clouds) trace.clouds.push_back(mu.cloud());
    }
  }

  trace.diameters.reserve(trace.diameters_exact.size());
  for (const auto& d : trace.diameters_exact) trace.diameters.push_back(d.to_double());
  trace.recovered_radii = extract_radii(trace.diameters_exact);
  for (std::size_t i = 1; i < trace.particle_diameters.size(); ++i)
    trace.particle_recovered_radii.push_back(
        0.5 * (trace.particle_diameters[i] - trace.particle_diameters[i - 1]));
  return trace;
}

std::vector<double> extract_radii(std::span<const double> diameters) {
  if (diameters.size() < 2) throw InvalidArgument("need at least two diameters");
  std::vector<double> r;
  r.reserve(diameters.size() - 1);
  for (std::size_t i = 1; i < diameters.size(); ++i) {
    if (!(diameters[i] >= diameters[i - 1]))
      throw InconsistentTrace("diameters decrease at step " + std::to_string(i));
    r.push_back(0.5 * (diameters[i] - diameters[i - 1]));
  }
  return r;
}

std::vector<double> extract_radii(std::span<const ExactLength> diameters) {
  if (diameters.size() < 2) throw InvalidArgument("need at least two diameters");
  std::vector<double> r;
  r.reserve(diameters.size() - 1);
  for (std::size_t i = 1; i < diameters.size(); ++i) {
    const ExactLength inc = diameters[i] - diameters[i - 1];
    if (inc.sign() < 0) throw InconsistentTrace("diameters decrease at step " + std::to_string(i));
    r.push_back(inc.half().to_double());
  }
  return r;
}

std::vector<double> extract_radii(const EpidemicTrace& trace) {
  if (!trace.diameters_exact.empty()) return extract_radii(trace.diameters_exact);
  return extract_radii(trace.diameters);
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string EpidemicTrace::to_csv() const {
  std::string out = "step,diameter_analytic,diameter_particle,radius_true,radius_recovered\n";
  for (std::size_t i = 0; i < diameters.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += fmt(diameters[i]);
    out += ',';
    if (i < particle_diameters.size()) out += fmt(particle_diameters[i]);
    out += ',';
    if (i > 0) out += fmt(true_radii[i - 1]);
    out += ',';
    if (i > 0) out += fmt(recovered_radii[i - 1]);
    out += '\n';
  }
  return out;
}

nlohmann::json EpidemicTrace::to_json() const {
  nlohmann::json j;
  j["dim"] = dim;
  j["horizon"] = horizon();
  j["initial_support"] = analytic.front().to_json();
  j["final_support"] = analytic.back().to_json();
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < diameters.size(); ++i) {
    nlohmann::json s;
    s["step"] = i;
    s["diameter"] = diameters[i];
    s["diameter_exact"] = diameters_exact[i].str();
    if (i < particle_diameters.size()) s["diameter_particle"] = particle_diameters[i];
    if (i > 0) {
      s["covariate"] = covariates[i - 1];
      s["noise"] = noise[i - 1];
      s["radius_true"] = true_radii[i - 1];
      s["radius_recovered"] = recovered_radii[i - 1];
    }
    if (i < clouds.size()) s["point_cloud"] = clouds[i].to_json();
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  return j;
}

std::vector<double> read_csv_column(const std::string& csv, const std::string& column) {
  std::istringstream in(csv);
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(l);
    while (std::getline(ls, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    if (!l.empty() && l.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(in, line)) throw InvalidArgument("CSV input is empty");
  const auto header = split(line);
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw InvalidArgument("CSV has no column '" + column + "'");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (col >= cells.size() || cells[col].empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cells[col], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cells[col].size())
      throw InvalidArgument("bad number '" + cells[col] + "' on CSV row " + std::to_string(row));
    values.push_back(v);
  }
  return values;
}

}  // namespace safearea
