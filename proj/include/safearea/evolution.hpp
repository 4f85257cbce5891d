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

#ifndef SAFEAREA_EVOLUTION_HPP_
#define SAFEAREA_EVOLUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "safearea/geometry.hpp"
#include "safearea/kernel.hpp"
#include "safearea/rng.hpp"

namespace safearea {

// Weighted point cloud approximating mu_n.
struct ParticleMeasure {
  std::size_t dim = 0;
  std::vector<double> coords;  // row-major
  std::vector<double> weights;
  std::size_t generation = 0;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
  double total_weight() const;
  SupportSet cloud() const { return SupportSet::point_cloud(dim, coords); }

  static ParticleMeasure dirac(const Site& s);
  // `count` equally weighted particles drawn uniformly from `support`
  // (balls), or one particle per point (point clouds).
  static ParticleMeasure from_support(const SupportSet& support, std::size_t count, Rng& rng);
};

struct StepOptions {
  unsigned workers = 0;
  std::size_t chunk = 4096;
};

// One application of the transition: every output particle picks a source
// with probability proportional to its weight and moves under k. Output
// weights are uniform. Chunks of output particles use substreams of a step
// seed drawn from rng, so the result is independent of `workers`.
ParticleMeasure step(const ParticleMeasure& mu, const RealizedKernel& k, std::size_t particles_out,
                     Rng& rng, const StepOptions& opts = {});

// Independent streams of one simulated epidemic.
struct SimulationStreams {
  Rng noise;
  Rng covariate;
  Rng particles;

  explicit SimulationStreams(std::uint64_t seed)
      : noise(derive_seed(seed, {stream::kNoise})),
        covariate(derive_seed(seed, {stream::kCovariate})),
        particles(derive_seed(seed, {stream::kParticles})) {}
};

struct EpidemicConfig {
  std::size_t dim = 2;
  SupportSet s0 = SupportSet::ball(Site::origin(2), 0.0);
  KernelSpec kernel;
  NoiseDriver noise = NoiseDriver::uniform(0.0, 1.0);
  CovariateProcess covariate = CovariateProcess::constant(1.0);
  // 0 disables the particle view.
  std::size_t particles = 10000;
  bool keep_point_clouds = false;
  StepOptions step;
};

struct EpidemicTrace {
  std::size_t dim = 0;
  std::vector<SupportSet> analytic;  // S_0 .. S_n as a dilation chain
  std::vector<SupportSet> clouds;    // particle supports, when kept
  std::vector<ExactLength> diameters_exact;
  std::vector<double> diameters;           // nearest doubles of diameters_exact
  std::vector<double> particle_diameters;  // empty without particles
  std::vector<double> covariates;          // Y_1 .. Y_n
  std::vector<double> noise;               // xi_1 .. xi_n
  std::vector<double> true_radii;
  std::vector<double> recovered_radii;           // from the analytic diameters
  std::vector<double> particle_recovered_radii;  // may be negative

  std::size_t horizon() const noexcept { return true_radii.size(); }

  // Header: step,diameter_analytic,diameter_particle,radius_true,radius_recovered
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

// S_0, S_0^{r_1}, ... with exact diameters.
struct AnalyticChain {
  std::vector<SupportSet> supports;
  std::vector<ExactLength> diameters;
};
AnalyticChain analytic_chain(const SupportSet& s0, std::span<const double> radii);

EpidemicTrace run_epidemic(const EpidemicConfig& cfg, std::size_t horizon,
                           SimulationStreams& streams);

// Covariates, noise and radii for `horizon` steps, consuming the streams in
// the same order as run_epidemic.
struct RadiusDraws {
  std::vector<double> covariates;
  std::vector<double> noise;
  std::vector<double> radii;
};
RadiusDraws draw_radii(const EpidemicConfig& cfg, std::size_t horizon, SimulationStreams& streams);

// r_i = (d_i - d_{i-1}) / 2. Throws InconsistentTrace on a decreasing pair.
std::vector<double> extract_radii(std::span<const double> diameters);
std::vector<double> extract_radii(std::span<const ExactLength> diameters);
std::vector<double> extract_radii(const EpidemicTrace& trace);

// Values of the named column of a CSV text with a header row. Empty cells
// are skipped.
std::vector<double> read_csv_column(const std::string& csv, const std::string& column);

}  // namespace safearea

#endif  // SAFEAREA_EVOLUTION_HPP_
