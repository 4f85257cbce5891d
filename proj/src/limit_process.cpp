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

#include "safearea/limit_process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "safearea/empirical.hpp"
#include "safearea/error.hpp"
#include "safearea/parallel.hpp"

namespace safearea {

double LimitProcessModel::covariance(double s, double t) const {
  const double lo = std::min(s, t);
  const double hi = std::max(s, t);
  double g = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i)
    g += weights[i] * components[i].cdf(lo) * (1.0 - components[i].cdf(hi));
  return g;
}

LimitProcessModel build_limit_model(std::vector<CdfModel> components, std::vector<double> grid,
                                    std::vector<double> weights) {
  if (components.empty()) throw InvalidArgument("limit model needs at least one component");
  if (weights.empty()) weights.assign(components.size(), 1.0);
  if (weights.size() != components.size())
    throw InvalidArgument("limit model weights and components differ in length");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("limit model weights must be > 0");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("limit model weights sum to zero");
  for (double& w : weights) w /= total;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!std::isfinite(grid[j])) throw InvalidArgument("limit model grid must be finite");
    if (j > 0 && !(grid[j] > grid[j - 1]))
      throw InvalidArgument("limit model grid must be strictly increasing");
  }

  LimitProcessModel m;
  m.mean_cdf = CdfModel::mixture(weights, components);
  m.components = std::move(components);
  m.weights = std::move(weights);
  m.grid = std::move(grid);

  const auto sz = static_cast<Eigen::Index>(m.grid.size());
  Eigen::MatrixXd f(static_cast<Eigen::Index>(m.components.size()), sz);
  for (Eigen::Index c = 0; c < f.rows(); ++c)
    for (Eigen::Index j = 0; j < sz; ++j)
      f(c, j) = m.components[static_cast<std::size_t>(c)].cdf(m.grid[static_cast<std::size_t>(j)]);
  m.gram.resize(sz, sz);
  for (Eigen::Index i = 0; i < sz; ++i) {
    for (Eigen::Index j = i; j < sz; ++j) {
      double g = 0.0;
      for (Eigen::Index c = 0; c < f.rows(); ++c)
        g += m.weights[static_cast<std::size_t>(c)] * f(c, i) * (1.0 - f(c, j));
      m.gram(i, j) = g;
      m.gram(j, i) = g;
    }
  }
  return m;
}

std::vector<double> default_grid(const CdfModel& mean, std::size_t m) {
  if (m < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<double> grid;
  grid.reserve(m);
  for (std::size_t j = 1; j <= m; ++j) {
    const double t = mean.quantile(static_cast<double>(j) / static_cast<double>(m + 1));
    if (grid.empty() || t > grid.back()) grid.push_back(t);
  }
  return grid;
}

LimitProcessModel bridge_model(std::size_t m) {
  const CdfModel u = CdfModel::uniform(0.0, 1.0);
  return build_limit_model({u}, default_grid(u, m));
}

namespace {

// Maximum of a Brownian bridge from a to b with variance parameter v, drawn
// by inverting P(max > x) = exp(-2 (x - a)(x - b) / v).
double excursion_max(double a, double b, double v, double u) {
  if (!(v > 0.0)) return std::max(a, b);
  const double d = a - b;
  return 0.5 * (a + b + std::sqrt(d * d - 2.0 * v * std::log(u)));
}

double interval_sup(double a, double b, double v, Rng& rng) {
  const double up = excursion_max(a, b, v, rng.uniform());
  const double down = excursion_max(-a, -b, v, rng.uniform());
  return std::max(up, down);
}

}  // namespace

std::vector<double> simulate_limit_sup(const LimitProcessModel& model, std::size_t paths, Rng& rng,
                                       const LimitSimOptions& opts) {
  const auto m = model.gram.rows();
  if (m < 2) throw InvalidArgument("limit process needs a grid of at least two points");
  std::vector<double> out(paths, 0.0);
  const std::uint64_t seed = rng();
  if (model.gram.cwiseAbs().maxCoeff() == 0.0) return out;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(model.gram);
  if (ldlt.info() != Eigen::Success) throw CovarianceError("LDLT factorization failed");
  Eigen::VectorXd d = ldlt.vectorD();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (d(i) < -opts.nugget) throw CovarianceError("covariance matrix is not positive semidefinite");
    d(i) = std::sqrt(std::max(d(i), 0.0));
  }
  const Eigen::MatrixXd factor = Eigen::MatrixXd(ldlt.matrixL()) * d.asDiagonal();
  const auto perm_t = ldlt.transpositionsP().transpose();

  // Increment variances between neighbours, anchored at U = 0 outside the grid.
  std::vector<double> inc(static_cast<std::size_t>(m) + 1);
  inc[0] = model.gram(0, 0);
  for (Eigen::Index j = 0; j + 1 < m; ++j)
    inc[static_cast<std::size_t>(j) + 1] =
        std::max(0.0, model.gram(j, j) + model.gram(j + 1, j + 1) - 2.0 * model.gram(j, j + 1));
  inc[static_cast<std::size_t>(m)] = model.gram(m - 1, m - 1);

  constexpr std::size_t kBatch = 256;
  const std::size_t batches = (paths + kBatch - 1) / kBatch;
  parallel_for(batches, opts.workers, [&](std::size_t b) {
    Rng local(derive_seed(seed, {stream::kChunk, b}));
    const std::size_t first = b * kBatch;
    const std::size_t count = std::min(paths, first + kBatch) - first;
    Eigen::MatrixXd z(m, static_cast<Eigen::Index>(count));
    for (Eigen::Index c = 0; c < z.cols(); ++c)
      for (Eigen::Index i = 0; i < m; ++i) z(i, c) = local.normal();
    Eigen::MatrixXd y = factor.triangularView<Eigen::Lower>() * z;
    const Eigen::MatrixXd u = perm_t * y;
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      double sup = 0.0;
      if (opts.mode == SupMode::kGridMax) {
        sup = u.col(c).cwiseAbs().maxCoeff();
      } else {
        double prev = 0.0;
        for (Eigen::Index j = 0; j <= m; ++j) {
          const double next = j < m ? u(j, c) : 0.0;
          sup = std::max(sup, interval_sup(prev, next, inc[static_cast<std::size_t>(j)], local));
          prev = next;
        }
      }
      out[first + static_cast<std::size_t>(c)] = sup;
    }
  });
  std::sort(out.begin(), out.end());
  return out;
}

double upper_quantile(const std::vector<double>& sorted, double alpha) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  const double pos = std::ceil((1.0 - alpha) * static_cast<double>(sorted.size()));
  const auto k = static_cast<std::size_t>(std::max(pos, 1.0)) - 1;
  return sorted[std::min(k, sorted.size() - 1)];
}

double c_alpha(const LimitProcessModel& model, double alpha, std::size_t paths, Rng& rng,
               const LimitSimOptions& opts) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  return upper_quantile(simulate_limit_sup(model, paths, rng, opts), alpha);
}

double modulus_of_continuity(const CdfModel& f, double delta, const std::vector<double>& grid) {
  if (!(delta >= 0.0)) throw InvalidArgument("modulus needs delta >= 0");
  if (delta == 0.0 || grid.empty()) return 0.0;
  auto h = [&](double t) { return f.cdf(t + delta) - f.cdf(t); };
  std::size_t best = 0;
  double value = h(grid[0]);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double v = h(grid[j]);
    if (v > value) {
      value = v;
      best = j;
    }
  }
  double lo = grid[best > 0 ? best - 1 : 0];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double h1 = h(x1);
  double h2 = h(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
    if (h1 < h2) {
      lo = x1;
      x1 = x2;
      h1 = h2;
      x2 = lo + phi * (hi - lo);
      h2 = h(x2);
    } else {
      hi = x2;
      x2 = x1;
      h2 = h1;
      x1 = hi - phi * (hi - lo);
      h1 = h(x1);
    }
    value = std::max({value, h1, h2});
  }
  return std::clamp(value, 0.0, 1.0);
}

double modulus_of_continuity(const CdfModel& f, double delta) {
  constexpr std::size_t kPoints = 4096;
  const double lo = f.lower() - delta;
  const double hi = f.upper();
  std::vector<double> grid(kPoints);
  for (std::size_t j = 0; j < kPoints; ++j)
    grid[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(kPoints - 1);
  return modulus_of_continuity(f, delta, grid);
}

ModulusReport averaged_modulus(const LimitProcessModel& model, double delta) {
  ModulusReport r;
  r.delta = delta;
  for (std::size_t i = 0; i < model.components.size(); ++i) {
    const double w = modulus_of_continuity(model.components[i], delta);
    r.per_component.push_back(w);
    r.value += model.weights[i] * w;
  }
  return r;
}

nlohmann::json FindimReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["reps"] = reps;
  j["rejections"] = rejections;
  j["pass"] = pass;
  j["marginals"] = nlohmann::json::array();
  for (const auto& mc : marginals) {
    j["marginals"].push_back({{"t", mc.t},
                              {"variance_limit", mc.variance_limit},
                              {"variance_empirical", mc.variance_empirical},
                              {"ks", mc.ks},
                              {"critical", mc.critical},
                              {"degenerate", mc.degenerate},
                              {"rejected", mc.rejected}});
  }
  j["covariances"] = nlohmann::json::array();
  for (const auto& cc : covariances) {
    j["covariances"].push_back({{"s", cc.s},
                                {"t", cc.t},
                                {"expected", cc.expected},
                                {"empirical", cc.empirical},
                                {"se", cc.se},
                                {"within", cc.within}});
  }
  return j;
}

FindimReport findim_gaussian_test(const std::vector<CdfModel>& components,
                                  const std::vector<double>& t_points, std::size_t n,
                                  std::size_t reps, Rng& rng, unsigned workers) {
  if (components.empty()) throw InvalidArgument("findim test needs components");
  if (t_points.empty()) throw InvalidArgument("findim test needs at least one time point");
  if (n == 0 || reps < 2) throw InvalidArgument("findim test needs n >= 1 and reps >= 2");
  const std::size_t k = t_points.size();
  const double dn = static_cast<double>(n);
  const double root_n = std::sqrt(dn);

  // Finite-n mean and covariance of U_n.
  std::vector<double> mean(k, 0.0);
  std::vector<double> g(k * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const CdfModel& f = components[i % components.size()];
    for (std::size_t a = 0; a < k; ++a) {
      const double fa = f.cdf(t_points[a]);
      mean[a] += fa;
      for (std::size_t b = 0; b < k; ++b) {
        const double fb = f.cdf(t_points[b]);
        g[a * k + b] += t_points[a] <= t_points[b] ? fa * (1.0 - fb) : fb * (1.0 - fa);
      }
    }
  }
  for (double& v : mean) v /= dn;
  for (double& v : g) v /= dn;

  std::vector<double> u(reps * k);
  std::vector<double> jitter(reps * k);
  const std::uint64_t seed = rng();
  parallel_for(reps, workers, [&](std::size_t r) {
    Rng local(derive_seed(seed, {stream::kChunk, r}));
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = components[i % components.size()].sample(local);
      for (std::size_t a = 0; a < k; ++a)
        if (x <= t_points[a]) ++count[a];
    }
    for (std::size_t a = 0; a < k; ++a) {
      u[r * k + a] = root_n * (static_cast<double>(count[a]) / dn - mean[a]);
      jitter[r * k + a] = (local.uniform() - 0.5) / root_n;
    }
  });

  FindimReport rep;
  rep.n = n;
  rep.reps = reps;
  const double dr = static_cast<double>(reps);
  const double critical = kolmogorov_quantile(0.99);
  std::vector<double> avg(k, 0.0);
  for (std::size_t r = 0; r < reps; ++r)
    for (std::size_t a = 0; a < k; ++a) avg[a] += u[r * k + a];
  for (double& v : avg) v /= dr;

  for (std::size_t a = 0; a < k; ++a) {
    MarginalCheck mc;
    mc.t = t_points[a];
    mc.variance_limit = g[a * k + a];
    mc.critical = critical;
    double ss = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double c = u[r * k + a] - avg[a];
      ss += c * c;
    }
    mc.variance_empirical = ss / (dr - 1.0);
    if (mc.variance_limit <= 0.0) {
      mc.degenerate = true;
      for (std::size_t r = 0; r < reps; ++r)
        if (u[r * k + a] != 0.0) mc.rejected = true;
    } else {
      std::vector<double> v(reps);
      for (std::size_t r = 0; r < reps; ++r) v[r] = u[r * k + a] + jitter[r * k + a];
      std::sort(v.begin(), v.end());
      const double sd = std::sqrt(mc.variance_limit + 1.0 / (12.0 * dn));
      double d = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double f = normal_cdf(v[r] / sd);
        d = std::max({d, static_cast<double>(r + 1) / dr - f, f - static_cast<double>(r) / dr});
      }
      mc.ks = std::sqrt(dr) * d;
      mc.rejected = mc.ks > critical;
    }
    if (mc.rejected) ++rep.rejections;
    rep.marginals.push_back(mc);
  }

  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      CovarianceCheck cc;
      cc.s = t_points[a];
      cc.t = t_points[b];
      cc.expected = g[a * k + b];
      double s1 = 0.0;
      double s2 = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double p = (u[r * k + a] - avg[a]) * (u[r * k + b] - avg[b]);
        s1 += p;
        s2 += p * p;
      }
      cc.empirical = s1 / dr;
      cc.se = std::sqrt(std::max(0.0, s2 / dr - cc.empirical * cc.empirical) / dr);
      cc.within = std::abs(cc.empirical - cc.expected) <= 4.0 * cc.se ||
                  (cc.se == 0.0 && cc.empirical == cc.expected);
      rep.covariances.push_back(cc);
    }
  }

  rep.pass = rep.rejections <= 1 &&
             std::all_of(rep.covariances.begin(), rep.covariances.end(),
                         [](const CovarianceCheck& c) { return c.within; });
  return rep;
}

}  // namespace safearea
