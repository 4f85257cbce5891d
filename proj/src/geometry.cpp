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

#include "safearea/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "safearea/error.hpp"

namespace safearea {

Site::Site(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidArgument("site needs at least one coordinate");
  for (double c : coords_)
    if (!std::isfinite(c)) throw InvalidArgument("site coordinates must be finite");
}

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// ExactLength

ExactLength::ExactLength(double v) {
  if (!std::isfinite(v)) throw InvalidArgument("length must be finite");
  q_ = mpq_class(v);
}

ExactLength ExactLength::twice() const {
  ExactLength r;
  r.q_ = q_ * 2;
  return r;
}

ExactLength ExactLength::half() const {
  ExactLength r;
  r.q_ = q_ / 2;
  return r;
}

double ExactLength::to_double() const {
  // mpq_get_d truncates toward zero; look at the neighbour away from zero.
  const double t = q_.get_d();
  const double away = std::nextafter(t, sgn(q_) >= 0 ? std::numeric_limits<double>::infinity()
                                                     : -std::numeric_limits<double>::infinity());
  if (!std::isfinite(away)) return t;
  const mpq_class et = abs(q_ - mpq_class(t));
  const mpq_class ea = abs(q_ - mpq_class(away));
  return ea < et ? away : t;
}

ExactLength ExactLength::parse(const std::string& s) {
  ExactLength r;
  try {
    r.q_ = mpq_class(s);
    r.q_.canonicalize();
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("not an exact length: '" + s + "'");
  }
  return r;
}

// ---------------------------------------------------------------------------
// SupportSet

SupportSet SupportSet::ball(Site center, double radius) {
  if (!(radius >= 0.0 && std::isfinite(radius))) throw InvalidArgument("ball radius must be >= 0");
  if (center.dim() == 0) throw InvalidArgument("ball center has no coordinates");
  return SupportSet(Ball{std::move(center), radius});
}

SupportSet SupportSet::dilated(SupportSet base, double delta) {
  if (!(delta >= 0.0 && std::isfinite(delta))) throw InvalidArgument("dilation delta must be >= 0");
  return SupportSet(Dilated{std::make_shared<const SupportSet>(std::move(base)), delta});
}

SupportSet SupportSet::point_cloud(const std::vector<Site>& points) {
  if (points.empty()) throw InvalidArgument("point cloud must be nonempty");
  const std::size_t dim = points.front().dim();
  std::vector<double> flat;
  flat.reserve(points.size() * dim);
  for (const auto& p : points) {
    if (p.dim() != dim) throw InvalidArgument("point cloud mixes dimensions");
    flat.insert(flat.end(), p.coords().begin(), p.coords().end());
  }
  return SupportSet(PointCloud{dim, std::move(flat)});
}

SupportSet SupportSet::point_cloud(std::size_t dim, std::vector<double> coords) {
  if (dim == 0 || coords.empty() || coords.size() % dim != 0)
    throw InvalidArgument("point cloud must be nonempty with whole points");
  for (double c : coords)
    if (!std::isfinite(c)) throw InvalidArgument("point coordinates must be finite");
  return SupportSet(PointCloud{dim, std::move(coords)});
}

std::size_t SupportSet::dim() const {
  if (const auto* b = as_ball()) return b->center.dim();
  if (const auto* d = as_dilated()) return d->base->dim();
  return as_point_cloud()->dim;
}

std::string SupportSet::kind() const {
  if (as_ball()) return "ball";
  if (as_dilated()) return "dilated";
  return "point_cloud";
}

bool operator==(const SupportSet& a, const SupportSet& b) {
  if (&a == &b) return true;
  if (a.rep_.index() != b.rep_.index()) return false;
  if (const auto* x = a.as_ball()) {
    const auto* y = b.as_ball();
    return x->center == y->center && x->radius == y->radius;
  }
  if (const auto* x = a.as_dilated()) {
    const auto* y = b.as_dilated();
    return x->delta == y->delta && (x->base == y->base || *x->base == *y->base);
  }
  const auto* x = a.as_point_cloud();
  const auto* y = b.as_point_cloud();
  return x->dim == y->dim && x->coords == y->coords;
}

nlohmann::json SupportSet::to_json() const {
  using nlohmann::json;
  if (const auto* b = as_ball()) {
    return json{{"kind", "ball"},
                {"center", std::vector<double>(b->center.coords().begin(), b->center.coords().end())},
                {"radius", b->radius}};
  }
  if (const auto* d = as_dilated()) {
    return json{{"kind", "dilated"}, {"base", d->base->to_json()}, {"delta", d->delta}};
  }
  const auto* pc = as_point_cloud();
  json pts = json::array();
  for (std::size_t i = 0; i < pc->size(); ++i) {
    auto p = pc->point(i);
    pts.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return json{{"kind", "point_cloud"}, {"points", pts}};
}

SupportSet SupportSet::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ball")
      return ball(Site(j.at("center").get<std::vector<double>>()), j.at("radius").get<double>());
    if (kind == "dilated") return dilated(from_json(j.at("base")), j.at("delta").get<double>());
    if (kind == "point_cloud") {
      std::vector<Site> pts;
      for (const auto& p : j.at("points")) pts.emplace_back(p.get<std::vector<double>>());
      return point_cloud(pts);
    }
    throw InvalidArgument("unknown support kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed support: ") + e.what());
  }
}

SupportSet dilate(const SupportSet& a, double delta) {
  if (!(delta >= 0.0 && std::isfinite(delta))) throw InvalidArgument("dilation delta must be >= 0");
  if (delta == 0.0) return a;
  if (const auto* b = a.as_ball()) return SupportSet::ball(b->center, b->radius + delta);
  if (const auto* d = a.as_dilated()) return SupportSet::dilated(*d->base, d->delta + delta);
  return SupportSet::dilated(a, delta);
}

// ---------------------------------------------------------------------------
// Diameters

namespace {

double cross(const double* o, const double* a, const double* b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; returns hull vertex indices.
std::vector<std::size_t> convex_hull_2d(std::span<const double> xy) {
  const std::size_t n = xy.size() / 2;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return xy[2 * i] < xy[2 * j] || (xy[2 * i] == xy[2 * j] && xy[2 * i + 1] < xy[2 * j + 1]);
  });
  if (n < 3) return idx;
  std::vector<std::size_t> hull(2 * n);
  std::size_t k = 0;
  auto pt = [&](std::size_t i) { return xy.data() + 2 * i; };
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(pt(hull[k - 2]), pt(hull[k - 1]), pt(idx[i])) <= 0) --k;
    hull[k++] = idx[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(pt(hull[k - 2]), pt(hull[k - 1]), pt(idx[i])) <= 0) --k;
    hull[k++] = idx[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  return hull;
}

double brute_force_diameter(std::size_t dim, std::span<const double> coords,
                            std::span<const std::size_t> subset) {
  double best = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    const double* p = coords.data() + subset[a] * dim;
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const double* q = coords.data() + subset[b] * dim;
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = p[k] - q[k];
        s += d * d;
      }
      best = std::max(best, s);
    }
  }
  return std::sqrt(best);
}

}  // namespace

double point_cloud_diameter(std::size_t dim, std::span<const double> coords,
                            const DiameterOptions& opts) {
  if (dim == 0 || coords.empty()) throw InvalidArgument("diameter of an empty set");
  const std::size_t n = coords.size() / dim;
  if (dim == 1) {
    const auto [lo, hi] = std::minmax_element(coords.begin(), coords.end());
    return *hi - *lo;
  }
  std::vector<std::size_t> subset;
  if (dim == 2 && n > opts.hull_threshold) {
    subset = convex_hull_2d(coords);
  } else {
    subset.resize(n);
    std::iota(subset.begin(), subset.end(), 0);
  }
  return brute_force_diameter(dim, coords, subset);
}

double diameter(const SupportSet& a, const DiameterOptions& opts) {
  if (const auto* b = a.as_ball()) return 2.0 * b->radius;
  if (const auto* d = a.as_dilated()) return diameter(*d->base, opts) + 2.0 * d->delta;
  const auto* pc = a.as_point_cloud();
  return point_cloud_diameter(pc->dim, pc->coords, opts);
}

ExactLength exact_diameter(const SupportSet& a, const DiameterOptions& opts) {
  if (const auto* b = a.as_ball()) return ExactLength(b->radius).twice();
  if (const auto* d = a.as_dilated())
    return exact_diameter(*d->base, opts) + ExactLength(d->delta).twice();
  return ExactLength(diameter(a, opts));
}

// ---------------------------------------------------------------------------
// Distances and breach

double distance(std::span<const double> x, const SupportSet& a) {
  if (const auto* b = a.as_ball())
    return std::max(0.0, distance(x, b->center.coords()) - b->radius);
  if (const auto* d = a.as_dilated()) return std::max(0.0, distance(x, *d->base) - d->delta);
  const auto* pc = a.as_point_cloud();
  if (x.size() != pc->dim) throw InvalidArgument("dimension mismatch");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pc->size(); ++i) best = std::min(best, distance(x, pc->point(i)));
  return best;
}

double farthest_distance(const SupportSet& from, const SupportSet& to) {
  if (from.dim() != to.dim()) throw InvalidArgument("dimension mismatch");
  if (const auto* d = from.as_dilated()) {
    if (d->base.get() == &to || *d->base == to) return d->delta;
  }
  if (const auto* d = to.as_dilated()) return std::max(0.0, farthest_distance(from, *d->base) - d->delta);
  if (const auto* pc = from.as_point_cloud()) {
    double best = 0.0;
    for (std::size_t i = 0; i < pc->size(); ++i) best = std::max(best, distance(pc->point(i), to));
    return best;
  }
  if (const auto* b = from.as_ball()) {
    if (const auto* tb = to.as_ball())
      return std::max(0.0, distance(b->center, tb->center) + b->radius - tb->radius);
    return distance(b->center, to) + b->radius;
  }
  const auto* d = from.as_dilated();
  return farthest_distance(*d->base, to) + d->delta;
}

SafetyArea::SafetyArea(SupportSet base_, double delta_, double level_, std::optional<double> epsilon_)
    : base(std::move(base_)), delta(delta_), level(level_), epsilon(epsilon_) {
  if (!(delta >= 0.0 && std::isfinite(delta))) throw InvalidArgument("safety delta must be >= 0");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("safety level must lie in (0, 1)");
  if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0))
    throw InvalidArgument("epsilon must lie in (0, 1)");
}

bool breach(const SafetyArea& k, const SupportSet& next) {
  return farthest_distance(next, k.base) > k.delta;
}

}  // namespace safearea
