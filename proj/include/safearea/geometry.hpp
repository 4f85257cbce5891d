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

#ifndef SAFEAREA_GEOMETRY_HPP_
#define SAFEAREA_GEOMETRY_HPP_

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace safearea {

// A point of the site space R^d. Coordinates are always finite.
class Site {
 public:
  Site() = default;
  explicit Site(std::vector<double> coords);
  Site(std::initializer_list<double> coords) : Site(std::vector<double>(coords)) {}

  static Site origin(std::size_t dim) { return Site(std::vector<double>(dim, 0.0)); }

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const Site&, const Site&) = default;

 private:
  std::vector<double> coords_;
};

double distance(std::span<const double> a, std::span<const double> b);
inline double distance(const Site& a, const Site& b) { return distance(a.coords(), b.coords()); }

// Exact sum of finitely many doubles. Analytic diameters are accumulated in
// this type so that half the difference of consecutive diameters gives back
// the dilation radius bit for bit.
class ExactLength {
 public:
  ExactLength() = default;
  explicit ExactLength(double v);

  ExactLength& operator+=(const ExactLength& o) {
    q_ += o.q_;
    return *this;
  }
  friend ExactLength operator+(ExactLength a, const ExactLength& b) { return a += b; }
  friend ExactLength operator-(const ExactLength& a, const ExactLength& b) {
    ExactLength r;
    r.q_ = a.q_ - b.q_;
    return r;
  }
  ExactLength twice() const;
  ExactLength half() const;

  // Nearest double (exact whenever the value is representable).
  double to_double() const;
  // Lossless text form "num/den", parseable by parse().
  std::string str() const { return q_.get_str(); }
  static ExactLength parse(const std::string& s);

  friend bool operator==(const ExactLength& a, const ExactLength& b) { return a.q_ == b.q_; }
  friend bool operator<(const ExactLength& a, const ExactLength& b) { return a.q_ < b.q_; }
  int sign() const { return sgn(q_); }

 private:
  mpq_class q_{0};
};

// Support of an infection measure. Three representations: a closed ball, the
// closed delta-neighbourhood of another support, or a finite point set.
class SupportSet {
 public:
  struct Ball {
    Site center;
    double radius = 0.0;
  };
  struct Dilated {
    std::shared_ptr<const SupportSet> base;
    double delta = 0.0;
  };
  struct PointCloud {
    std::size_t dim = 0;
    std::vector<double> coords;  // row-major, dim values per point
    std::size_t size() const noexcept { return dim == 0 ? 0 : coords.size() / dim; }
    std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
  };
  using Rep = std::variant<Ball, Dilated, PointCloud>;

  static SupportSet ball(Site center, double radius);
  // A Dilated node over `base`, kept as a separate node (no simplification).
  static SupportSet dilated(SupportSet base, double delta);
  static SupportSet point_cloud(const std::vector<Site>& points);
  static SupportSet point_cloud(std::size_t dim, std::vector<double> coords);

  const Rep& rep() const noexcept { return rep_; }
  std::size_t dim() const;
  std::string kind() const;

  const Ball* as_ball() const noexcept { return std::get_if<Ball>(&rep_); }
  const Dilated* as_dilated() const noexcept { return std::get_if<Dilated>(&rep_); }
  const PointCloud* as_point_cloud() const noexcept { return std::get_if<PointCloud>(&rep_); }

  friend bool operator==(const SupportSet& a, const SupportSet& b);

  nlohmann::json to_json() const;
  static SupportSet from_json(const nlohmann::json& j);

 private:
  explicit SupportSet(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

// Closed delta-neighbourhood. Balls grow their radius, dilations compose
// additively, point clouds get wrapped. delta == 0 returns A unchanged.
SupportSet dilate(const SupportSet& a, double delta);

struct DiameterOptions {
  // Point clouds larger than this go through a convex hull first (d = 2).
  std::size_t hull_threshold = 64;
};

double diameter(const SupportSet& a, const DiameterOptions& opts = {});
ExactLength exact_diameter(const SupportSet& a, const DiameterOptions& opts = {});

// Maximum pairwise Euclidean distance of a flat point array.
double point_cloud_diameter(std::size_t dim, std::span<const double> coords,
                            const DiameterOptions& opts = {});

// Euclidean distance from x to the set (0 inside).
double distance(std::span<const double> x, const SupportSet& a);
inline double distance(const Site& x, const SupportSet& a) { return distance(x.coords(), a); }

// sup over x in `from` of distance(x, to). Exact when `from` is a point cloud,
// when both are balls, when `to` is a dilation, and when `from` is a dilation
// of `to` itself; otherwise an upper bound that is exact for convex `to`.
double farthest_distance(const SupportSet& from, const SupportSet& to);

// K = complement of base^delta, kept implicit.
struct SafetyArea {
  SupportSet base;
  double delta = 0.0;
  double level = 0.05;
  std::optional<double> epsilon;

  SafetyArea(SupportSet base, double delta, double level, std::optional<double> epsilon = {});

  bool contains(std::span<const double> x) const { return distance(x, base) > delta; }
  bool contains(const Site& x) const { return contains(x.coords()); }
};

// True iff K intersects next.
bool breach(const SafetyArea& k, const SupportSet& next);

}  // namespace safearea

#endif  // SAFEAREA_GEOMETRY_HPP_
