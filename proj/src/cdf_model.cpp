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

#include "safearea/cdf_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "safearea/error.hpp"

namespace safearea {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

CdfModel CdfModel::uniform(double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw InvalidArgument("uniform law needs finite lo < hi");
  return CdfModel(UniformLaw{lo, hi});
}

CdfModel CdfModel::beta(double p, double q, double scale) {
  if (!(p > 0 && q > 0 && scale > 0 && std::isfinite(scale)))
    throw InvalidArgument("beta law needs p, q, scale > 0");
  return CdfModel(BetaLaw{p, q, scale});
}

CdfModel CdfModel::trunc_exp(double rate, double cap) {
  if (!(rate > 0 && cap > 0 && std::isfinite(rate) && std::isfinite(cap)))
    throw InvalidArgument("truncated exponential needs rate, cap > 0");
  return CdfModel(TruncExpLaw{rate, cap});
}

CdfModel CdfModel::affine(CdfModel base, double scale, double shift) {
  if (!(scale > 0 && std::isfinite(scale) && std::isfinite(shift)))
    throw InvalidArgument("affine law needs finite scale > 0");
  if (scale == 1.0 && shift == 0.0) return base;
  return CdfModel(AffineLaw{std::make_shared<const CdfModel>(std::move(base)), scale, shift});
}

CdfModel CdfModel::mixture(std::vector<double> weights, std::vector<CdfModel> components) {
  if (components.empty() || weights.size() != components.size())
    throw InvalidArgument("mixture needs one weight per component");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0 && std::isfinite(w))) throw InvalidArgument("mixture weights must be positive");
    total += w;
  }
  if (components.size() == 1) return components.front();
  for (double& w : weights) w /= total;
  return CdfModel(MixtureLaw{std::move(weights), std::move(components)});
}

CdfModel CdfModel::equal_mixture(std::vector<CdfModel> components) {
  std::vector<double> w(components.size(), 1.0);
  return mixture(std::move(w), std::move(components));
}

double CdfModel::cdf(double t) const {
  if (std::isnan(t)) return t;
  return std::visit(
      overloaded{
          [t](const UniformLaw& u) { return clamp01((t - u.lo) / (u.hi - u.lo)); },
          [t](const BetaLaw& b) {
            if (t <= 0) return 0.0;
            if (t >= b.scale) return 1.0;
            return boost::math::ibeta(b.p, b.q, t / b.scale);
          },
          [t](const TruncExpLaw& e) {
            if (t <= 0) return 0.0;
            if (t >= e.cap) return 1.0;
            return std::expm1(-e.rate * t) / std::expm1(-e.rate * e.cap);
          },
          [t](const AffineLaw& a) { return a.base->cdf((t - a.shift) / a.scale); },
          [t](const MixtureLaw& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.components.size(); ++i)
              s += m.weights[i] * m.components[i].cdf(t);
            return clamp01(s);
          }},
      law_);
}

double CdfModel::density(double t) const {
  return std::visit(
      overloaded{
          [t](const UniformLaw& u) {
            return (t >= u.lo && t <= u.hi) ? 1.0 / (u.hi - u.lo) : 0.0;
          },
          [t](const BetaLaw& b) {
            if (t <= 0 || t >= b.scale) return 0.0;
            return boost::math::ibeta_derivative(b.p, b.q, t / b.scale) / b.scale;
          },
          [t](const TruncExpLaw& e) {
            if (t < 0 || t > e.cap) return 0.0;
            return e.rate * std::exp(-e.rate * t) / -std::expm1(-e.rate * e.cap);
          },
          [t](const AffineLaw& a) { return a.base->density((t - a.shift) / a.scale) / a.scale; },
          [t](const MixtureLaw& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.components.size(); ++i)
              s += m.weights[i] * m.components[i].density(t);
            return s;
          }},
      law_);
}

double CdfModel::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile level outside [0, 1]");
  return std::visit(
      overloaded{
          [p](const UniformLaw& u) { return u.lo + p * (u.hi - u.lo); },
          [p](const BetaLaw& b) {
            if (p == 0.0) return 0.0;
            if (p == 1.0) return b.scale;
            return b.scale * boost::math::ibeta_inv(b.p, b.q, p);
          },
          [p](const TruncExpLaw& e) {
            return -std::log1p(p * std::expm1(-e.rate * e.cap)) / e.rate;
          },
          [p](const AffineLaw& a) { return a.shift + a.scale * a.base->quantile(p); },
          [this, p](const MixtureLaw&) {
            // Bisection on the monotone mixture CDF.
            double lo = lower();
            double hi = upper();
            if (p <= 0.0) return lo;
            if (p >= 1.0) return hi;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
              const double mid = 0.5 * (lo + hi);
              if (cdf(mid) < p)
                lo = mid;
              else
                hi = mid;
            }
            return hi;
          }},
      law_);
}

double CdfModel::sample(Rng& rng) const {
  if (const auto* m = std::get_if<MixtureLaw>(&law_)) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t k = 0;
    for (; k + 1 < m->weights.size(); ++k) {
      acc += m->weights[k];
      if (u < acc) break;
    }
    return m->components[k].sample(rng);
  }
  if (const auto* a = std::get_if<AffineLaw>(&law_)) return a->shift + a->scale * a->base->sample(rng);
  return quantile(rng.uniform());
}

double CdfModel::lower() const {
  return std::visit(overloaded{[](const UniformLaw& u) { return u.lo; },
                               [](const BetaLaw&) { return 0.0; },
                               [](const TruncExpLaw&) { return 0.0; },
                               [](const AffineLaw& a) { return a.shift + a.scale * a.base->lower(); },
                               [](const MixtureLaw& m) {
                                 double v = m.components.front().lower();
                                 for (const auto& c : m.components) v = std::min(v, c.lower());
                                 return v;
                               }},
                    law_);
}

double CdfModel::upper() const {
  return std::visit(overloaded{[](const UniformLaw& u) { return u.hi; },
                               [](const BetaLaw& b) { return b.scale; },
                               [](const TruncExpLaw& e) { return e.cap; },
                               [](const AffineLaw& a) { return a.shift + a.scale * a.base->upper(); },
                               [](const MixtureLaw& m) {
                                 double v = m.components.front().upper();
                                 for (const auto& c : m.components) v = std::max(v, c.upper());
                                 return v;
                               }},
                    law_);
}

std::string CdfModel::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const UniformLaw& u) { os << "Uniform(" << u.lo << ", " << u.hi << ")"; },
                        [&](const BetaLaw& b) {
                          os << "Beta(" << b.p << ", " << b.q << ")";
                          if (b.scale != 1.0) os << "*" << b.scale;
                        },
                        [&](const TruncExpLaw& e) { os << "TruncExp(" << e.rate << ", " << e.cap << ")"; },
                        [&](const AffineLaw& a) {
                          os << a.shift << " + " << a.scale << "*" << a.base->describe();
                        },
                        [&](const MixtureLaw& m) {
                          os << "Mixture[";
                          for (std::size_t i = 0; i < m.components.size(); ++i) {
                            if (i) os << ", ";
                            os << m.weights[i] << ":" << m.components[i].describe();
                          }
                          os << "]";
                        }},
             law_);
  return os.str();
}

nlohmann::json CdfModel::to_json() const {
  using nlohmann::json;
  return std::visit(
      overloaded{[](const UniformLaw& u) { return json{{"kind", "uniform"}, {"lo", u.lo}, {"hi", u.hi}}; },
                 [](const BetaLaw& b) {
                   return json{{"kind", "beta"}, {"p", b.p}, {"q", b.q}, {"scale", b.scale}};
                 },
                 [](const TruncExpLaw& e) {
                   return json{{"kind", "trunc_exp"}, {"rate", e.rate}, {"cap", e.cap}};
                 },
                 [](const AffineLaw& a) {
                   return json{{"kind", "affine"},
                               {"base", a.base->to_json()},
                               {"scale", a.scale},
                               {"shift", a.shift}};
                 },
                 [](const MixtureLaw& m) {
                   json comps = json::array();
                   for (const auto& c : m.components) comps.push_back(c.to_json());
                   return json{{"kind", "mixture"}, {"weights", m.weights}, {"components", comps}};
                 }},
      law_);
}

CdfModel CdfModel::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform") return uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    if (kind == "beta")
      return beta(j.at("p").get<double>(), j.at("q").get<double>(), j.value("scale", 1.0));
    if (kind == "trunc_exp") return trunc_exp(j.at("rate").get<double>(), j.at("cap").get<double>());
    if (kind == "affine")
      return affine(from_json(j.at("base")), j.at("scale").get<double>(), j.value("shift", 0.0));
    if (kind == "mixture") {
      std::vector<CdfModel> comps;
      for (const auto& c : j.at("components")) comps.push_back(from_json(c));
      return mixture(j.at("weights").get<std::vector<double>>(), std::move(comps));
    }
    throw InvalidArgument("unknown distribution kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed distribution: ") + e.what());
  }
}

}  // namespace safearea
