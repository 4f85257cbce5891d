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

#ifndef SAFEAREA_CDF_MODEL_HPP_
#define SAFEAREA_CDF_MODEL_HPP_

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "safearea/rng.hpp"

namespace safearea {

class CdfModel;

struct UniformLaw {
  double lo = 0.0;
  double hi = 1.0;
};

// Beta(p, q) stretched onto (0, scale).
struct BetaLaw {
  double p = 1.0;
  double q = 1.0;
  double scale = 1.0;
};

// Exponential(rate) conditioned on [0, cap].
struct TruncExpLaw {
  double rate = 1.0;
  double cap = 1.0;
};

// Law of shift + scale * X with X ~ base.
struct AffineLaw {
  std::shared_ptr<const CdfModel> base;
  double scale = 1.0;
  double shift = 0.0;
};

struct MixtureLaw {
  std::vector<double> weights;  // normalized, positive
  std::vector<CdfModel> components;
};

// A named continuous distribution on the real line: evaluation, inversion and
// sampling. Immutable once built; cheap to copy.
class CdfModel {
 public:
  using Law = std::variant<UniformLaw, BetaLaw, TruncExpLaw, AffineLaw, MixtureLaw>;

  static CdfModel uniform(double lo, double hi);
  static CdfModel beta(double p, double q, double scale = 1.0);
  static CdfModel trunc_exp(double rate, double cap);
  static CdfModel affine(CdfModel base, double scale, double shift);
  // Weights are normalized; a single component collapses to itself.
  static CdfModel mixture(std::vector<double> weights, std::vector<CdfModel> components);
  static CdfModel equal_mixture(std::vector<CdfModel> components);

  double cdf(double t) const;
  // Left-continuous generalized inverse, p in [0, 1].
  double quantile(double p) const;
  double density(double t) const;
  double sample(Rng& rng) const;

  // Closed support interval [lower(), upper()].
  double lower() const;
  double upper() const;

  const Law& law() const noexcept { return law_; }
  std::string describe() const;

  nlohmann::json to_json() const;
  static CdfModel from_json(const nlohmann::json& j);

 private:
  explicit CdfModel(Law law) : law_(std::move(law)) {}
  Law law_;
};

}  // namespace safearea

#endif  // SAFEAREA_CDF_MODEL_HPP_
