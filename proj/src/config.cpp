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

#include "safearea/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "safearea/error.hpp"

namespace safearea {

using nlohmann::json;

// ---------------------------------------------------------------------------
// TOML subset

namespace {

class TomlParser {
 public:
  explicit TomlParser(const std::string& text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (!at_end()) {
      skip_blank();
      if (at_end()) break;
      const char c = peek();
      if (c == '\n') {
        advance();
        continue;
      }
      if (c == '#') {
        skip_comment();
        continue;
      }
      if (c == '[') {
        table = &table_header(root);
      } else {
        key_value(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("config line " + std::to_string(line_) + ": " + what);
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char advance() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_blank() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  void skip_comment() {
    while (!at_end() && peek() != '\n') advance();
  }
  // Whitespace, newlines and comments, as allowed inside arrays.
  void skip_all() {
    for (;;) {
      skip_blank();
      if (peek() == '#') {
        skip_comment();
      } else if (peek() == '\n') {
        advance();
      } else {
        return;
      }
    }
  }
  void end_of_line() {
    skip_blank();
    if (peek() == '#') skip_comment();
    if (at_end()) return;
    if (peek() != '\n') fail("unexpected text after value");
    advance();
  }

  std::vector<std::string> key_path() {
    std::vector<std::string> path;
    for (;;) {
      skip_blank();
      std::string k;
      if (peek() == '"') {
        k = basic_string();
      } else {
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                             peek() == '-'))
          k += advance();
        if (k.empty()) fail("expected a key");
      }
      path.push_back(k);
      skip_blank();
      if (peek() != '.') return path;
      advance();
    }
  }

  json& table_header(json& root) {
    advance();
    if (peek() == '[') fail("arrays of tables are not supported");
    const auto path = key_path();
    skip_blank();
    if (peek() != ']') fail("expected ']'");
    advance();
    json* t = &root;
    std::string joined;
    for (const auto& k : path) {
      joined += (joined.empty() ? "" : ".") + k;
      if (!t->contains(k)) (*t)[k] = json::object();
      t = &(*t)[k];
      if (!t->is_object()) fail("'" + joined + "' is not a table");
    }
    if (!defined_.insert(joined).second) fail("table [" + joined + "] defined twice");
    return *t;
  }

  void key_value(json& table) {
    const auto path = key_path();
    skip_blank();
    if (peek() != '=') fail("expected '='");
    advance();
    skip_blank();
    json v = value();
    json* t = &table;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (!t->contains(path[i])) (*t)[path[i]] = json::object();
      t = &(*t)[path[i]];
      if (!t->is_object()) fail("'" + path[i] + "' is not a table");
    }
    if (t->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*t)[path.back()] = std::move(v);
  }

  json value() {
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    std::string tok;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                         peek() == '-' || peek() == '.' || peek() == '_'))
      tok += advance();
    if (tok.empty()) fail("expected a value");
    if (tok == "true") return true;
    if (tok == "false") return false;
    return number(tok);
  }

  json number(std::string tok) {
    std::string clean;
    for (char ch : tok)
      if (ch != '_') clean += ch;
    std::string body = clean;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) body.erase(0, 1);
    if (body == "inf") return clean[0] == '-' ? -std::numeric_limits<double>::infinity()
                                              : std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = clean.find_first_of(".eE") != std::string::npos;
    std::size_t used = 0;
    try {
      if (is_float) {
        const double d = std::stod(clean, &used);
        if (used == clean.size()) return d;
      } else {
        const long long i = std::stoll(clean, &used, 10);
        if (used == clean.size()) return i;
      }
    } catch (const std::exception&) {
    }
    fail("bad value '" + tok + "'");
  }

  std::string basic_string() {
    advance();
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = advance();
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      const char e = at_end() ? '\0' : advance();
      switch (e) {
        case '"':
          out += '"';
          break;
        case '\\':
          out += '\\';
          break;
        case 'n':
          out += '\n';
          break;
        case 't':
          out += '\t';
          break;
        default:
          fail("unsupported escape in string");
      }
    }
  }

  std::string literal_string() {
    advance();
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = advance();
      if (c == '\'') return out;
      out += c;
    }
  }

  json array() {
    advance();
    json arr = json::array();
    for (;;) {
      skip_all();
      if (peek() == ']') {
        advance();
        return arr;
      }
      arr.push_back(value());
      skip_all();
      if (peek() == ',') {
        advance();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  json inline_table() {
    advance();
    json t = json::object();
    skip_blank();
    if (peek() == '}') {
      advance();
      return t;
    }
    for (;;) {
      key_value(t);
      skip_blank();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() == '}') {
        advance();
        return t;
      }
      fail("expected ',' or '}' in inline table");
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::set<std::string> defined_;
};

}  // namespace

json parse_toml(const std::string& text) { return TomlParser(text).parse(); }

// ---------------------------------------------------------------------------
// Schema

namespace {

// Typed access to one table; remembers which keys were read so leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (root.contains(name_)) {
      j_ = &root.at(name_);
      if (!j_->is_object()) fail("", "must be a table");
    }
  }

  bool has(const std::string& key) const { return j_ != nullptr && j_->contains(key); }

  double number(const std::string& key, double def) {
    const json* v = get(key);
    if (v == nullptr) return def;
    if (!v->is_number()) fail(key, "must be a number");
    return v->get<double>();
  }

  std::int64_t integer(const std::string& key, std::int64_t def) {
    const json* v = get(key);
    if (v == nullptr) return def;
    if (!v->is_number_integer()) fail(key, "must be an integer");
    return v->get<std::int64_t>();
  }

  std::size_t count(const std::string& key, std::size_t def, std::size_t min_value) {
    const std::int64_t v = integer(key, static_cast<std::int64_t>(def));
    if (v < static_cast<std::int64_t>(min_value))
      fail(key, "must be >= " + std::to_string(min_value));
    return static_cast<std::size_t>(v);
  }

  bool boolean(const std::string& key, bool def) {
    const json* v = get(key);
    if (v == nullptr) return def;
    if (!v->is_boolean()) fail(key, "must be true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& def) {
    const json* v = get(key);
    if (v == nullptr) return def;
    if (!v->is_string()) fail(key, "must be a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> def) {
    const json* v = get(key);
    if (v == nullptr) return def;
    return to_numbers(*v, key);
  }

  std::vector<std::vector<double>> number_rows(const std::string& key) {
    const json* v = get(key);
    if (v == nullptr) return {};
    if (!v->is_array()) fail(key, "must be an array of arrays");
    std::vector<std::vector<double>> rows;
    for (const auto& row : *v) rows.push_back(to_numbers(row, key));
    return rows;
  }

  std::vector<std::size_t> counts(const std::string& key) {
    const json* v = get(key);
    if (v == nullptr) return {};
    if (!v->is_array()) fail(key, "must be an array of integers");
    std::vector<std::size_t> out;
    for (const auto& e : *v) {
      if (!e.is_number_integer() || e.get<std::int64_t>() < 1)
        fail(key, "must contain integers >= 1");
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

  void finish() const {
    if (j_ == nullptr) return;
    for (const auto& [k, v] : j_->items())
      if (used_.count(k) == 0) fail(k, "is not a known key");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ValidationError("[" + name_ + "]" + (key.empty() ? "" : " " + key) + " " + what);
  }

 private:
  const json* get(const std::string& key) {
    used_.insert(key);
    if (j_ == nullptr || !j_->contains(key)) return nullptr;
    return &j_->at(key);
  }

  std::vector<double> to_numbers(const json& v, const std::string& key) const {
    if (!v.is_array()) fail(key, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(key, "must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::string name_;
  const json* j_ = nullptr;
  std::set<std::string> used_;
};

template <typename F>
auto rethrow_as_validation(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError("[" + where + "] " + e.what());
  }
}

void check_probability(Section& s, const std::string& key, double v) {
  if (!(v > 0.0 && v < 1.0)) s.fail(key, "must lie in (0, 1)");
}

}  // namespace

EpidemicConfig ScenarioConfig::epidemic() const {
  EpidemicConfig e;
  e.dim = dimension;
  e.s0 = s0;
  e.kernel = kernel;
  e.noise = noise;
  e.covariate = covariate;
  e.particles = particles;
  e.step.workers = workers;
  return e;
}

std::vector<std::size_t> ScenarioConfig::ladder() const {
  return n_ladder.empty() ? std::vector<std::size_t>{horizon} : n_ladder;
}

CdfModel ScenarioConfig::iid_radius_law() const {
  if (covariate.mode() == CovariateProcess::Mode::kConstant)
    return rethrow_as_validation("kernel", [&] {
      return radius_law(kernel, noise, covariate.cycle_values().front());
    });
  if (kernel.radius_map == RadiusMap::kIdentity) return noise.law();
  throw ValidationError(
      "[estimator] mode iid needs radii that depend on the noise only: use a constant "
      "covariate or the identity radius map");
}

json ScenarioConfig::to_json() const {
  json j;
  j["scenario"] = {{"dimension", dimension},   {"horizon", horizon},
                   {"particles", particles},   {"replications", replications},
                   {"seed", seed},             {"simulate_full", simulate_full},
                   {"allow_violations", allow_violations}, {"n_ladder", ladder()}};
  j["support"] = s0.to_json();
  j["kernel"] = kernel.to_json();
  j["noise"] = noise.to_json();
  j["covariate"] = covariate.to_json();
  json est;
  est["mode"] = estimator.mode == EstimatorMode::kIid ? "iid" : "dependent";
  est["alpha"] = estimator.alpha;
  if (estimator.mode == EstimatorMode::kIid) {
    est["cn_method"] = to_string(estimator.cn_method);
    if (estimator.cn_method == CnMethod::kMonteCarlo) est["cn_reps"] = estimator.cn_reps;
    if (estimator.cn_method == CnMethod::kDkw) est["dkw_beta"] = estimator.dkw_beta;
  } else {
    est["epsilon"] = estimator.epsilon;
    est["paths"] = estimator.paths;
    est["grid"] = estimator.grid;
    est["sup_mode"] =
        estimator.sup_mode == SupMode::kGridMax ? "grid_max" : "bridge_interpolated";
  }
  j["estimator"] = std::move(est);
  return j;
}

ScenarioConfig scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a set of tables");
  static const std::set<std::string> kTables = {"scenario", "support",   "kernel",
                                                "noise",    "covariate", "estimator"};
  for (const auto& [k, v] : doc.items())
    if (kTables.count(k) == 0) throw ValidationError("unknown table [" + k + "]");

  ScenarioConfig c;

  Section sc(doc, "scenario");
  c.dimension = sc.count("dimension", 2, 1);
  if (c.dimension > 64) sc.fail("dimension", "must be <= 64");
  c.horizon = sc.count("horizon", 200, 1);
  c.particles = sc.count("particles", 0, 0);
  c.replications = sc.count("replications", 2000, 1);
  const std::int64_t seed = sc.integer("seed", 1);
  if (seed < 0) sc.fail("seed", "must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.workers = static_cast<unsigned>(sc.count("workers", 0, 0));
  c.simulate_full = sc.boolean("simulate_full", false);
  c.allow_violations = sc.boolean("allow_violations", false);
  c.output_dir = sc.string("output_dir", ".");
  c.n_ladder = sc.counts("n_ladder");
  sc.finish();

  Section su(doc, "support");
  const std::string kind = su.string("kind", "point");
  if (kind == "point" || kind == "ball") {
    const auto center = su.numbers("center", std::vector<double>(c.dimension, 0.0));
    if (center.size() != c.dimension) su.fail("center", "must have `dimension` coordinates");
    const double radius = kind == "ball" ? su.number("radius", 1.0) : 0.0;
    if (!(radius >= 0.0) || !std::isfinite(radius)) su.fail("radius", "must be finite and >= 0");
    c.s0 = rethrow_as_validation("support", [&] { return SupportSet::ball(Site(center), radius); });
  } else if (kind == "point_cloud") {
    const auto rows = su.number_rows("points");
    if (rows.empty()) su.fail("points", "must list at least one point");
    std::vector<Site> pts;
    for (const auto& r : rows) {
      if (r.size() != c.dimension) su.fail("points", "must have `dimension` coordinates each");
      pts.push_back(rethrow_as_validation("support", [&] { return Site(r); }));
    }
    c.s0 = rethrow_as_validation("support", [&] { return SupportSet::point_cloud(pts); });
  } else {
    su.fail("kind", "must be one of point, ball, point_cloud");
  }
  su.finish();

  Section ke(doc, "kernel");
  c.kernel.radius_map = rethrow_as_validation(
      "kernel", [&] { return parse_radius_map(ke.string("radius_map", "identity")); });
  c.kernel.profile = rethrow_as_validation(
      "kernel", [&] { return parse_kernel_profile(ke.string("profile", "uniform_ball")); });
  ke.finish();

  Section no(doc, "noise");
  const std::string family = no.string("family", "uniform");
  c.noise = rethrow_as_validation("noise", [&] {
    if (family == "uniform") {
      const double a = no.number("a", 0.0);
      const double b = no.number("b", 1.0);
      if (a < 0.0) no.fail("a", "must be >= 0 (radii are lengths)");
      return NoiseDriver::uniform(a, b);
    }
    if (family == "beta")
      return NoiseDriver::beta(no.number("p", 2.0), no.number("q", 5.0), no.number("scale", 1.0));
    if (family == "trunc_exp")
      return NoiseDriver::trunc_exp(no.number("rate", 1.0), no.number("cap", 1.0));
    no.fail("family", "must be one of uniform, beta, trunc_exp");
  });
  no.finish();

  Section co(doc, "covariate");
  const std::string mode = co.string("mode", "constant");
  c.covariate = rethrow_as_validation("covariate", [&] {
    if (mode == "constant") return CovariateProcess::constant(co.number("value", 1.0));
    if (mode == "cycle") return CovariateProcess::cycle(co.numbers("values", {1.0, 2.0}));
    if (mode == "low_discrepancy")
      return CovariateProcess::low_discrepancy(co.number("lo", 1.0), co.number("hi", 2.0));
    if (mode == "iid")
      return CovariateProcess::iid(CdfModel::uniform(co.number("lo", 1.0), co.number("hi", 2.0)));
    co.fail("mode", "must be one of constant, cycle, low_discrepancy, iid");
  });
  co.finish();

  Section es(doc, "estimator");
  const std::string emode = es.string("mode", "iid");
  if (emode == "iid") {
    c.estimator.mode = EstimatorMode::kIid;
  } else if (emode == "dependent") {
    c.estimator.mode = EstimatorMode::kDependent;
  } else {
    es.fail("mode", "must be iid or dependent");
  }
  c.estimator.alpha = es.number("alpha", 0.1);
  check_probability(es, "alpha", c.estimator.alpha);
  c.estimator.epsilon = es.number("epsilon", 0.1);
  check_probability(es, "epsilon", c.estimator.epsilon);
  c.estimator.cn_method = rethrow_as_validation(
      "estimator", [&] { return parse_cn_method(es.string("cn_method", "monte_carlo")); });
  c.estimator.cn_reps = es.count("cn_reps", 10000, 1);
  c.estimator.dkw_beta = es.number("dkw_beta", 0.05);
  check_probability(es, "dkw_beta", c.estimator.dkw_beta);
  c.estimator.paths = es.count("paths", 100000, 1);
  c.estimator.grid = es.count("grid", 512, 2);
  const std::string sup = es.string("sup_mode", "bridge_interpolated");
  if (sup == "bridge_interpolated") {
    c.estimator.sup_mode = SupMode::kBridgeInterpolated;
  } else if (sup == "grid_max") {
    c.estimator.sup_mode = SupMode::kGridMax;
  } else {
    es.fail("sup_mode", "must be bridge_interpolated or grid_max");
  }
  es.finish();

  // Cross-table checks.
  if (c.s0.dim() != c.dimension) throw ValidationError("[support] dimension mismatch");
  if (c.kernel.radius_map == RadiusMap::kScaled) {
    const auto lim = c.covariate.limit();
    const double lowest = lim.continuous ? lim.continuous->lower() : lim.atoms.front();
    if (!(lowest > 0.0))
      throw ValidationError("[covariate] scaled radius map needs positive covariate values");
  }
  if (c.covariate.assumption_violating() && c.estimator.mode == EstimatorMode::kDependent &&
      !c.allow_violations)
    throw ValidationError(
        "[covariate] mode iid violates the covariate rate condition; set "
        "scenario.allow_violations = true to run it anyway");
  if (c.estimator.mode == EstimatorMode::kIid) (void)c.iid_radius_law();
  return c;
}

ScenarioConfig parse_scenario(const std::string& toml_text) {
  return scenario_from_json(parse_toml(toml_text));
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

const std::string& default_scenario_toml() {
  static const std::string kText = R"(# safearea scenario

[scenario]
dimension = 2
horizon = 200          # n: radii observed before the safety area is built
particles = 0          # particle view in simulate; 0 keeps only the exact chain
replications = 2000
seed = 1
workers = 0            # 0: all hardware threads
simulate_full = false  # coverage: run the epidemic instead of drawing radii only
allow_violations = false
output_dir = "."
n_ladder = []          # empty: [horizon]

[support]
kind = "point"         # point | ball | point_cloud
center = [0.0, 0.0]
# radius = 1.0         # ball
# points = [[0.0, 0.0], [1.0, 0.0]]

[kernel]
radius_map = "identity"   # identity | scaled | shifted
profile = "uniform_ball"  # uniform_ball | triangular_radial

[noise]
family = "uniform"     # uniform (a, b) | beta (p, q, scale) | trunc_exp (rate, cap)
a = 0.0
b = 1.0

[covariate]
mode = "constant"      # constant (value) | cycle (values) | low_discrepancy (lo, hi) | iid (lo, hi)
value = 1.0

[estimator]
mode = "iid"           # iid | dependent
alpha = 0.1
epsilon = 0.1          # dependent
cn_method = "monte_carlo"  # monte_carlo | asymptotic | dkw
cn_reps = 10000
dkw_beta = 0.05
paths = 100000         # dependent: limit-process paths for C_alpha
grid = 512
sup_mode = "bridge_interpolated"  # bridge_interpolated | grid_max
)";
  return kText;
}

}  // namespace safearea
