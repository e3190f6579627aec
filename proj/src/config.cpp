// Copyright 2026 The qfilter Authors
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

#include "qfilter/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "qfilter/numfmt.hpp"

namespace qfilter {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::ostringstream os;
  os << "config: " << errors.size()
     << (errors.size() == 1 ? " error" : " errors");
  for (const std::string& e : errors) {
    os << "\n  - " << e;
  }
  return os.str();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// Splits "[a, b, [c, d]]" into its top-level elements {"a", "b", "[c, d]"}.
/// Returns nullopt on unbalanced brackets or a missing outer pair.
std::optional<std::vector<std::string>> split_array(const std::string& value) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
    return std::nullopt;
  }
  std::vector<std::string> out;
  int depth = 0;
  std::string current;
  for (std::size_t i = 1; i + 1 < value.size(); ++i) {
    const char c = value[i];
    if (c == '[') ++depth;
    if (c == ']') {
      --depth;
      if (depth < 0) return std::nullopt;
    }
    if (c == ',' && depth == 0) {
      out.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (depth != 0) return std::nullopt;
  const std::string last = trim(current);
  if (!last.empty()) out.push_back(last);
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

/// Raw key-value lines in input order, with duplicate detection.
class RawConfig {
 public:
  void insert(const std::string& key, const std::string& value, int line,
              std::vector<std::string>& errors) {
    if (index_.count(key) != 0) {
      errors.push_back("line " + std::to_string(line) + ": duplicate key '" +
                       key + "'");
      return;
    }
    index_[key] = entries_.size();
    entries_.push_back({key, value});
  }

  const std::string* find(const std::string& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &entries_[it->second].second;
  }

  bool has(const std::string& key) const { return index_.count(key) != 0; }

  void mark_used(const std::string& key) { used_.push_back(key); }

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : entries_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        out.push_back(key);
      }
    }
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> used_;
};

/// Looks up and consumes a key; records a parse error on failure.
template <typename Parse>
auto take(RawConfig& raw, const std::string& key, Parse parse,
          std::vector<std::string>& errors)
    -> std::optional<decltype(parse(std::string{}))> {
  const std::string* v = raw.find(key);
  if (v == nullptr) return std::nullopt;
  raw.mark_used(key);
  try {
    return parse(*v);
  } catch (const std::exception& e) {
    errors.push_back(key + ": " + e.what());
    return std::nullopt;
  }
}

double parse_finite(const std::string& s) {
  const double v = parse_double(s);
  if (!std::isfinite(v)) {
    throw std::invalid_argument("must be finite, got '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

Complex parse_complex_pair(const std::string& s) {
  const auto parts = split_array(s);
  if (!parts || parts->size() != 2) {
    throw std::invalid_argument("expected a [re, im] pair, got '" + s + "'");
  }
  return Complex(parse_finite((*parts)[0]), parse_finite((*parts)[1]));
}

/// Row-major dim x dim matrix from a flat list of [re, im] pairs.
Operator parse_matrix(const std::string& s, Eigen::Index dim) {
  const auto parts = split_array(s);
  if (!parts) {
    throw std::invalid_argument("expected an array of [re, im] pairs");
  }
  const std::size_t want = static_cast<std::size_t>(dim) * dim;
  if (parts->size() != want) {
    throw std::invalid_argument("expected " + std::to_string(want) +
                                " entries for a " + std::to_string(dim) + "x" +
                                std::to_string(dim) + " matrix, got " +
                                std::to_string(parts->size()));
  }
  Operator out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      out(r, c) = parse_complex_pair(
          (*parts)[static_cast<std::size_t>(r) * dim + c]);
    }
  }
  return out;
}

struct PresetParams {
  double gamma = 1.0;
  double omega = 2.0 * std::numbers::pi;
  double lambda = 0.5;
};

/// Builds H, L, rho0 for a named preset; dim is always 2.
void build_preset(const std::string& name, const PresetParams& p, Operator& h,
                  Operator& l, Operator& rho0,
                  std::vector<std::string>& errors) {
  h = Operator::Zero(2, 2);
  rho0 = projector(2, 0);
  if (name == "qubit-decay" || name == "rabi-decay") {
    if (p.gamma < 0.0) {
      errors.push_back("gamma: must be nonnegative");
      l = Operator::Zero(2, 2);
    } else {
      l = std::sqrt(p.gamma) * sigma_minus();
    }
    if (name == "rabi-decay") {
      h = 0.5 * p.omega * pauli_x();
    }
  } else if (name == "constant-rate-counting") {
    if (p.lambda < 0.0) {
      errors.push_back("lambda: must be nonnegative");
      l = Operator::Zero(2, 2);
    } else {
      l = std::sqrt(p.lambda) * identity(2);
    }
  } else {
    errors.push_back(
        "preset: unknown preset '" + name +
        "' (valid: qubit-decay, rabi-decay, constant-rate-counting)");
    l = Operator::Zero(2, 2);
  }
}

/// Resolves one observable name against the model dimension and any
/// explicitly defined observable.NAME matrices.
std::optional<NamedObservable> resolve_observable(
    const std::string& name, Eigen::Index dim,
    const std::map<std::string, Operator>& custom,
    std::vector<std::string>& errors) {
  auto pauli = [&](const Operator& op) -> std::optional<NamedObservable> {
    if (dim != 2) {
      errors.push_back("observables: " + name + " requires dim 2, model dim is " +
                       std::to_string(dim));
      return std::nullopt;
    }
    return NamedObservable{name, op};
  };
  if (name == "sigma_x") return pauli(pauli_x());
  if (name == "sigma_y") return pauli(pauli_y());
  if (name == "sigma_z") return pauli(pauli_z());
  if (name.rfind("population_", 0) == 0) {
    try {
      const std::uint64_t k = parse_u64(name.substr(11));
      if (k >= static_cast<std::uint64_t>(dim)) {
        errors.push_back("observables: " + name + " is out of range for dim " +
                         std::to_string(dim));
        return std::nullopt;
      }
      return NamedObservable{name, projector(dim, static_cast<Eigen::Index>(k))};
    } catch (const std::exception&) {
      errors.push_back("observables: malformed population index in '" + name +
                       "'");
      return std::nullopt;
    }
  }
  auto it = custom.find(name);
  if (it != custom.end()) {
    if (it->second.rows() != dim) {
      errors.push_back("observable." + name + ": is " +
                       std::to_string(it->second.rows()) + "x" +
                       std::to_string(it->second.cols()) + ", model dim is " +
                       std::to_string(dim));
      return std::nullopt;
    }
    const double defect = hermiticity_defect(it->second);
    if (defect > kHermitianTol) {
      errors.push_back("observable." + name + ": not Hermitian, max |X - X†| = " +
                       format_double(defect));
      return std::nullopt;
    }
    return NamedObservable{name, it->second};
  }
  errors.push_back(
      "observables: unknown name '" + name +
      "' (valid: sigma_x, sigma_y, sigma_z, population_k, or a defined "
      "observable.NAME)");
  return std::nullopt;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

ScenarioConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  RawConfig raw;

  // Pass 1: lines into key-value pairs.
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) +
                       ": expected 'key = value', got '" + stripped + "'");
      continue;
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      errors.push_back("line " + std::to_string(line_no) +
                       ": empty key or value");
      continue;
    }
    raw.insert(key, value, line_no, errors);
  }

  ScenarioConfig cfg;
  for (const auto& [key, value] : raw.entries()) {
    cfg.echo.emplace_back(key, value);
  }

  // Model source: exactly one of preset / explicit.*.
  const bool has_preset = raw.has("preset");
  const bool has_explicit = raw.has("explicit.dim") || raw.has("explicit.h") ||
                            raw.has("explicit.l") || raw.has("explicit.rho0");
  if (has_preset == has_explicit) {
    errors.push_back(
        has_preset ? "exactly one of preset or explicit.* may be given, not both"
                   : "exactly one of preset or explicit.* is required");
  }

  Operator h = Operator::Zero(2, 2);
  Operator l = Operator::Zero(2, 2);
  Operator rho0 = projector(2, 0);
  Eigen::Index dim = 2;

  if (has_preset && !has_explicit) {
    cfg.preset = *raw.find("preset");
    raw.mark_used("preset");
    PresetParams params;
    const bool wants_gamma =
        cfg.preset == "qubit-decay" || cfg.preset == "rabi-decay";
    if (auto v = take(raw, "gamma", parse_finite, errors)) {
      params.gamma = *v;
      if (!wants_gamma) {
        errors.push_back("gamma: not a parameter of preset " + cfg.preset);
      }
    }
    if (auto v = take(raw, "omega", parse_finite, errors)) {
      params.omega = *v;
      if (cfg.preset != "rabi-decay") {
        errors.push_back("omega: not a parameter of preset " + cfg.preset);
      }
    }
    if (auto v = take(raw, "lambda", parse_finite, errors)) {
      params.lambda = *v;
      if (cfg.preset != "constant-rate-counting") {
        errors.push_back("lambda: not a parameter of preset " + cfg.preset);
      }
    }
    build_preset(cfg.preset, params, h, l, rho0, errors);
  } else if (has_explicit && !has_preset) {
    auto d = take(raw, "explicit.dim", parse_u64, errors);
    if (!d) {
      if (!raw.has("explicit.dim")) errors.push_back("explicit.dim: required");
    } else if (*d < 1 || *d > static_cast<std::uint64_t>(kMaxDim)) {
      errors.push_back("explicit.dim: must be in [1, " +
                       std::to_string(kMaxDim) + "], got " +
                       std::to_string(*d));
      d.reset();
    }
    dim = d ? static_cast<Eigen::Index>(*d) : 2;
    auto matrix_field = [&](const std::string& key, Operator& out) {
      if (!raw.has(key)) {
        errors.push_back(key + ": required");
        out = Operator::Zero(dim, dim);
        return;
      }
      if (auto m = take(raw, key,
                        [&](const std::string& s) { return parse_matrix(s, dim); },
                        errors)) {
        out = *m;
      } else {
        out = Operator::Zero(dim, dim);
      }
    };
    matrix_field("explicit.h", h);
    matrix_field("explicit.l", l);
    matrix_field("explicit.rho0", rho0);
  }

  // Detection.
  Detection detection = Detection::kHomodyne;
  if (const std::string* v = raw.find("detection")) {
    raw.mark_used("detection");
    if (*v == "homodyne") {
      detection = Detection::kHomodyne;
    } else if (*v == "counting") {
      detection = Detection::kCounting;
    } else {
      errors.push_back("detection: expected homodyne or counting, got '" + *v +
                       "'");
    }
  } else {
    errors.push_back("detection: required");
  }

  // Grid.
  cfg.grid.t0 = take(raw, "grid.t0", parse_finite, errors).value_or(0.0);
  if (auto v = take(raw, "grid.dt", parse_finite, errors)) {
    cfg.grid.dt = *v;
  } else if (!raw.has("grid.dt")) {
    errors.push_back("grid.dt: required");
  }
  if (auto v = take(raw, "grid.n_steps", parse_u64, errors)) {
    cfg.grid.n_steps = static_cast<std::size_t>(*v);
  } else if (!raw.has("grid.n_steps")) {
    errors.push_back("grid.n_steps: required");
  }
  if (raw.has("grid.dt") && raw.has("grid.n_steps")) {
    try {
      validate_grid(cfg.grid);
    } catch (const std::exception& e) {
      errors.push_back(std::string("grid: ") + e.what());
    }
  }

  // Run parameters.
  if (auto v = take(raw, "n_traj", parse_u64, errors)) {
    if (*v == 0) {
      errors.push_back("n_traj: must be at least 1");
    } else {
      cfg.n_traj = static_cast<std::size_t>(*v);
    }
  }
  if (auto v = take(raw, "master_seed", parse_u64, errors)) {
    cfg.master_seed = *v;
  }
  if (auto v = take(raw, "records_limit", parse_u64, errors)) {
    cfg.records_limit = static_cast<std::size_t>(*v);
  }
  if (auto v = take(raw, "plots", parse_bool, errors)) {
    cfg.plots = *v;
  }

  // Custom observable matrices, then the tracked list.
  std::map<std::string, Operator> custom;
  for (const auto& [key, value] : raw.entries()) {
    if (key.rfind("observable.", 0) != 0) continue;
    const std::string name = key.substr(11);
    if (name.empty()) {
      errors.push_back(key + ": missing observable name");
      continue;
    }
    if (auto m = take(raw, key,
                      [&](const std::string& s) { return parse_matrix(s, dim); },
                      errors)) {
      custom[name] = *m;
    }
  }

  std::vector<std::string> names;
  if (const std::string* v = raw.find("observables")) {
    raw.mark_used("observables");
    const auto parts = split_array(*v);
    if (!parts) {
      errors.push_back("observables: expected a [name, ...] list, got '" + *v +
                       "'");
    } else {
      names = *parts;
    }
  } else {
    names.push_back(dim == 2 ? "sigma_z" : "population_0");
  }
  for (const std::string& name : names) {
    if (auto obs = resolve_observable(name, dim, custom, errors)) {
      cfg.observables.push_back(std::move(*obs));
    }
  }

  for (const std::string& key : raw.unused()) {
    errors.push_back("unknown key '" + key + "'");
  }

  if (errors.empty()) {
    try {
      DensityMatrix state = DensityMatrix::checked(std::move(rho0));
      try {
        cfg.model =
            make_model(std::move(h), std::move(l), std::move(state), detection);
      } catch (const std::exception& e) {
        errors.push_back(e.what());
      }
    } catch (const std::exception& e) {
      // The preset initial states are always valid, so this is the
      // user-supplied matrix.
      errors.push_back("explicit.rho0: " + std::string(e.what()));
    }
  }

  if (!errors.empty()) {
    throw ConfigError(std::move(errors));
  }
  return cfg;
}

}  // namespace qfilter
