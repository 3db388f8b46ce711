// Copyright 2026 The nhm Authors
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

#include "nhm/io/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace nhm::io {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream os;
  os << "invalid configuration:";
  for (const auto& i : issues) {
    os << "\n  line " << i.line << ": " << (i.key.empty() ? "<root>" : i.key) << ": " << i.reason;
  }
  return os.str();
}

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Collects located issues while walking the document.
class Reader {
 public:
  std::vector<ConfigIssue> issues;

  void issue(const YAML::Node& at, const std::string& key, const std::string& reason) {
    const int line = at.IsDefined() ? at.Mark().line + 1 : 0;
    issues.push_back({line, key, reason});
  }

  bool require_map(const YAML::Node& n, const std::string& path) {
    if (!n.IsMap()) {
      issue(n, path, "expected a mapping");
      return false;
    }
    return true;
  }

  void allow_keys(const YAML::Node& map, const std::string& path,
                  std::initializer_list<std::string_view> allowed) {
    for (const auto& kv : map) {
      const auto k = kv.first.as<std::string>();
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) issue(kv.first, child(path, k), "unknown key");
    }
  }

  template <class T>
  std::optional<T> get(const YAML::Node& map, const std::string& key, const std::string& path,
                       const char* type_name, bool required) {
    const YAML::Node n = map[key];
    if (!n.IsDefined() || n.IsNull()) {
      if (required) issue(map, child(path, key), "missing required key");
      return std::nullopt;
    }
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "not a scalar");
      return n.as<T>();
    } catch (const YAML::Exception&) {
      issue(n, child(path, key), std::string("expected ") + type_name);
      return std::nullopt;
    }
  }

  double number(const YAML::Node& map, const std::string& key, const std::string& path, double fallback,
                bool required = false) {
    const auto v = get<double>(map, key, path, "a number", required);
    if (v && !std::isfinite(*v)) {
      issue(map[key], child(path, key), "must be finite");
      return fallback;
    }
    return v.value_or(fallback);
  }

  long long integer(const YAML::Node& map, const std::string& key, const std::string& path,
                    long long fallback, bool required = false) {
    return get<long long>(map, key, path, "an integer", required).value_or(fallback);
  }

  bool boolean(const YAML::Node& map, const std::string& key, const std::string& path, bool fallback) {
    return get<bool>(map, key, path, "true or false", false).value_or(fallback);
  }

  std::string text(const YAML::Node& map, const std::string& key, const std::string& path,
                   const std::string& fallback, bool required = false) {
    return get<std::string>(map, key, path, "a string", required).value_or(fallback);
  }

  void positive(const YAML::Node& map, const std::string& key, const std::string& path, double v) {
    if (!(v > 0.0)) issue(map[key].IsDefined() ? map[key] : map, child(path, key), "must be > 0");
  }

  void non_negative(const YAML::Node& map, const std::string& key, const std::string& path, double v) {
    if (!(v >= 0.0)) issue(map[key].IsDefined() ? map[key] : map, child(path, key), "must be >= 0");
  }

  std::optional<Complex> complex_value(const YAML::Node& n, const std::string& path) {
    try {
      if (n.IsScalar()) return Complex(n.as<double>(), 0.0);
      if (n.IsSequence() && n.size() == 2) return Complex(n[0].as<double>(), n[1].as<double>());
    } catch (const YAML::Exception&) {
    }
    issue(n, path, "expected a number or [re, im]");
    return std::nullopt;
  }

  std::vector<double> numbers(const YAML::Node& n, const std::string& path) {
    std::vector<double> out;
    if (!n.IsSequence()) {
      issue(n, path, "expected a list of numbers");
      return out;
    }
    for (const auto& e : n) {
      try {
        out.push_back(e.as<double>());
      } catch (const YAML::Exception&) {
        issue(e, path, "expected a number");
      }
    }
    return out;
  }

  std::vector<Complex> complexes(const YAML::Node& n, const std::string& path) {
    std::vector<Complex> out;
    if (!n.IsSequence()) {
      issue(n, path, "expected a list");
      return out;
    }
    for (const auto& e : n) {
      if (auto c = complex_value(e, path)) out.push_back(*c);
    }
    return out;
  }

  std::optional<MatrixSpec> matrix(const YAML::Node& n, const std::string& path) {
    if (!require_map(n, path)) return std::nullopt;
    allow_keys(n, path, {"real", "imag"});
    const auto rows_of = [&](const YAML::Node& m, const std::string& p) {
      std::vector<std::vector<double>> rows;
      if (!m.IsSequence()) {
        issue(m, p, "expected a list of rows");
        return rows;
      }
      for (const auto& r : m) rows.push_back(numbers(r, p));
      return rows;
    };
    if (!n["real"].IsDefined()) {
      issue(n, child(path, "real"), "missing required key");
      return std::nullopt;
    }
    const auto re = rows_of(n["real"], child(path, "real"));
    std::vector<std::vector<double>> im;
    if (n["imag"].IsDefined()) im = rows_of(n["imag"], child(path, "imag"));
    const auto dim = static_cast<int>(re.size());
    bool ok = dim >= 1 && dim <= kMaxDim;
    for (const auto& r : re) ok = ok && static_cast<int>(r.size()) == dim;
    if (!im.empty()) {
      ok = ok && static_cast<int>(im.size()) == dim;
      for (const auto& r : im) ok = ok && static_cast<int>(r.size()) == dim;
    }
    if (!ok) {
      issue(n, path, "matrix must be square with matching real/imag shapes and size <= 8");
      return std::nullopt;
    }
    MatrixSpec m;
    m.dim = dim;
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        m.entries.emplace_back(re[r][c], im.empty() ? 0.0 : im[r][c]);
      }
    }
    return m;
  }

  StateSpec state(const YAML::Node& n, const std::string& path, bool allow_initial) {
    StateSpec s;
    const std::size_t before = issues.size();
    if (n.IsScalar()) {
      if (allow_initial && n.as<std::string>() == "initial") {
        s.form = StateSpec::Form::Initial;
        return s;
      }
      issue(n, path, allow_initial ? "expected a state mapping or 'initial'" : "expected a state mapping");
      return s;
    }
    if (!require_map(n, path)) return s;
    allow_keys(n, path, {"bloch", "amplitudes", "p0", "vector", "diagonal", "basis", "dim", "mixed", "density"});
    int forms = 0;
    for (auto k : {"bloch", "amplitudes", "p0", "vector", "diagonal", "basis", "mixed", "density"}) {
      if (n[k].IsDefined()) ++forms;
    }
    if (forms != 1) {
      issue(n, path, "give exactly one of bloch, amplitudes, p0, vector, diagonal, basis, mixed, density");
      return s;
    }
    if (n["bloch"].IsDefined()) {
      s.form = StateSpec::Form::Bloch;
      s.values = numbers(n["bloch"], child(path, "bloch"));
      if (s.values.size() != 3) issue(n["bloch"], child(path, "bloch"), "expected [x, y, z]");
    } else if (n["amplitudes"].IsDefined()) {
      s.form = StateSpec::Form::Amplitudes;
      s.amplitudes = complexes(n["amplitudes"], child(path, "amplitudes"));
      if (s.amplitudes.size() != 2) issue(n["amplitudes"], child(path, "amplitudes"), "expected [c1, c2]");
    } else if (n["p0"].IsDefined()) {
      s.form = StateSpec::Form::Amplitudes;
      const double p0 = number(n, "p0", path, 0.5);
      if (!(p0 >= 0.0 && p0 <= 1.0)) {
        issue(n["p0"], child(path, "p0"), "must lie in [0, 1]");
      } else {
        const auto a = PureStateAmplitudes::from_probability(p0);
        s.amplitudes = {a.c1(), a.c2()};
      }
    } else if (n["vector"].IsDefined()) {
      s.form = StateSpec::Form::Vector;
      s.amplitudes = complexes(n["vector"], child(path, "vector"));
    } else if (n["diagonal"].IsDefined()) {
      s.form = StateSpec::Form::Diagonal;
      s.values = numbers(n["diagonal"], child(path, "diagonal"));
    } else if (n["basis"].IsDefined()) {
      s.form = StateSpec::Form::Basis;
      s.index = static_cast<int>(integer(n, "basis", path, 0));
      s.dim = static_cast<int>(integer(n, "dim", path, 2));
    } else if (n["mixed"].IsDefined()) {
      s.form = StateSpec::Form::Mixed;
      s.dim = static_cast<int>(integer(n, "mixed", path, 2));
    } else {
      s.form = StateSpec::Form::Density;
      if (auto m = matrix(n["density"], child(path, "density"))) s.density = *m;
    }
    if (issues.size() == before) {
      try {
        (void)s.build();
      } catch (const Error& e) {
        issue(n, path, e.what());
      }
    }
    return s;
  }

  WindowSpec window(const YAML::Node& n, const std::string& path) {
    WindowSpec w;
    if (!require_map(n, path)) return w;
    allow_keys(n, path, {"kind", "t_i", "t_f", "sharpness"});
    const std::string kind = text(n, "kind", path, "tanh");
    if (kind == "tanh") {
      w.kind = SwitchKind::TanhWindow;
    } else if (kind == "hard") {
      w.kind = SwitchKind::HardWindow;
    } else if (kind == "always-on") {
      w.kind = SwitchKind::AlwaysOn;
    } else {
      issue(n["kind"], child(path, "kind"), "expected tanh, hard or always-on");
    }
    if (w.kind == SwitchKind::AlwaysOn) return w;
    w.t_i = number(n, "t_i", path, 0.0, true);
    w.t_f = number(n, "t_f", path, 0.0, true);
    w.sharpness = number(n, "sharpness", path, 0.0);
    if (n["t_i"].IsDefined() && n["t_f"].IsDefined() && !(w.t_f > w.t_i)) {
      issue(n["t_f"], child(path, "t_f"), "t_f must be greater than t_i");
    }
    non_negative(n, "sharpness", path, w.sharpness);
    return w;
  }

  HamiltonianSpec hamiltonian(const YAML::Node& n, const std::string& path) {
    HamiltonianSpec h;
    if (!require_map(n, path)) return h;
    allow_keys(n, path, {"family", "gamma", "sign", "basis", "eigenvalues", "target", "base", "gain",
                         "matrix", "base_in_window"});
    const std::string family = text(n, "family", path, "", true);
    if (family == "nh-qubit") {
      h.family = HamiltonianSpec::Family::NhQubit;
      h.gamma = number(n, "gamma", path, 0.0, true);
      non_negative(n, "gamma", path, h.gamma);
    } else if (family == "two-level-pm") {
      h.family = HamiltonianSpec::Family::TwoLevelPm;
      h.gamma = number(n, "gamma", path, 0.0, true);
      positive(n, "gamma", path, h.gamma);
      const YAML::Node s = n["sign"];
      if (s.IsDefined() && s.IsScalar()) {
        const auto v = s.as<std::string>();
        if (v == "+" || v == "+1" || v == "1") {
          h.sign = 1;
        } else if (v == "-" || v == "-1") {
          h.sign = -1;
        } else {
          issue(s, child(path, "sign"), "expected + or -");
        }
      } else if (s.IsDefined()) {
        issue(s, child(path, "sign"), "expected + or -");
      }
    } else if (family == "measurement") {
      h.family = HamiltonianSpec::Family::Measurement;
      h.gamma = number(n, "gamma", path, 0.0, true);
      positive(n, "gamma", path, h.gamma);
      h.basis = text(n, "basis", path, "z");
      if (h.basis != "z" && h.basis != "x") issue(n["basis"], child(path, "basis"), "expected z or x");
      if (n["eigenvalues"].IsDefined()) {
        h.eigenvalues = numbers(n["eigenvalues"], child(path, "eigenvalues"));
        if (h.eigenvalues.size() != 2) {
          issue(n["eigenvalues"], child(path, "eigenvalues"), "expected two eigenvalues");
        }
      }
      h.target = static_cast<int>(integer(n, "target", path, 0));
      if (h.target < 0 || h.target > 1) issue(n["target"], child(path, "target"), "must be 0 or 1");
    } else if (family == "matrix") {
      h.family = HamiltonianSpec::Family::Matrix;
      if (n["base"].IsDefined()) {
        if (auto m = matrix(n["base"], child(path, "base"))) h.base = *m;
      } else {
        issue(n, child(path, "base"), "missing required key");
      }
      if (n["gain"].IsDefined()) {
        if (auto m = matrix(n["gain"], child(path, "gain"))) h.gain = *m;
      } else {
        issue(n, child(path, "gain"), "missing required key");
      }
      h.base_in_window = boolean(n, "base_in_window", path, true);
      if (h.base.dim != 0 && h.gain.dim != 0 && h.base.dim != h.gain.dim) {
        issue(n, path, "base and gain must have the same size");
      }
    } else if (family == "constant") {
      h.family = HamiltonianSpec::Family::Constant;
      if (n["matrix"].IsDefined()) {
        if (auto m = matrix(n["matrix"], child(path, "matrix"))) h.base = *m;
      } else {
        issue(n, child(path, "matrix"), "missing required key");
      }
    } else if (!family.empty()) {
      issue(n["family"], child(path, "family"),
            "expected nh-qubit, two-level-pm, measurement, matrix or constant");
    }
    return h;
  }

  std::vector<ReferenceSpec> references(const YAML::Node& n, const std::string& path) {
    std::vector<ReferenceSpec> out;
    if (!n.IsDefined()) return out;
    if (!n.IsSequence()) {
      issue(n, path, "expected a list of {name, state}");
      return out;
    }
    for (const auto& e : n) {
      if (!require_map(e, path)) continue;
      allow_keys(e, path, {"name", "state"});
      ReferenceSpec r;
      r.name = text(e, "name", path, "", true);
      for (char ch : r.name) {
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) {
          issue(e["name"], child(path, "name"), "names may use letters, digits, '_' and '-'");
          break;
        }
      }
      if (e["state"].IsDefined()) {
        r.state = state(e["state"], child(path, "state"), true);
      } else {
        issue(e, child(path, "state"), "missing required key");
      }
      out.push_back(r);
    }
    return out;
  }

  GridSpec grid(const YAML::Node& n, const std::string& path, GridSpec g) {
    if (!n.IsDefined()) return g;
    if (!require_map(n, path)) return g;
    allow_keys(n, path, {"start", "end", "step"});
    g.start = number(n, "start", path, g.start);
    g.end = number(n, "end", path, g.end);
    g.step = number(n, "step", path, g.step);
    if (!(g.end > g.start)) issue(n, path, "end must be greater than start");
    positive(n, "step", path, g.step);
    if (g.start < 0.0) issue(n, child(path, "start"), "must be >= 0");
    return g;
  }
};

SwitchingProfile build_profile(const WindowSpec& w, double gamma) {
  switch (w.kind) {
    case SwitchKind::TanhWindow:
      return SwitchingProfile::tanh_window(w.sharpness > 0.0 ? w.sharpness : gamma, w.t_i, w.t_f);
    case SwitchKind::HardWindow:
      return SwitchingProfile::hard_window(w.t_i, w.t_f);
    case SwitchKind::AlwaysOn:
      break;
  }
  return SwitchingProfile::always_on();
}

StateSpec default_amplitudes() {
  StateSpec s;
  s.form = StateSpec::Form::Amplitudes;
  const auto a = PureStateAmplitudes::from_probability(0.5);
  s.amplitudes = {a.c1(), a.c2()};
  return s;
}

PureStateAmplitudes amplitudes_of(const StateSpec& s) {
  if (s.form != StateSpec::Form::Amplitudes || s.amplitudes.size() != 2) {
    throw ValidationError("expected two-level amplitudes");
  }
  return {s.amplitudes[0], s.amplitudes[1]};
}

template <class T, class Names>
std::optional<T> pick(Reader& rd, const YAML::Node& map, const std::string& key, const std::string& path,
                      const Names& names, T fallback) {
  const YAML::Node n = map[key];
  if (!n.IsDefined()) return fallback;
  const std::string v = rd.text(map, key, path, "");
  std::string allowed;
  for (const auto& [name, value] : names) {
    if (v == name) return value;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  rd.issue(n, child(path, key), "expected one of " + allowed);
  return std::nullopt;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : ValidationError(join_issues(issues)), issues_(std::move(issues)) {}

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Evolve: return "evolve";
    case ScenarioKind::Collapse: return "collapse";
    case ScenarioKind::Degeneracy: return "degeneracy";
    case ScenarioKind::Cases: return "cases";
    case ScenarioKind::Lindblad: return "lindblad";
    case ScenarioKind::Ensemble: return "ensemble";
    case ScenarioKind::FixedPoints: return "fixed-points";
  }
  return "unknown";
}

ComplexMatrix MatrixSpec::build() const {
  if (dim < 1 || dim > kMaxDim || static_cast<int>(entries.size()) != dim * dim) {
    throw DimensionError("matrix spec: inconsistent size");
  }
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = entries[static_cast<std::size_t>(r * dim + c)];
  }
  return m;
}

MatrixSpec MatrixSpec::from(const ComplexMatrix& m) {
  MatrixSpec s;
  s.dim = static_cast<int>(m.rows());
  for (int r = 0; r < s.dim; ++r) {
    for (int c = 0; c < s.dim; ++c) s.entries.push_back(m(r, c));
  }
  return s;
}

DensityMatrix StateSpec::build(const DensityMatrix* initial) const {
  switch (form) {
    case Form::Bloch:
      if (values.size() != 3) throw ValidationError("bloch state needs three coordinates");
      return from_bloch({values[0], values[1], values[2]});
    case Form::Amplitudes:
      if (amplitudes.size() != 2) throw ValidationError("amplitudes need c1 and c2");
      return PureStateAmplitudes(amplitudes[0], amplitudes[1]).density();
    case Form::Vector: {
      ComplexVector v(static_cast<Eigen::Index>(amplitudes.size()));
      for (std::size_t k = 0; k < amplitudes.size(); ++k) v(static_cast<Eigen::Index>(k)) = amplitudes[k];
      if (v.size() < 2 || v.size() > kMaxDim) throw DimensionError("state vector size outside [2, 8]");
      return DensityMatrix::pure(v);
    }
    case Form::Diagonal: {
      if (values.size() < 2 || values.size() > static_cast<std::size_t>(kMaxDim)) {
        throw DimensionError("diagonal state size outside [2, 8]");
      }
      RealVector p(static_cast<Eigen::Index>(values.size()));
      for (std::size_t k = 0; k < values.size(); ++k) p(static_cast<Eigen::Index>(k)) = values[k];
      return DensityMatrix::diagonal(p);
    }
    case Form::Basis:
      return DensityMatrix::basis_state(dim, index);
    case Form::Mixed:
      return DensityMatrix::maximally_mixed(dim);
    case Form::Density:
      return DensityMatrix(density.build());
    case Form::Initial:
      if (initial == nullptr) throw ValidationError("'initial' state used where no initial state exists");
      return *initial;
  }
  throw ValidationError("unknown state form");
}

std::vector<double> GridSpec::points() const {
  if (!(step > 0.0) || !(end > start)) throw ValidationError("grid: requires step > 0 and end > start");
  std::vector<double> out;
  const auto n = static_cast<long long>(std::floor((end - start) / step + 1e-9));
  for (long long k = 0; k <= n; ++k) out.push_back(start + static_cast<double>(k) * step);
  if (end - out.back() > 1e-12 * std::max(1.0, end)) out.push_back(end);
  return out;
}

SwitchedHamiltonian build_hamiltonian(const HamiltonianSpec& h, const WindowSpec& w) {
  const Complex i(0.0, 1.0);
  switch (h.family) {
    case HamiltonianSpec::Family::NhQubit: {
      const ComplexMatrix gain = (-i * (h.gamma / 2.0)) * (identity(2) - pauli_z());
      return {pauli_z(), gain, build_profile(w, h.gamma)};
    }
    case HamiltonianSpec::Family::TwoLevelPm:
      return two_level_pm(h.sign, h.gamma, build_profile(w, h.gamma));
    case HamiltonianSpec::Family::Measurement: {
      const auto basis = h.basis == "x" ? x_basis() : z_basis();
      return measurement_hamiltonian(basis, h.eigenvalues, h.target, h.gamma, build_profile(w, h.gamma));
    }
    case HamiltonianSpec::Family::Matrix: {
      const ComplexMatrix gain = h.gain.build();
      const double scale = split(gain).anti_hermitian.cwiseAbs().maxCoeff();
      return {h.base.build(), gain, build_profile(w, scale > 0.0 ? scale : 1.0), h.base_in_window};
    }
    case HamiltonianSpec::Family::Constant:
      if (w.kind != SwitchKind::AlwaysOn) throw ValidationError("a constant Hamiltonian takes no window");
      return SwitchedHamiltonian::constant(h.base.build());
  }
  throw ValidationError("unknown Hamiltonian family");
}

ScenarioConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{e.mark.line + 1, "", std::string("malformed YAML: ") + e.msg}});
  }
  Reader rd;
  ScenarioConfig c;
  if (!root.IsMap()) throw ConfigError({{1, "", "the document must be a mapping"}});
  rd.allow_keys(root, "", {"kind", "name", "seed", "integrator", "output", "params"});

  const std::string kind = rd.text(root, "kind", "", "", true);
  const std::pair<const char*, ScenarioKind> kinds[] = {
      {"evolve", ScenarioKind::Evolve},       {"collapse", ScenarioKind::Collapse},
      {"degeneracy", ScenarioKind::Degeneracy}, {"cases", ScenarioKind::Cases},
      {"lindblad", ScenarioKind::Lindblad},   {"ensemble", ScenarioKind::Ensemble},
      {"fixed-points", ScenarioKind::FixedPoints}};
  bool known = false;
  for (const auto& [name, k] : kinds) {
    if (kind == name) {
      c.kind = k;
      known = true;
    }
  }
  if (!known) {
    if (!kind.empty()) rd.issue(root["kind"], "kind", "unknown kind '" + kind + "'");
    throw ConfigError(rd.issues);
  }
  c.name = rd.text(root, "name", "", "");
  if (root["seed"].IsDefined()) {
    if (auto s = rd.get<std::uint64_t>(root, "seed", "", "an unsigned 64-bit integer", true)) c.seed = *s;
  }

  if (const YAML::Node n = root["integrator"]; n.IsDefined() && rd.require_map(n, "integrator")) {
    rd.allow_keys(n, "integrator", {"rel_tol", "abs_tol", "max_step", "sample_every"});
    c.integrator.rel_tol = rd.number(n, "rel_tol", "integrator", c.integrator.rel_tol);
    c.integrator.abs_tol = rd.number(n, "abs_tol", "integrator", c.integrator.abs_tol);
    c.integrator.max_step = rd.number(n, "max_step", "integrator", c.integrator.max_step);
    c.integrator.sample_every = rd.number(n, "sample_every", "integrator", c.integrator.sample_every);
    rd.positive(n, "rel_tol", "integrator", c.integrator.rel_tol);
    rd.positive(n, "abs_tol", "integrator", c.integrator.abs_tol);
    rd.non_negative(n, "max_step", "integrator", c.integrator.max_step);
    rd.non_negative(n, "sample_every", "integrator", c.integrator.sample_every);
  }
  if (const YAML::Node n = root["output"]; n.IsDefined() && rd.require_map(n, "output")) {
    rd.allow_keys(n, "output", {"stem"});
    c.output.stem = rd.text(n, "stem", "output", "");
  }

  YAML::Node p = root["params"];
  if (!p.IsDefined()) p = YAML::Node(YAML::NodeType::Map);
  if (!rd.require_map(p, "params")) throw ConfigError(rd.issues);
  const std::string P = "params";

  switch (c.kind) {
    case ScenarioKind::Evolve: {
      EvolveParams e;
      rd.allow_keys(p, P, {"hamiltonian", "window", "initial_states", "t_start", "t_end", "engine", "references"});
      if (p["hamiltonian"].IsDefined()) {
        e.hamiltonian = rd.hamiltonian(p["hamiltonian"], child(P, "hamiltonian"));
      } else {
        rd.issue(p, child(P, "hamiltonian"), "missing required key");
      }
      if (p["window"].IsDefined()) e.window = rd.window(p["window"], child(P, "window"));
      const YAML::Node states = p["initial_states"];
      if (!states.IsDefined() || !states.IsSequence() || states.size() == 0) {
        rd.issue(states.IsDefined() ? states : p, child(P, "initial_states"), "expected a non-empty list of states");
      } else {
        for (const auto& s : states) e.initial_states.push_back(rd.state(s, child(P, "initial_states"), false));
      }
      e.t_start = rd.number(p, "t_start", P, 0.0);
      e.t_end = rd.number(p, "t_end", P, 5.0);
      if (!(e.t_end > e.t_start)) rd.issue(p["t_end"].IsDefined() ? p["t_end"] : p, child(P, "t_end"), "t_end must be greater than t_start");
      const std::pair<std::string, EvolveParams::Engine> engines[] = {
          {"ode", EvolveParams::Engine::Ode}, {"closed-form", EvolveParams::Engine::ClosedForm},
          {"two-level", EvolveParams::Engine::TwoLevel}, {"unnormalized", EvolveParams::Engine::Unnormalized}};
      e.engine = pick(rd, p, "engine", P, engines, EvolveParams::Engine::Ode).value_or(e.engine);
      e.references = rd.references(p["references"], child(P, "references"));
      const bool constant_only = e.engine == EvolveParams::Engine::ClosedForm ||
                                 e.engine == EvolveParams::Engine::TwoLevel;
      if (constant_only && e.window.kind != SwitchKind::AlwaysOn) {
        rd.issue(p["engine"], child(P, "engine"), "closed-form engines need a constant Hamiltonian (no window)");
      }
      c.params = e;
      break;
    }
    case ScenarioKind::Collapse: {
      CollapseParams e;
      rd.allow_keys(p, P, {"hamiltonian", "window", "initial_state", "t_start", "t_end", "references"});
      if (p["hamiltonian"].IsDefined()) {
        e.hamiltonian = rd.hamiltonian(p["hamiltonian"], child(P, "hamiltonian"));
      } else {
        rd.issue(p, child(P, "hamiltonian"), "missing required key");
      }
      if (p["window"].IsDefined()) {
        e.window = rd.window(p["window"], child(P, "window"));
        if (e.window.kind == SwitchKind::AlwaysOn) {
          rd.issue(p["window"], child(P, "window"), "a collapse scenario needs a finite window");
        }
      } else {
        rd.issue(p, child(P, "window"), "missing required key");
      }
      if (p["initial_state"].IsDefined()) {
        e.initial_state = rd.state(p["initial_state"], child(P, "initial_state"), false);
      } else {
        e.initial_state.form = StateSpec::Form::Bloch;
        e.initial_state.values = {1.0, 0.0, 0.0};
      }
      e.t_start = rd.number(p, "t_start", P, 0.0);
      e.t_end = rd.number(p, "t_end", P, e.window.t_f + 5.0);
      if (e.window.kind != SwitchKind::AlwaysOn &&
          !(e.t_start < e.window.t_i && e.window.t_f < e.t_end)) {
        rd.issue(p, P, "requires t_start < t_i < t_f < t_end");
      }
      e.references = rd.references(p["references"], child(P, "references"));
      c.params = e;
      break;
    }
    case ScenarioKind::Degeneracy: {
      DegeneracyParams e;
      rd.allow_keys(p, P, {"case", "gamma", "t_i", "t_f", "t_start", "t_end", "initial_state"});
      const std::pair<std::string, DegeneracyCase> cases[] = {
          {"a", DegeneracyCase::A}, {"b", DegeneracyCase::B}, {"c", DegeneracyCase::C}};
      if (!p["case"].IsDefined()) rd.issue(p, child(P, "case"), "missing required key");
      e.which = pick(rd, p, "case", P, cases, DegeneracyCase::A).value_or(e.which);
      e.gamma = rd.number(p, "gamma", P, 3.0);
      e.t_i = rd.number(p, "t_i", P, 6.0);
      e.t_f = rd.number(p, "t_f", P, 8.0);
      e.t_start = rd.number(p, "t_start", P, 0.0);
      e.t_end = rd.number(p, "t_end", P, 10.0);
      rd.positive(p, "gamma", P, e.gamma);
      if (!(e.t_f > e.t_i)) rd.issue(p["t_f"].IsDefined() ? p["t_f"] : p, child(P, "t_f"), "t_f must be greater than t_i");
      if (!(e.t_start < e.t_end)) rd.issue(p, child(P, "t_end"), "t_end must be greater than t_start");
      if (p["initial_state"].IsDefined()) {
        e.initial_state = rd.state(p["initial_state"], child(P, "initial_state"), false);
      } else {
        e.initial_state.form = StateSpec::Form::Diagonal;
        e.initial_state.values = {0.1, 0.2, 0.3, 0.4};
      }
      c.params = e;
      break;
    }
    case ScenarioKind::Cases: {
      CasesParams e;
      rd.allow_keys(p, P, {"cases", "lambda1", "lambda2", "gamma", "amplitudes", "grid"});
      if (const YAML::Node n = p["cases"]; n.IsDefined()) {
        e.cases.clear();
        if (!n.IsSequence()) rd.issue(n, child(P, "cases"), "expected a list such as [A, B, C1, C2]");
        for (const auto& v : n) {
          const std::string s = v.IsScalar() ? v.as<std::string>() : "";
          if (s == "A") e.cases.push_back(CaseFormula::A);
          else if (s == "B") e.cases.push_back(CaseFormula::B);
          else if (s == "C1") e.cases.push_back(CaseFormula::C1);
          else if (s == "C2") e.cases.push_back(CaseFormula::C2);
          else rd.issue(v, child(P, "cases"), "expected A, B, C1 or C2");
        }
      }
      e.lambda1 = rd.number(p, "lambda1", P, 1.0);
      e.lambda2 = rd.number(p, "lambda2", P, -1.0);
      e.gamma = rd.number(p, "gamma", P, 1.0);
      rd.positive(p, "gamma", P, e.gamma);
      e.amplitudes = p["amplitudes"].IsDefined() ? rd.state(p["amplitudes"], child(P, "amplitudes"), false)
                                                 : default_amplitudes();
      if (e.amplitudes.form != StateSpec::Form::Amplitudes) {
        rd.issue(p["amplitudes"], child(P, "amplitudes"), "expected amplitudes or p0");
      }
      e.grid = rd.grid(p["grid"], child(P, "grid"), e.grid);
      c.params = e;
      break;
    }
    case ScenarioKind::Lindblad: {
      LindbladParams e;
      rd.allow_keys(p, P, {"lambda1", "lambda2", "gamma", "amplitudes", "grid"});
      e.lambda1 = rd.number(p, "lambda1", P, 1.0);
      e.lambda2 = rd.number(p, "lambda2", P, -1.0);
      e.gamma = rd.number(p, "gamma", P, 1.0);
      rd.positive(p, "gamma", P, e.gamma);
      e.amplitudes = p["amplitudes"].IsDefined() ? rd.state(p["amplitudes"], child(P, "amplitudes"), false)
                                                 : default_amplitudes();
      if (e.amplitudes.form != StateSpec::Form::Amplitudes) {
        rd.issue(p["amplitudes"], child(P, "amplitudes"), "expected amplitudes or p0");
      }
      e.grid = rd.grid(p["grid"], child(P, "grid"), e.grid);
      c.params = e;
      break;
    }
    case ScenarioKind::Ensemble: {
      EnsembleParams e;
      rd.allow_keys(p, P, {"amplitudes", "gamma", "t_i", "window", "n_runs", "partitions", "tf_jitter",
                           "g_mode", "fourier_terms", "switching_sharpness", "threshold", "log_runs", "threads"});
      if (!c.seed) rd.issue(root, "seed", "an ensemble needs an explicit seed");
      e.amplitudes = p["amplitudes"].IsDefined() ? rd.state(p["amplitudes"], child(P, "amplitudes"), false)
                                                 : default_amplitudes();
      if (e.amplitudes.form != StateSpec::Form::Amplitudes) {
        rd.issue(p["amplitudes"], child(P, "amplitudes"), "expected amplitudes or p0");
      }
      e.gamma = rd.number(p, "gamma", P, e.gamma);
      e.t_i = rd.number(p, "t_i", P, e.t_i);
      e.window = rd.number(p, "window", P, e.window);
      e.n_runs = static_cast<long>(rd.integer(p, "n_runs", P, e.n_runs));
      rd.positive(p, "gamma", P, e.gamma);
      rd.positive(p, "window", P, e.window);
      if (e.n_runs < 1) rd.issue(p["n_runs"], child(P, "n_runs"), "must be >= 1");
      if (const YAML::Node n = p["partitions"]; n.IsDefined() && rd.require_map(n, child(P, "partitions"))) {
        const std::string pp = child(P, "partitions");
        rd.allow_keys(n, pp, {"law", "n", "min", "max"});
        const std::pair<std::string, PartitionLaw::Kind> laws[] = {
            {"uniform-even", PartitionLaw::Kind::UniformEven}, {"fixed", PartitionLaw::Kind::Fixed}};
        e.partition_law = pick(rd, n, "law", pp, laws, e.partition_law).value_or(e.partition_law);
        e.partitions_fixed = static_cast<int>(rd.integer(n, "n", pp, e.partitions_fixed));
        e.partitions_min = static_cast<int>(rd.integer(n, "min", pp, e.partitions_min));
        e.partitions_max = static_cast<int>(rd.integer(n, "max", pp, e.partitions_max));
        const bool fixed = e.partition_law == PartitionLaw::Kind::Fixed;
        if (fixed && (e.partitions_fixed < 2 || e.partitions_fixed % 2 != 0)) {
          rd.issue(n, pp, "n must be even and >= 2");
        }
        if (!fixed && (e.partitions_min < 2 || e.partitions_min % 2 != 0 || e.partitions_max % 2 != 0 ||
                       e.partitions_max < e.partitions_min)) {
          rd.issue(n, pp, "min and max must be even with 2 <= min <= max");
        }
      }
      const std::pair<std::string, TfJitter> jitters[] = {{"one-period", TfJitter::OnePeriod},
                                                          {"none", TfJitter::None}};
      e.tf_jitter = pick(rd, p, "tf_jitter", P, jitters, e.tf_jitter).value_or(e.tf_jitter);
      const std::pair<std::string, WaveMode> modes[] = {{"exact-square", WaveMode::ExactSquare},
                                                        {"fourier", WaveMode::Fourier}};
      e.g_mode = pick(rd, p, "g_mode", P, modes, e.g_mode).value_or(e.g_mode);
      e.fourier_terms = static_cast<int>(rd.integer(p, "fourier_terms", P, e.fourier_terms));
      if (e.fourier_terms < 1) rd.issue(p["fourier_terms"], child(P, "fourier_terms"), "must be >= 1");
      e.switching_sharpness = rd.number(p, "switching_sharpness", P, 0.0);
      rd.non_negative(p, "switching_sharpness", P, e.switching_sharpness);
      e.threshold = rd.number(p, "threshold", P, e.threshold);
      if (!(e.threshold > 0.5 && e.threshold < 1.0)) rd.issue(p["threshold"], child(P, "threshold"), "must lie in (0.5, 1)");
      e.log_runs = rd.boolean(p, "log_runs", P, e.log_runs);
      const long long threads = rd.integer(p, "threads", P, 0);
      if (threads < 0) rd.issue(p["threads"], child(P, "threads"), "must be >= 0");
      e.threads = static_cast<unsigned>(std::max(0LL, threads));
      c.params = e;
      break;
    }
    case ScenarioKind::FixedPoints: {
      FixedPointsParams e;
      rd.allow_keys(p, P, {"variant", "gamma", "portrait_points"});
      const std::pair<std::string, FlowVariant> variants[] = {
          {"normalized-3d", FlowVariant::Normalized3d}, {"unnormalized-4d", FlowVariant::Unnormalized4d}};
      e.variant = pick(rd, p, "variant", P, variants, e.variant).value_or(e.variant);
      e.gamma = rd.number(p, "gamma", P, 3.0);
      rd.non_negative(p, "gamma", P, e.gamma);
      e.portrait_points = static_cast<int>(rd.integer(p, "portrait_points", P, 9));
      if (e.portrait_points < 2) rd.issue(p["portrait_points"], child(P, "portrait_points"), "must be >= 2");
      c.params = e;
      break;
    }
  }

  // Cross-field checks that need a built Hamiltonian.
  if (rd.issues.empty()) {
    try {
      if (const auto* e = std::get_if<EvolveParams>(&c.params)) {
        const SwitchedHamiltonian h = build_hamiltonian(e->hamiltonian, e->window);
        for (const auto& s : e->initial_states) {
          if (s.build().dim() != h.dim()) throw DimensionError("initial state and Hamiltonian sizes differ");
        }
        if (e->engine == EvolveParams::Engine::TwoLevel && h.dim() != 2) {
          throw DimensionError("the two-level engine needs a 2x2 Hamiltonian");
        }
      } else if (const auto* e = std::get_if<CollapseParams>(&c.params)) {
        const SwitchedHamiltonian h = build_hamiltonian(e->hamiltonian, e->window);
        if (e->initial_state.build().dim() != h.dim()) {
          throw DimensionError("initial state and Hamiltonian sizes differ");
        }
      } else if (const auto* e = std::get_if<DegeneracyParams>(&c.params)) {
        if (e->initial_state.build().dim() != 4) throw DimensionError("degeneracy runs need a 4-level state");
      }
    } catch (const Error& e) {
      rd.issue(p, P, e.what());
    }
  }

  if (!rd.issues.empty()) throw ConfigError(rd.issues);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string with_seed(std::string_view text, std::uint64_t seed) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{e.mark.line + 1, "", std::string("malformed YAML: ") + e.msg}});
  }
  if (!root.IsMap()) throw ConfigError({{1, "", "the document must be a mapping"}});
  root["seed"] = seed;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << root;
  return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void emit_complex(YAML::Emitter& out, Complex z) {
  out << YAML::Flow << YAML::BeginSeq << z.real() << z.imag() << YAML::EndSeq;
}

void emit_matrix(YAML::Emitter& out, const MatrixSpec& m) {
  out << YAML::BeginMap;
  for (const bool imag : {false, true}) {
    out << YAML::Key << (imag ? "imag" : "real") << YAML::Value << YAML::BeginSeq;
    for (int r = 0; r < m.dim; ++r) {
      out << YAML::Flow << YAML::BeginSeq;
      for (int c = 0; c < m.dim; ++c) {
        const Complex z = m.entries[static_cast<std::size_t>(r * m.dim + c)];
        out << (imag ? z.imag() : z.real());
      }
      out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
}

void emit_state(YAML::Emitter& out, const StateSpec& s) {
  using F = StateSpec::Form;
  if (s.form == F::Initial) {
    out << "initial";
    return;
  }
  out << YAML::BeginMap;
  switch (s.form) {
    case F::Bloch:
      out << YAML::Key << "bloch" << YAML::Value << YAML::Flow << s.values;
      break;
    case F::Amplitudes:
    case F::Vector:
      out << YAML::Key << (s.form == F::Amplitudes ? "amplitudes" : "vector") << YAML::Value << YAML::BeginSeq;
      for (const Complex& z : s.amplitudes) emit_complex(out, z);
      out << YAML::EndSeq;
      break;
    case F::Diagonal:
      out << YAML::Key << "diagonal" << YAML::Value << YAML::Flow << s.values;
      break;
    case F::Basis:
      out << YAML::Key << "basis" << YAML::Value << s.index << YAML::Key << "dim" << YAML::Value << s.dim;
      break;
    case F::Mixed:
      out << YAML::Key << "mixed" << YAML::Value << s.dim;
      break;
    case F::Density:
      out << YAML::Key << "density" << YAML::Value;
      emit_matrix(out, s.density);
      break;
    case F::Initial:
      break;
  }
  out << YAML::EndMap;
}

void emit_window(YAML::Emitter& out, const WindowSpec& w) {
  out << YAML::BeginMap;
  switch (w.kind) {
    case SwitchKind::TanhWindow: out << YAML::Key << "kind" << YAML::Value << "tanh"; break;
    case SwitchKind::HardWindow: out << YAML::Key << "kind" << YAML::Value << "hard"; break;
    case SwitchKind::AlwaysOn: out << YAML::Key << "kind" << YAML::Value << "always-on"; break;
  }
  if (w.kind != SwitchKind::AlwaysOn) {
    out << YAML::Key << "t_i" << YAML::Value << w.t_i << YAML::Key << "t_f" << YAML::Value << w.t_f;
    out << YAML::Key << "sharpness" << YAML::Value << w.sharpness;
  }
  out << YAML::EndMap;
}

void emit_hamiltonian(YAML::Emitter& out, const HamiltonianSpec& h) {
  using F = HamiltonianSpec::Family;
  out << YAML::BeginMap;
  switch (h.family) {
    case F::NhQubit:
      out << YAML::Key << "family" << YAML::Value << "nh-qubit" << YAML::Key << "gamma" << YAML::Value << h.gamma;
      break;
    case F::TwoLevelPm:
      out << YAML::Key << "family" << YAML::Value << "two-level-pm" << YAML::Key << "sign" << YAML::Value
          << (h.sign > 0 ? "+" : "-") << YAML::Key << "gamma" << YAML::Value << h.gamma;
      break;
    case F::Measurement:
      out << YAML::Key << "family" << YAML::Value << "measurement" << YAML::Key << "basis" << YAML::Value
          << h.basis << YAML::Key << "eigenvalues" << YAML::Value << YAML::Flow << h.eigenvalues
          << YAML::Key << "target" << YAML::Value << h.target << YAML::Key << "gamma" << YAML::Value << h.gamma;
      break;
    case F::Matrix:
      out << YAML::Key << "family" << YAML::Value << "matrix" << YAML::Key << "base" << YAML::Value;
      emit_matrix(out, h.base);
      out << YAML::Key << "gain" << YAML::Value;
      emit_matrix(out, h.gain);
      out << YAML::Key << "base_in_window" << YAML::Value << h.base_in_window;
      break;
    case F::Constant:
      out << YAML::Key << "family" << YAML::Value << "constant" << YAML::Key << "matrix" << YAML::Value;
      emit_matrix(out, h.base);
      break;
  }
  out << YAML::EndMap;
}

void emit_references(YAML::Emitter& out, const std::vector<ReferenceSpec>& refs) {
  if (refs.empty()) return;
  out << YAML::Key << "references" << YAML::Value << YAML::BeginSeq;
  for (const auto& r : refs) {
    out << YAML::BeginMap << YAML::Key << "name" << YAML::Value << r.name << YAML::Key << "state" << YAML::Value;
    emit_state(out, r.state);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

void emit_grid(YAML::Emitter& out, const GridSpec& g) {
  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap << YAML::Key << "start" << YAML::Value << g.start
      << YAML::Key << "end" << YAML::Value << g.end << YAML::Key << "step" << YAML::Value << g.step << YAML::EndMap;
}

const char* case_name(CaseFormula c) {
  switch (c) {
    case CaseFormula::A: return "A";
    case CaseFormula::B: return "B";
    case CaseFormula::C1: return "C1";
    case CaseFormula::C2: return "C2";
  }
  return "?";
}

}  // namespace

std::string serialize_config(const ScenarioConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(c.kind);
  if (!c.name.empty()) out << YAML::Key << "name" << YAML::Value << c.name;
  if (c.seed) out << YAML::Key << "seed" << YAML::Value << *c.seed;
  out << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap
      << YAML::Key << "rel_tol" << YAML::Value << c.integrator.rel_tol
      << YAML::Key << "abs_tol" << YAML::Value << c.integrator.abs_tol
      << YAML::Key << "max_step" << YAML::Value << c.integrator.max_step
      << YAML::Key << "sample_every" << YAML::Value << c.integrator.sample_every << YAML::EndMap;
  if (!c.output.stem.empty()) {
    out << YAML::Key << "output" << YAML::Value << YAML::BeginMap << YAML::Key << "stem" << YAML::Value
        << c.output.stem << YAML::EndMap;
  }
  out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
  if (const auto* e = std::get_if<EvolveParams>(&c.params)) {
    out << YAML::Key << "hamiltonian" << YAML::Value;
    emit_hamiltonian(out, e->hamiltonian);
    out << YAML::Key << "window" << YAML::Value;
    emit_window(out, e->window);
    out << YAML::Key << "initial_states" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : e->initial_states) emit_state(out, s);
    out << YAML::EndSeq;
    out << YAML::Key << "t_start" << YAML::Value << e->t_start << YAML::Key << "t_end" << YAML::Value << e->t_end;
    const char* engine = "ode";
    if (e->engine == EvolveParams::Engine::ClosedForm) engine = "closed-form";
    if (e->engine == EvolveParams::Engine::TwoLevel) engine = "two-level";
    if (e->engine == EvolveParams::Engine::Unnormalized) engine = "unnormalized";
    out << YAML::Key << "engine" << YAML::Value << engine;
    emit_references(out, e->references);
  } else if (const auto* e = std::get_if<CollapseParams>(&c.params)) {
    out << YAML::Key << "hamiltonian" << YAML::Value;
    emit_hamiltonian(out, e->hamiltonian);
    out << YAML::Key << "window" << YAML::Value;
    emit_window(out, e->window);
    out << YAML::Key << "initial_state" << YAML::Value;
    emit_state(out, e->initial_state);
    out << YAML::Key << "t_start" << YAML::Value << e->t_start << YAML::Key << "t_end" << YAML::Value << e->t_end;
    emit_references(out, e->references);
  } else if (const auto* e = std::get_if<DegeneracyParams>(&c.params)) {
    const char* names[] = {"a", "b", "c"};
    out << YAML::Key << "case" << YAML::Value << names[static_cast<int>(e->which)]
        << YAML::Key << "gamma" << YAML::Value << e->gamma << YAML::Key << "t_i" << YAML::Value << e->t_i
        << YAML::Key << "t_f" << YAML::Value << e->t_f << YAML::Key << "t_start" << YAML::Value << e->t_start
        << YAML::Key << "t_end" << YAML::Value << e->t_end << YAML::Key << "initial_state" << YAML::Value;
    emit_state(out, e->initial_state);
  } else if (const auto* e = std::get_if<CasesParams>(&c.params)) {
    out << YAML::Key << "cases" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto k : e->cases) out << case_name(k);
    out << YAML::EndSeq;
    out << YAML::Key << "lambda1" << YAML::Value << e->lambda1 << YAML::Key << "lambda2" << YAML::Value
        << e->lambda2 << YAML::Key << "gamma" << YAML::Value << e->gamma << YAML::Key << "amplitudes"
        << YAML::Value;
    emit_state(out, e->amplitudes);
    emit_grid(out, e->grid);
  } else if (const auto* e = std::get_if<LindbladParams>(&c.params)) {
    out << YAML::Key << "lambda1" << YAML::Value << e->lambda1 << YAML::Key << "lambda2" << YAML::Value
        << e->lambda2 << YAML::Key << "gamma" << YAML::Value << e->gamma << YAML::Key << "amplitudes"
        << YAML::Value;
    emit_state(out, e->amplitudes);
    emit_grid(out, e->grid);
  } else if (const auto* e = std::get_if<EnsembleParams>(&c.params)) {
    out << YAML::Key << "amplitudes" << YAML::Value;
    emit_state(out, e->amplitudes);
    out << YAML::Key << "gamma" << YAML::Value << e->gamma << YAML::Key << "t_i" << YAML::Value << e->t_i
        << YAML::Key << "window" << YAML::Value << e->window << YAML::Key << "n_runs" << YAML::Value
        << e->n_runs;
    out << YAML::Key << "partitions" << YAML::Value << YAML::BeginMap;
    if (e->partition_law == PartitionLaw::Kind::Fixed) {
      out << YAML::Key << "law" << YAML::Value << "fixed" << YAML::Key << "n" << YAML::Value << e->partitions_fixed;
    } else {
      out << YAML::Key << "law" << YAML::Value << "uniform-even" << YAML::Key << "min" << YAML::Value
          << e->partitions_min << YAML::Key << "max" << YAML::Value << e->partitions_max;
    }
    out << YAML::EndMap;
    out << YAML::Key << "tf_jitter" << YAML::Value << (e->tf_jitter == TfJitter::OnePeriod ? "one-period" : "none")
        << YAML::Key << "g_mode" << YAML::Value << (e->g_mode == WaveMode::ExactSquare ? "exact-square" : "fourier")
        << YAML::Key << "fourier_terms" << YAML::Value << e->fourier_terms << YAML::Key << "switching_sharpness"
        << YAML::Value << e->switching_sharpness << YAML::Key << "threshold" << YAML::Value << e->threshold
        << YAML::Key << "log_runs" << YAML::Value << e->log_runs << YAML::Key << "threads" << YAML::Value
        << e->threads;
  } else if (const auto* e = std::get_if<FixedPointsParams>(&c.params)) {
    out << YAML::Key << "variant" << YAML::Value
        << (e->variant == FlowVariant::Normalized3d ? "normalized-3d" : "unnormalized-4d") << YAML::Key
        << "gamma" << YAML::Value << e->gamma << YAML::Key << "portrait_points" << YAML::Value
        << e->portrait_points;
  }
  out << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

EnsembleSpec ensemble_spec(const ScenarioConfig& c) {
  const auto* e = std::get_if<EnsembleParams>(&c.params);
  if (e == nullptr) throw ValidationError("ensemble_spec: not an ensemble configuration");
  if (!c.seed) throw ValidationError("ensemble_spec: an ensemble needs an explicit seed");
  EnsembleSpec s;
  s.amplitudes = amplitudes_of(e->amplitudes);
  s.gamma = e->gamma;
  s.t_i = e->t_i;
  s.window = e->window;
  s.n_runs = e->n_runs;
  s.partitions.kind = e->partition_law;
  s.partitions.fixed = e->partitions_fixed;
  s.partitions.min = e->partitions_min;
  s.partitions.max = e->partitions_max;
  s.tf_jitter = e->tf_jitter;
  s.seed = *c.seed;
  s.g_mode = e->g_mode;
  s.fourier_terms = e->fourier_terms;
  s.switching_sharpness = e->switching_sharpness;
  s.threshold = e->threshold;
  s.log_runs = e->log_runs;
  s.threads = e->threads;
  s.control = c.integrator.control();
  return s;
}

}  // namespace nhm::io
