#include "rbslip/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rbslip/grid.hpp"

namespace rbslip {

AdvectionForm parse_advection(const std::string& s) {
  if (s == "skew_symmetric") return AdvectionForm::skew_symmetric;
  if (s == "conservative") return AdvectionForm::conservative;
  throw std::invalid_argument("unknown advection form '" + s + "' (expected skew_symmetric or conservative)");
}

const char* advection_name(AdvectionForm a) {
  return a == AdvectionForm::conservative ? "conservative" : "skew_symmetric";
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.theta = solver.theta;
  o.coupling_sweeps = solver.coupling_sweeps;
  o.coupling_tol = solver.coupling_tol;
  o.cfl = time.cfl;
  o.advection = solver.advection;
  return o;
}

ProofInputs RunConfig::proof_inputs() const {
  ProofInputs p;
  p.user_c = bounds.user_c;
  p.u0_norm = bounds.u0_norm;
  p.a0_override = bounds.a0_override;
  p.delta_override = bounds.delta_override;
  return p;
}

namespace {

using Marks = std::map<std::string, YAML::Mark>;

std::string where(const YAML::Mark& m) {
  if (m.is_null()) return "";
  return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ": ";
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& msg) { throw ConfigError(where(n.Mark()) + msg); }

class Reader {
 public:
  explicit Reader(Marks& marks) : marks_(marks) {}

  /// Checks for unknown keys and returns the map (or a null node if absent).
  YAML::Node section(const YAML::Node& root, const std::string& name, const std::set<std::string>& allowed) {
    YAML::Node s = root[name];
    if (!s) return s;
    if (!s.IsMap()) fail(s, name + ": expected a mapping");
    marks_[name] = s.Mark();
    for (const auto& kv : s) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        std::string list;
        for (const std::string& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(kv.first, "unknown key '" + name + "." + key + "' (allowed: " + list + ")");
      }
    }
    return s;
  }

  template <class T>
  bool get(const YAML::Node& sec, const std::string& sname, const std::string& key, T& out) {
    if (!sec) return false;
    const YAML::Node n = sec[key];
    if (!n) return false;
    const std::string path = sname + "." + key;
    marks_[path] = n.Mark();
    out = convert<T>(n, path);
    return true;
  }

  template <class T>
  T convert(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(n, path + ": expected a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, path + ": cannot read '" + n.Scalar() + "' as " + type_name<T>());
    }
  }

  std::vector<std::vector<double>> tuples(const YAML::Node& sec, const std::string& sname, const std::string& key,
                                          std::size_t arity, const char* shape) {
    std::vector<std::vector<double>> out;
    if (!sec || !sec[key]) return out;
    const YAML::Node n = sec[key];
    const std::string path = sname + "." + key;
    marks_[path] = n.Mark();
    if (!n.IsSequence()) fail(n, path + ": expected a list of " + shape);
    for (const auto& e : n) {
      if (!e.IsSequence() || e.size() != arity) fail(e, path + ": each entry must be " + shape);
      std::vector<double> t;
      for (const auto& v : e) t.push_back(convert<double>(v, path));
      out.push_back(t);
    }
    return out;
  }

  std::vector<FourierMode> modes(const YAML::Node& sec, const std::string& sname, const std::string& key) {
    std::vector<FourierMode> out;
    for (const auto& t : tuples(sec, sname, key, 3, "[k, cos, sin]")) {
      if (t[0] != std::floor(t[0])) fail(sec[key], sname + "." + key + ": wavenumber k must be an integer");
      out.push_back({static_cast<int>(t[0]), t[1], t[2]});
    }
    return out;
  }

 private:
  template <class T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, double>) return "a number";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else return "a string";
  }
  Marks& marks_;
};

void read_alpha(Reader& rd, const YAML::Node& boundary, const std::string& key, AlphaConfig& out, Marks& marks) {
  if (!boundary || !boundary[key]) return;
  const YAML::Node n = boundary[key];
  const std::string path = "boundary." + key;
  marks[path] = n.Mark();
  if (n.IsScalar()) {
    out = {rd.convert<double>(n, path), {}};
    return;
  }
  if (!n.IsMap()) fail(n, path + ": expected a number or a mapping with mean/modes");
  for (const auto& kv : n) {
    const std::string k = kv.first.as<std::string>();
    if (k != "mean" && k != "modes") fail(kv.first, "unknown key '" + path + "." + k + "' (allowed: mean, modes)");
  }
  rd.get(n, path, "mean", out.mean);
  out.modes = rd.modes(n, path, "modes");
}

void check(bool ok, const Marks& marks, const std::string& path, const std::string& msg) {
  if (ok) return;
  auto it = marks.find(path);
  throw ConfigError((it != marks.end() ? where(it->second) : std::string()) + path + ": " + msg);
}

void validate_impl(RunConfig& c, const Marks& m) {
  c.warnings.clear();
  check(c.geometry.gamma > 0.0 && std::isfinite(c.geometry.gamma), m, "geometry.gamma", "must be positive");
  for (const FourierMode& f : c.geometry.h_modes)
    check(f.k >= 1, m, "geometry.h_modes", "wavenumbers must be >= 1");
  for (const AlphaConfig* a : {&c.boundary.alpha_bottom, &c.boundary.alpha_top})
    for (const FourierMode& f : a->modes) check(f.k >= 1, m, "boundary", "alpha wavenumbers must be >= 1");
  check(c.physical.ra >= 0.0 && std::isfinite(c.physical.ra), m, "physical.ra", "must be >= 0");
  check(c.physical.pr > 0.0 && std::isfinite(c.physical.pr), m, "physical.pr", "must be positive");
  check(c.n1 >= 4 && fft_friendly(c.n1), m, "grid.n1",
        "must be FFT friendly (a product of the primes 2, 3, 5, 7) and at least 4");
  check(c.n2 >= 8, m, "grid.n2", "rule n2 >= 8 violated (got " + std::to_string(c.n2) + ")");
  if (c.time.dt) check(*c.time.dt > 0.0, m, "time.dt", "must be positive (or auto)");
  check(c.time.t_end >= 0.0, m, "time.t_end", "must be >= 0");
  check(c.time.burn_in >= 0.0, m, "time.burn_in", "must be >= 0");
  check(c.time.sample_interval > 0.0, m, "time.sample_interval", "must be positive");
  check(c.time.checkpoint_interval >= 0.0, m, "time.checkpoint_interval", "must be >= 0");
  check(c.time.cfl > 0.0 && c.time.cfl <= 1.0, m, "time.cfl", "must lie in (0, 1]");
  check(c.time.dt_max > 0.0, m, "time.dt_max", "must be positive");
  check(c.initial.temp_amplitude >= 0.0, m, "initial.temp_amplitude", "amplitude must be >= 0");
  check(c.initial.temp_modes >= 1, m, "initial.temp_modes", "must be >= 1");
  for (const StreamMode& s : c.initial.velocity_modes)
    check(s.k >= 0 && s.m >= 1, m, "initial.velocity_modes", "need k >= 0 and m >= 1");
  check(c.solver.theta >= 0.5 && c.solver.theta <= 1.0, m, "solver.theta", "must lie in [0.5, 1]");
  check(c.solver.coupling_sweeps >= 0, m, "solver.coupling_sweeps", "must be >= 0");
  check(c.solver.coupling_tol > 0.0, m, "solver.coupling_tol", "must be positive");
  check(c.solver.pressure_interval >= 0, m, "solver.pressure_interval", "must be >= 0");
  check(!c.bounds.cases.empty(), m, "bounds.cases", "must list at least one case");
  check(c.bounds.user_c > 0.0, m, "bounds.user_c", "must be positive");
  check(c.bounds.user_cbar > 0.0, m, "bounds.user_cbar", "must be positive");
  check(c.bounds.u0_norm >= 0.0, m, "bounds.u0_norm", "must be >= 0");
  if (c.bounds.delta_override)
    check(*c.bounds.delta_override > 0.0 && *c.bounds.delta_override <= 0.5, m, "bounds.delta_override",
          "must lie in (0, 1/2]");
  if (c.bounds.a0_override) check(*c.bounds.a0_override > 0.0, m, "bounds.a0_override", "must be positive");
  check(c.bounds.n1_conditions >= 8, m, "bounds.n1_conditions", "must be >= 8");
  check(c.output.precision >= 1 && c.output.precision <= 17, m, "output.precision", "must lie in [1, 17]");
  check(!c.output.directory.empty(), m, "output.directory", "must not be empty");

  BoundaryNorms norms;
  try {
    const auto [b, t] = boundary_frames(c.profile(), c.bounds.n1_conditions, c.alpha_bottom(), c.alpha_top());
    norms = boundary_norms(c.profile(), b, t);
  } catch (const std::exception& e) {
    check(false, m, "boundary", e.what());
  }

  // the background strip should hold a few grid cells
  const double dx2 = 1.0 / (c.n2 - 1);
  double delta = c.bounds.delta_override.value_or(0.0);
  if (!c.bounds.delta_override && c.physical.ra > 0.0) {
    delta = 0.5;
    for (BoundCase bc : c.bounds.cases)
      delta = std::min(delta, choose_proof_parameters(bc, c.physical, norms, c.proof_inputs()).delta);
  }
  if (delta > 0.0 && dx2 > delta / 4.0) {
    std::ostringstream os;
    os << "grid.n2: dx2 = " << dx2 << " exceeds delta/4 = " << delta / 4.0
       << "; the background strip is under-resolved";
    c.warnings.push_back(os.str());
  }
}

}  // namespace

void validate_config(RunConfig& c) { validate_impl(c, {}); }

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(where(e.mark) + "YAML syntax error: " + e.msg);
  }
  RunConfig c;
  Marks marks;
  Reader rd(marks);
  if (!root || root.IsNull()) return (validate_impl(c, marks), c);
  if (!root.IsMap()) fail(root, "top level must be a mapping of sections");
  const std::set<std::string> sections = {"geometry", "boundary", "physical", "grid", "time",
                                          "initial", "solver", "bounds", "output"};
  for (const auto& kv : root) {
    const std::string k = kv.first.as<std::string>();
    if (!sections.count(k)) fail(kv.first, "unknown section '" + k + "'");
  }

  const YAML::Node geo = rd.section(root, "geometry", {"gamma", "h_mean", "h_modes"});
  rd.get(geo, "geometry", "gamma", c.geometry.gamma);
  rd.get(geo, "geometry", "h_mean", c.geometry.h_mean);
  c.geometry.h_modes = rd.modes(geo, "geometry", "h_modes");

  const YAML::Node bnd = rd.section(root, "boundary", {"alpha_bottom", "alpha_top"});
  read_alpha(rd, bnd, "alpha_bottom", c.boundary.alpha_bottom, marks);
  c.boundary.alpha_top = c.boundary.alpha_bottom;
  read_alpha(rd, bnd, "alpha_top", c.boundary.alpha_top, marks);

  const YAML::Node phys = rd.section(root, "physical", {"ra", "pr"});
  rd.get(phys, "physical", "ra", c.physical.ra);
  rd.get(phys, "physical", "pr", c.physical.pr);

  const YAML::Node grid = rd.section(root, "grid", {"n1", "n2"});
  rd.get(grid, "grid", "n1", c.n1);
  rd.get(grid, "grid", "n2", c.n2);

  const YAML::Node tm = rd.section(root, "time", {"dt", "t_end", "burn_in", "sample_interval",
                                                  "checkpoint_interval", "cfl", "dt_max"});
  if (tm && tm["dt"]) {
    const YAML::Node n = tm["dt"];
    marks["time.dt"] = n.Mark();
    if (n.IsScalar() && n.Scalar() == "auto") c.time.dt.reset();
    else c.time.dt = rd.convert<double>(n, "time.dt");
  }
  rd.get(tm, "time", "t_end", c.time.t_end);
  if (!rd.get(tm, "time", "burn_in", c.time.burn_in)) c.time.burn_in = 0.2 * c.time.t_end;
  rd.get(tm, "time", "sample_interval", c.time.sample_interval);
  rd.get(tm, "time", "checkpoint_interval", c.time.checkpoint_interval);
  rd.get(tm, "time", "cfl", c.time.cfl);
  rd.get(tm, "time", "dt_max", c.time.dt_max);

  const YAML::Node ini = rd.section(root, "initial", {"temp_amplitude", "seed", "temp_modes", "velocity_modes"});
  rd.get(ini, "initial", "temp_amplitude", c.initial.temp_amplitude);
  rd.get(ini, "initial", "seed", c.initial.seed);
  rd.get(ini, "initial", "temp_modes", c.initial.temp_modes);
  for (const auto& t : rd.tuples(ini, "initial", "velocity_modes", 4, "[k, m, cos, sin]")) {
    if (t[0] != std::floor(t[0]) || t[1] != std::floor(t[1]))
      fail(ini["velocity_modes"], "initial.velocity_modes: k and m must be integers");
    c.initial.velocity_modes.push_back({static_cast<int>(t[0]), static_cast<int>(t[1]), t[2], t[3]});
  }

  const YAML::Node sol = rd.section(root, "solver", {"theta", "coupling_sweeps", "coupling_tol",
                                                     "pressure_interval", "advection"});
  rd.get(sol, "solver", "theta", c.solver.theta);
  rd.get(sol, "solver", "coupling_sweeps", c.solver.coupling_sweeps);
  rd.get(sol, "solver", "coupling_tol", c.solver.coupling_tol);
  rd.get(sol, "solver", "pressure_interval", c.solver.pressure_interval);
  std::string adv;
  if (rd.get(sol, "solver", "advection", adv)) {
    try {
      c.solver.advection = parse_advection(adv);
    } catch (const std::invalid_argument& e) {
      fail(sol["advection"], std::string("solver.advection: ") + e.what());
    }
  }

  const YAML::Node bo = rd.section(root, "bounds", {"cases", "user_c", "user_cbar", "delta_override", "u0_norm",
                                                    "a0_override", "n1_conditions"});
  if (bo && bo["cases"]) {
    const YAML::Node n = bo["cases"];
    marks["bounds.cases"] = n.Mark();
    if (!n.IsSequence()) fail(n, "bounds.cases: expected a list of case names");
    c.bounds.cases.clear();
    for (const auto& e : n) {
      try {
        c.bounds.cases.push_back(parse_bound_case(rd.convert<std::string>(e, "bounds.cases")));
      } catch (const std::invalid_argument& ex) {
        fail(e, std::string("bounds.cases: ") + ex.what());
      }
    }
  }
  rd.get(bo, "bounds", "user_c", c.bounds.user_c);
  rd.get(bo, "bounds", "user_cbar", c.bounds.user_cbar);
  double v = 0.0;
  if (rd.get(bo, "bounds", "delta_override", v)) c.bounds.delta_override = v;
  rd.get(bo, "bounds", "u0_norm", c.bounds.u0_norm);
  if (rd.get(bo, "bounds", "a0_override", v)) c.bounds.a0_override = v;
  rd.get(bo, "bounds", "n1_conditions", c.bounds.n1_conditions);

  const YAML::Node out = rd.section(root, "output", {"directory", "precision"});
  rd.get(out, "output", "directory", c.output.directory);
  rd.get(out, "output", "precision", c.output.precision);

  validate_impl(c, marks);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace {

void emit_modes(YAML::Emitter& e, const std::vector<FourierMode>& modes) {
  e << YAML::BeginSeq;
  for (const FourierMode& f : modes) e << YAML::Flow << YAML::BeginSeq << f.k << f.cos_coeff << f.sin_coeff << YAML::EndSeq;
  e << YAML::EndSeq;
}

void emit_alpha(YAML::Emitter& e, const char* key, const AlphaConfig& a) {
  e << YAML::Key << key << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "mean" << YAML::Value << a.mean;
  e << YAML::Key << "modes" << YAML::Value;
  emit_modes(e, a.modes);
  e << YAML::EndMap;
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;

  e << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "gamma" << YAML::Value << c.geometry.gamma;
  e << YAML::Key << "h_mean" << YAML::Value << c.geometry.h_mean;
  e << YAML::Key << "h_modes" << YAML::Value;
  emit_modes(e, c.geometry.h_modes);
  e << YAML::EndMap;

  e << YAML::Key << "boundary" << YAML::Value << YAML::BeginMap;
  emit_alpha(e, "alpha_bottom", c.boundary.alpha_bottom);
  emit_alpha(e, "alpha_top", c.boundary.alpha_top);
  e << YAML::EndMap;

  e << YAML::Key << "physical" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "ra" << YAML::Value << c.physical.ra;
  e << YAML::Key << "pr" << YAML::Value << c.physical.pr;
  e << YAML::EndMap;

  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n1" << YAML::Value << c.n1;
  e << YAML::Key << "n2" << YAML::Value << c.n2;
  e << YAML::EndMap;

  e << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dt" << YAML::Value;
  if (c.time.dt) e << *c.time.dt;
  else e << "auto";
  e << YAML::Key << "t_end" << YAML::Value << c.time.t_end;
  e << YAML::Key << "burn_in" << YAML::Value << c.time.burn_in;
  e << YAML::Key << "sample_interval" << YAML::Value << c.time.sample_interval;
  e << YAML::Key << "checkpoint_interval" << YAML::Value << c.time.checkpoint_interval;
  e << YAML::Key << "cfl" << YAML::Value << c.time.cfl;
  e << YAML::Key << "dt_max" << YAML::Value << c.time.dt_max;
  e << YAML::EndMap;

  e << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "temp_amplitude" << YAML::Value << c.initial.temp_amplitude;
  e << YAML::Key << "seed" << YAML::Value << c.initial.seed;
  e << YAML::Key << "temp_modes" << YAML::Value << c.initial.temp_modes;
  e << YAML::Key << "velocity_modes" << YAML::Value << YAML::BeginSeq;
  for (const StreamMode& s : c.initial.velocity_modes)
    e << YAML::Flow << YAML::BeginSeq << s.k << s.m << s.cos_amp << s.sin_amp << YAML::EndSeq;
  e << YAML::EndSeq << YAML::EndMap;

  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "theta" << YAML::Value << c.solver.theta;
  e << YAML::Key << "coupling_sweeps" << YAML::Value << c.solver.coupling_sweeps;
  e << YAML::Key << "coupling_tol" << YAML::Value << c.solver.coupling_tol;
  e << YAML::Key << "pressure_interval" << YAML::Value << c.solver.pressure_interval;
  e << YAML::Key << "advection" << YAML::Value << advection_name(c.solver.advection);
  e << YAML::EndMap;

  e << YAML::Key << "bounds" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "cases" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (BoundCase bc : c.bounds.cases) e << bound_case_name(bc);
  e << YAML::EndSeq;
  e << YAML::Key << "user_c" << YAML::Value << c.bounds.user_c;
  e << YAML::Key << "user_cbar" << YAML::Value << c.bounds.user_cbar;
  if (c.bounds.delta_override) e << YAML::Key << "delta_override" << YAML::Value << *c.bounds.delta_override;
  e << YAML::Key << "u0_norm" << YAML::Value << c.bounds.u0_norm;
  if (c.bounds.a0_override) e << YAML::Key << "a0_override" << YAML::Value << *c.bounds.a0_override;
  e << YAML::Key << "n1_conditions" << YAML::Value << c.bounds.n1_conditions;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "directory" << YAML::Value << YAML::DoubleQuoted << c.output.directory;
  e << YAML::Key << "precision" << YAML::Value << c.output.precision;
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

RunConfig with_override(const RunConfig& c, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size())
    throw ConfigError("override key '" + dotted_key + "' must have the form section.key");
  YAML::Node root = YAML::Load(serialize_config(c));
  const std::string sec = dotted_key.substr(0, dot), key = dotted_key.substr(dot + 1);
  if (!root[sec]) throw ConfigError("override key '" + dotted_key + "': unknown section '" + sec + "'");
  YAML::Node v;
  try {
    v = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    throw ConfigError("override value '" + value + "' is not valid YAML: " + e.msg);
  }
  root[sec][key] = v;
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << root;
  return parse_config(e.c_str());
}

}  // namespace rbslip
