#pragma once

// INI-style run configuration. Every key is declared in a schema with its
// type and admissible range; unknown or malformed keys are rejected by name.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vecf/solver1d.hpp"

namespace vecf::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class KeyType { real, integer, text, real_list, int_list };

struct KeySpec {
  const char* name;  ///< "section.key"
  KeyType type;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = false;
  const char* help = "";
};

inline const std::vector<KeySpec>& schema() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  static const std::vector<KeySpec> s{
      {"transport.a1", KeyType::real, -1e3, 1e3, false, "chi / eta"},
      {"transport.a2", KeyType::real, -1e3, 1e3, false, "lambda / eta"},
      {"transport.eta_form", KeyType::text, 0, 0, false, "constant | power-law"},
      {"transport.eta0", KeyType::real, 0.0, 1e6, false, "eta scale"},
      {"transport.p_exp", KeyType::real, -10.0, 10.0, false, "power-law exponent"},

      {"scan.a1_min", KeyType::real, -1e3, 1e3},
      {"scan.a1_max", KeyType::real, -1e3, 1e3},
      {"scan.a1_steps", KeyType::integer, 1, 1e5},
      {"scan.a2_min", KeyType::real, -1e3, 1e3},
      {"scan.a2_max", KeyType::real, -1e3, 1e3},
      {"scan.a2_steps", KeyType::integer, 1, 1e5},
      {"scan.a2_list", KeyType::real_list, -1e3, 1e3, false, "a2 values for causality-scan"},
      {"scan.u_max", KeyType::real, 0.0, 1e3},
      {"scan.u_steps", KeyType::integer, 1, 1e6},
      {"scan.theta_steps", KeyType::integer, 2, 1e6},

      {"solver.N", KeyType::integer, 8, 1 << 22},
      {"solver.L", KeyType::real, 0.0, 1e6, true},
      {"solver.cfl", KeyType::real, 0.0, 1.0, true},
      {"solver.t_end", KeyType::real, 0.0, 1e6},
      {"solver.ic", KeyType::text, 0, 0, false, "constant | gaussian | shear | custom"},
      {"solver.ic_amplitude", KeyType::real, -1e3, 1e3},
      {"solver.ic_width", KeyType::real, 0.0, 1e6, true},
      {"solver.ic_center", KeyType::real, -1e6, 1e6},
      {"solver.ic_eps0", KeyType::real, 0.0, 1e12, true},
      {"solver.ic_v0", KeyType::real_list, -1e3, 1e3, false, "three spatial components"},
      {"solver.ic_table", KeyType::text, 0, 0, false, "CSV with columns eps0,eps1,v0x,v0y,v0z,v1x,v1y,v1z"},
      {"solver.filter_strength", KeyType::real, 0.0, 1.0},
      {"solver.output_every", KeyType::integer, 0, 1e9},
      {"solver.resolutions", KeyType::int_list, 8, 1 << 22},

      {"dod.probe_x", KeyType::real, -1e6, 1e6},
      {"dod.probe_t", KeyType::real, 0.0, 1e6, true},
      {"dod.outside_center", KeyType::real, -1e6, 1e6},
      {"dod.outside_radius", KeyType::real, 0.0, 1e6, true},
      {"dod.outside_amplitude", KeyType::real, -1e3, 1e3},
      {"dod.inside_center", KeyType::real, -1e6, 1e6},
      {"dod.inside_radius", KeyType::real, 0.0, 1e6, true},
      {"dod.inside_amplitude", KeyType::real, -1e3, 1e3},
      {"dod.resolutions", KeyType::int_list, 8, 1 << 22},

      {"verify.samples", KeyType::integer, 1, 1e9},
      {"verify.seed", KeyType::integer, 0, 9.007199254740992e15},
      {"verify.metric_delta", KeyType::real, 0.0, 0.1},
      {"verify.tol_det", KeyType::real, 0.0, 1.0},
      {"verify.tol_collapse", KeyType::real, 0.0, 1.0},
      {"verify.tol_roots", KeyType::real, 0.0, 1.0},
      {"verify.tol_time_matrix", KeyType::real, 0.0, 1.0},
      {"verify.tol_drift", KeyType::real, 0.0, inf},
      {"verify.order_target", KeyType::real, 0.0, 100.0},
      {"verify.order_tol", KeyType::real, 0.0, 100.0},
      {"verify.dod_min_ratio", KeyType::real, 1.0, inf},
      {"verify.dod_inside_tol", KeyType::real, 0.0, 1.0},
      {"verify.oracle_resolutions", KeyType::int_list, 8, 1 << 22},
      {"verify.oracle_L", KeyType::real, 0.0, 1e6, true, "period of the manufactured field"},
      {"verify.oracle_mutate", KeyType::text, 0, 0, false, "B-term name, or none"},
      {"verify.oracle_mutate_factor", KeyType::real, -1e3, 1e3},

      {"output.dir", KeyType::text},
      {"output.csv", KeyType::text},
      {"output.json", KeyType::text},
  };
  return s;
}

inline const KeySpec* find_key(const std::string& name) {
  for (const auto& k : schema())
    if (name == k.name) return &k;
  return nullptr;
}

/// Raw "section.key" -> value strings, validated against the schema.
class RawConfig {
 public:
  bool has(const std::string& name) const { return values_.count(name) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  void set(const std::string& name, const std::string& value) {
    const KeySpec* spec = find_key(name);
    if (!spec) throw ConfigError("unknown config key '" + name + "'");
    check(*spec, value);
    values_[name] = value;
  }

  /// "section.key=value"
  void set_assignment(const std::string& a) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + a + "' is not of the form section.key=value");
    set(trim(a.substr(0, eq)), trim(a.substr(eq + 1)));
  }

  double real(const std::string& name, double def) const { return has(name) ? parse_real(name, at(name)) : def; }
  long long integer(const std::string& name, long long def) const {
    return has(name) ? parse_int(name, at(name)) : def;
  }
  std::string text(const std::string& name, const std::string& def) const { return has(name) ? at(name) : def; }
  std::vector<double> real_list(const std::string& name, std::vector<double> def) const {
    if (!has(name)) return def;
    std::vector<double> out;
    for (const auto& p : split(at(name))) out.push_back(parse_real(name, p));
    return out;
  }
  std::vector<int> int_list(const std::string& name, std::vector<int> def) const {
    if (!has(name)) return def;
    std::vector<int> out;
    for (const auto& p : split(at(name))) out.push_back(static_cast<int>(parse_int(name, p)));
    return out;
  }

  /// Throws naming the first absent key.
  void require(std::initializer_list<const char*> names) const {
    for (const char* n : names)
      if (!has(n)) throw ConfigError(std::string("missing required config key '") + n + "'");
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

 private:
  const std::string& at(const std::string& n) const { return values_.at(n); }

  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
  }

  static double parse_real(const std::string& name, const std::string& v) {
    double x = 0.0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(b, e, x);
    if (ec != std::errc() || p != e || !std::isfinite(x))
      throw ConfigError("config key '" + name + "': '" + v + "' is not a finite number");
    return x;
  }
  static long long parse_int(const std::string& name, const std::string& v) {
    long long x = 0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(b, e, x);
    if (ec != std::errc() || p != e) throw ConfigError("config key '" + name + "': '" + v + "' is not an integer");
    return x;
  }

  static void range(const KeySpec& k, double x) {
    const bool low_ok = k.lo_open ? x > k.lo : x >= k.lo;
    if (!low_ok || x > k.hi) {
      std::ostringstream os;
      os << "config key '" << k.name << "' = " << x << " out of range " << (k.lo_open ? "(" : "[") << k.lo << ", "
         << k.hi << "]";
      throw ConfigError(os.str());
    }
  }

  static void check(const KeySpec& k, const std::string& v) {
    switch (k.type) {
      case KeyType::real: range(k, parse_real(k.name, v)); break;
      case KeyType::integer: range(k, static_cast<double>(parse_int(k.name, v))); break;
      case KeyType::real_list:
      case KeyType::int_list: {
        const auto parts = split(v);
        if (parts.empty() || (parts.size() == 1 && parts[0].empty()))
          throw ConfigError(std::string("config key '") + k.name + "': empty list");
        for (const auto& p : parts)
          range(k, k.type == KeyType::real_list ? parse_real(k.name, p) : static_cast<double>(parse_int(k.name, p)));
        break;
      }
      case KeyType::text:
        if (v.empty()) throw ConfigError(std::string("config key '") + k.name + "': empty value");
        break;
    }
  }

  std::map<std::string, std::string> values_;
};

inline RawConfig parse_config(std::istream& in, const std::string& origin = "<config>") {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::ini_parser::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RawConfig rc;
  for (const auto& [section, body] : pt) {
    if (body.empty()) {
      if (!body.data().empty()) throw ConfigError("config key '" + section + "' is outside any section");
      const std::string pre = section + ".";
      if (std::none_of(schema().begin(), schema().end(),
                       [&](const KeySpec& k) { return std::string(k.name).rfind(pre, 0) == 0; }))
        throw ConfigError("unknown config section '" + section + "'");
      continue;
    }
    for (const auto& [key, val] : body) rc.set(section + "." + key, RawConfig::trim(val.data()));
  }
  return rc;
}

inline RawConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(f, path);
}

// ---------------------------------------------------------------------------
// typed views; defaults are a1 = a2 = 4

inline TransportModel transport_from(const RawConfig& rc) {
  TransportModel m;
  m.a1 = rc.real("transport.a1", 4.0);
  m.a2 = rc.real("transport.a2", 4.0);
  try {
    m.eta_form = eta_form_from_string(rc.text("transport.eta_form", "power-law"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key 'transport.eta_form': ") + e.what());
  }
  m.eta0 = rc.real("transport.eta0", 1.0);
  m.p_exp = rc.real("transport.p_exp", 0.75);
  return m;
}

struct VerifySettings {
  std::size_t samples = 10000;
  std::uint64_t seed = 7;
  double metric_delta = 0.05;
  double tol_det = 1e-9;
  double tol_collapse = 1e-9;
  double tol_roots = 1e-9;
  double tol_time_matrix = 1e-10;
  double tol_drift = 1e-6;
  double order_target = 4.0;
  double order_tol = 0.3;
  double dod_min_ratio = 13.0;
  double dod_inside_tol = 1e-3;
  std::vector<int> oracle_resolutions{32, 64, 128, 256};
  double oracle_L = 2.0 * std::numbers::pi;
  std::string oracle_mutate = "none";
  double oracle_mutate_factor = 1.01;
};

inline VerifySettings verify_from(const RawConfig& rc) {
  VerifySettings v;
  v.samples = static_cast<std::size_t>(rc.integer("verify.samples", static_cast<long long>(v.samples)));
  v.seed = static_cast<std::uint64_t>(rc.integer("verify.seed", static_cast<long long>(v.seed)));
  v.metric_delta = rc.real("verify.metric_delta", v.metric_delta);
  v.tol_det = rc.real("verify.tol_det", v.tol_det);
  v.tol_collapse = rc.real("verify.tol_collapse", v.tol_collapse);
  v.tol_roots = rc.real("verify.tol_roots", v.tol_roots);
  v.tol_time_matrix = rc.real("verify.tol_time_matrix", v.tol_time_matrix);
  v.tol_drift = rc.real("verify.tol_drift", v.tol_drift);
  v.order_target = rc.real("verify.order_target", v.order_target);
  v.order_tol = rc.real("verify.order_tol", v.order_tol);
  v.dod_min_ratio = rc.real("verify.dod_min_ratio", v.dod_min_ratio);
  v.dod_inside_tol = rc.real("verify.dod_inside_tol", v.dod_inside_tol);
  v.oracle_resolutions = rc.int_list("verify.oracle_resolutions", v.oracle_resolutions);
  v.oracle_L = rc.real("verify.oracle_L", v.oracle_L);
  v.oracle_mutate = rc.text("verify.oracle_mutate", v.oracle_mutate);
  v.oracle_mutate_factor = rc.real("verify.oracle_mutate_factor", v.oracle_mutate_factor);
  return v;
}

struct ScanSettings {
  double a1_min = 1.0, a1_max = 6.0;
  int a1_steps = 6;
  double a2_min = 2.0, a2_max = 12.0;
  int a2_steps = 11;
  std::vector<double> a2_list{4.0, 5.0, 6.0, 8.0, 10.0};
  double u_max = 10.0;
  int u_steps = 41;
  int theta_steps = 720;
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return v;
}

inline ScanSettings scan_from(const RawConfig& rc) {
  ScanSettings s;
  s.a1_min = rc.real("scan.a1_min", s.a1_min);
  s.a1_max = rc.real("scan.a1_max", s.a1_max);
  s.a1_steps = static_cast<int>(rc.integer("scan.a1_steps", s.a1_steps));
  s.a2_min = rc.real("scan.a2_min", s.a2_min);
  s.a2_max = rc.real("scan.a2_max", s.a2_max);
  s.a2_steps = static_cast<int>(rc.integer("scan.a2_steps", s.a2_steps));
  s.a2_list = rc.real_list("scan.a2_list", s.a2_list);
  s.u_max = rc.real("scan.u_max", s.u_max);
  s.u_steps = static_cast<int>(rc.integer("scan.u_steps", s.u_steps));
  s.theta_steps = static_cast<int>(rc.integer("scan.theta_steps", s.theta_steps));
  if (s.a1_max < s.a1_min) throw ConfigError("config key 'scan.a1_max' is below scan.a1_min");
  if (s.a2_max < s.a2_min) throw ConfigError("config key 'scan.a2_max' is below scan.a2_min");
  return s;
}

/// Rows eps0,eps1,v0x,v0y,v0z,v1x,v1y,v1z, one per cell; '#' lines and a
/// non-numeric header line are skipped.
inline std::vector<ReducedData> read_ic_table(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config key 'solver.ic_table': cannot open '" + path + "'");
  std::vector<ReducedData> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = RawConfig::trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      cell = RawConfig::trim(cell);
      double x = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (ec != std::errc() || p != cell.data() + cell.size()) {
        numeric = false;
        break;
      }
      v.push_back(x);
    }
    if (!numeric) {
      if (rows.empty() && lineno == 1) continue;
      throw ConfigError(path + ":" + std::to_string(lineno) + ": non-numeric ic table row");
    }
    if (v.size() != 8) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 8 columns");
    ReducedData r;
    r.eps0 = v[0];
    r.eps1 = v[1];
    r.v0 = {v[2], v[3], v[4]};
    r.v1 = {v[5], v[6], v[7]};
    rows.push_back(r);
  }
  return rows;
}

/// Solver settings; N, t_end and ic have no defaults.
inline SolverConfig solver_from(const RawConfig& rc, int threads, bool need_n = true) {
  if (need_n) rc.require({"solver.N", "solver.t_end", "solver.ic"});
  else rc.require({"solver.t_end", "solver.ic"});
  SolverConfig c;
  c.transport = transport_from(rc);
  c.N = static_cast<int>(rc.integer("solver.N", 256));
  c.L = rc.real("solver.L", 20.0);
  c.cfl = rc.real("solver.cfl", 0.25);
  c.t_end = rc.real("solver.t_end", 1.0);
  try {
    c.ic.kind = ic_kind_from_string(rc.text("solver.ic", "constant"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key 'solver.ic': ") + e.what());
  }
  c.ic.amplitude = rc.real("solver.ic_amplitude", 0.0);
  c.ic.width = rc.real("solver.ic_width", 0.5);
  c.ic.center = rc.real("solver.ic_center", 0.5 * c.L);
  c.ic.eps0 = rc.real("solver.ic_eps0", 1.0);
  const auto v0 = rc.real_list("solver.ic_v0", {0.0, 0.0, 0.0});
  if (v0.size() != 3) throw ConfigError("config key 'solver.ic_v0' needs three components");
  c.ic.v0 = {v0[0], v0[1], v0[2]};
  if (c.ic.kind == ICKind::custom) {
    rc.require({"solver.ic_table"});
    c.ic.table = read_ic_table(rc.text("solver.ic_table", ""));
  }
  c.filter_strength = rc.real("solver.filter_strength", 0.0);
  c.output_every = static_cast<int>(rc.integer("solver.output_every", 0));
  c.threads = threads;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline DodConfig dod_from(const RawConfig& rc, int threads) {
  rc.require({"dod.probe_x", "dod.probe_t", "dod.outside_center", "dod.inside_center"});
  DodConfig d;
  RawConfig base = rc;
  if (!base.has("solver.ic")) base.set("solver.ic", "constant");
  if (!base.has("solver.t_end")) base.set("solver.t_end", rc.values().at("dod.probe_t"));
  d.base = solver_from(base, threads, false);
  d.probe_x = rc.real("dod.probe_x", 0.0);
  d.probe_t = rc.real("dod.probe_t", 1.0);
  d.outside = {rc.real("dod.outside_center", 0.0), rc.real("dod.outside_radius", 1.0),
               rc.real("dod.outside_amplitude", 0.01)};
  d.inside = {rc.real("dod.inside_center", 0.0), rc.real("dod.inside_radius", 1.0),
              rc.real("dod.inside_amplitude", 0.01)};
  d.resolutions = rc.int_list("dod.resolutions", d.resolutions);
  return d;
}

}  // namespace vecf::cli
