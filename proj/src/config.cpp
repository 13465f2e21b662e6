#include "mdlab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace mdlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return x;
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < 0) throw ConfigError(key + ": must be non-negative");
  return static_cast<std::uint64_t>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
  const auto w = words(v);
  if (w.size() != 3) throw ConfigError(key + ": expected three numbers");
  return {to_double(key, w[0]), to_double(key, w[1]), to_double(key, w[2])};
}

std::array<int, 4> to_int4(const std::string& key, const std::string& v) {
  const auto w = words(v);
  if (w.size() != 4) throw ConfigError(key + ": expected four integers");
  std::array<int, 4> a{};
  for (int i = 0; i < 4; ++i) a[i] = static_cast<int>(to_int(key, w[i]));
  return a;
}

std::string fmt(double x) {
  std::ostringstream o;
  o << std::setprecision(17) << x;
  return o.str();
}

std::string fmt(const Vec3& v) { return fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]); }

std::string fmt(const std::array<int, 4>& a) {
  return std::to_string(a[0]) + " " + std::to_string(a[1]) + " " + std::to_string(a[2]) + " " +
         std::to_string(a[3]);
}

struct Key {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

/// Every accepted "section.key", in output order.
const std::vector<std::pair<std::string, Key>>& keys() {
  static const std::vector<std::pair<std::string, Key>> table = [] {
    std::vector<std::pair<std::string, Key>> k;
    auto num = [&](const std::string& name, auto member) {
      k.push_back({name, {[=](RunConfig& c, const std::string& v) { member(c) = to_double(name, v); },
                          [=](const RunConfig& c) { return fmt(member(const_cast<RunConfig&>(c))); }}});
    };
    auto count = [&](const std::string& name, auto member) {
      k.push_back({name,
                   {[=](RunConfig& c, const std::string& v) {
                      member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(to_count(name, v));
                    },
                    [=](const RunConfig& c) { return std::to_string(member(const_cast<RunConfig&>(c))); }}});
    };
    auto vec = [&](const std::string& name, auto member) {
      k.push_back({name, {[=](RunConfig& c, const std::string& v) { member(c) = to_vec3(name, v); },
                          [=](const RunConfig& c) { return fmt(member(const_cast<RunConfig&>(c))); }}});
    };

    k.push_back({"grid.n", {[](RunConfig& c, const std::string& v) { c.grid.n = static_cast<int>(to_int("grid.n", v)); },
                            [](const RunConfig& c) { return std::to_string(c.grid.n); }}});
    num("grid.L", [](RunConfig& c) -> double& { return c.grid.L; });
    num("grid.mass", [](RunConfig& c) -> double& { return c.grid.mass; });

    num("data.amplitude", [](RunConfig& c) -> double& { return c.data.amplitude; });
    num("data.width", [](RunConfig& c) -> double& { return c.data.width; });
    vec("data.center", [](RunConfig& c) -> Vec3& { return c.data.center; });
    vec("data.momentum", [](RunConfig& c) -> Vec3& { return c.data.momentum; });
    k.push_back({"data.branch",
                 {[](RunConfig& c, const std::string& v) { c.data.branch = static_cast<int>(to_int("data.branch", v)); },
                  [](const RunConfig& c) { return std::to_string(c.data.branch); }}});
    k.push_back({"data.polarization", {[](RunConfig& c, const std::string& v) { c.data.polarization = v; },
                                       [](const RunConfig& c) { return c.data.polarization; }}});
    num("data.field_amplitude", [](RunConfig& c) -> double& { return c.data.field_amplitude; });
    num("data.field_width", [](RunConfig& c) -> double& { return c.data.field_width; });
    vec("data.field_wavevector", [](RunConfig& c) -> Vec3& { return c.data.field_wavevector; });

    k.push_back({"integrator.dt",
                 {[](RunConfig& c, const std::string& v) {
                    c.integrator.dt = (v == "auto") ? 0.0 : to_double("integrator.dt", v);
                  },
                  [](const RunConfig& c) { return c.integrator.dt == 0.0 ? std::string("auto") : fmt(c.integrator.dt); }}});
    num("integrator.T", [](RunConfig& c) -> double& { return c.T; });
    k.push_back({"integrator.scheme",
                 {[](RunConfig& c, const std::string& v) {
                    if (v == "if_rk4") c.integrator.scheme = Scheme::if_rk4;
                    else if (v == "strang2") c.integrator.scheme = Scheme::strang2;
                    else throw ConfigError("integrator.scheme: expected if_rk4 or strang2, got '" + v + "'");
                  },
                  [](const RunConfig& c) {
                    return std::string(c.integrator.scheme == Scheme::if_rk4 ? "if_rk4" : "strang2");
                  }}});
    k.push_back({"integrator.coupling",
                 {[](RunConfig& c, const std::string& v) {
                    if (v == "full") c.integrator.coupling = Coupling::full;
                    else if (v == "external") c.integrator.coupling = Coupling::external_field;
                    else if (v == "off") c.integrator.coupling = Coupling::off;
                    else throw ConfigError("integrator.coupling: expected full, external or off, got '" + v + "'");
                  },
                  [](const RunConfig& c) {
                    switch (c.integrator.coupling) {
                      case Coupling::full: return std::string("full");
                      case Coupling::external_field: return std::string("external");
                      case Coupling::off: break;
                    }
                    return std::string("off");
                  }}});
    k.push_back({"integrator.dealias",
                 {[](RunConfig& c, const std::string& v) { c.integrator.dealias = to_bool("integrator.dealias", v); },
                  [](const RunConfig& c) { return std::string(c.integrator.dealias ? "true" : "false"); }}});

    count("observers.diagnostic_stride", [](RunConfig& c) -> std::uint64_t& { return c.diagnostic_stride; });
    count("observers.checkpoint_period", [](RunConfig& c) -> std::uint64_t& { return c.checkpoint_period; });

    num("constants.delta", [](RunConfig& c) -> double& { return c.constants.delta; });
    num("constants.zeta", [](RunConfig& c) -> double& { return c.constants.zeta; });
    num("constants.delta_bar", [](RunConfig& c) -> double& { return c.constants.delta_bar; });
    k.push_back({"constants.N", {[](RunConfig& c, const std::string& v) { c.constants.N = to_int4("constants.N", v); },
                                 [](const RunConfig& c) { return fmt(c.constants.N); }}});
    k.push_back({"constants.H", {[](RunConfig& c, const std::string& v) { c.constants.H = to_int4("constants.H", v); },
                                 [](const RunConfig& c) { return fmt(c.constants.H); }}});

    count("run.seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; });
    k.push_back({"run.output", {[](RunConfig& c, const std::string& v) { c.output = v; },
                                [](const RunConfig& c) { return c.output.string(); }}});
    k.push_back({"run.allow_past_horizon",
                 {[](RunConfig& c, const std::string& v) { c.allow_past_horizon = to_bool("run.allow_past_horizon", v); },
                  [](const RunConfig& c) { return std::string(c.allow_past_horizon ? "true" : "false"); }}});

    count("scan.samples", [](RunConfig& c) -> std::uint64_t& { return c.scan.samples; });
    num("scan.min_radius", [](RunConfig& c) -> double& { return c.scan.min_radius; });
    num("scan.max_radius", [](RunConfig& c) -> double& { return c.scan.max_radius; });
    num("scan.compact_radius", [](RunConfig& c) -> double& { return c.scan.compact_radius; });
    count("scan.approximation_samples", [](RunConfig& c) -> std::uint64_t& { return c.scan.approximation_samples; });
    num("scan.approximation_xi_max", [](RunConfig& c) -> double& { return c.scan.approximation_xi_max; });
    num("scan.approximation_eta_max", [](RunConfig& c) -> double& { return c.scan.approximation_eta_max; });

    num("scattering.t1", [](RunConfig& c) -> double& { return c.scattering.t1; });
    num("scattering.t2", [](RunConfig& c) -> double& { return c.scattering.t2; });
    num("scattering.maxwell_early_start", [](RunConfig& c) -> double& { return c.scattering.maxwell_early_start; });
    num("scattering.maxwell_early_end", [](RunConfig& c) -> double& { return c.scattering.maxwell_early_end; });
    num("scattering.maxwell_late_start", [](RunConfig& c) -> double& { return c.scattering.maxwell_late_start; });
    num("scattering.maxwell_late_end", [](RunConfig& c) -> double& { return c.scattering.maxwell_late_end; });
    k.push_back({"scattering.k_lo",
                 {[](RunConfig& c, const std::string& v) { c.scattering.k_lo = static_cast<int>(to_int("scattering.k_lo", v)); },
                  [](const RunConfig& c) { return std::to_string(c.scattering.k_lo); }}});
    k.push_back({"scattering.k_hi",
                 {[](RunConfig& c, const std::string& v) { c.scattering.k_hi = static_cast<int>(to_int("scattering.k_hi", v)); },
                  [](const RunConfig& c) { return std::to_string(c.scattering.k_hi); }}});
    count("scattering.top_modes", [](RunConfig& c) -> std::size_t& { return c.scattering.top_modes; });

    count("identity.samples", [](RunConfig& c) -> std::uint64_t& { return c.identity.samples; });
    k.push_back({"identity.n",
                 {[](RunConfig& c, const std::string& v) { c.identity.n = static_cast<int>(to_int("identity.n", v)); },
                  [](const RunConfig& c) { return std::to_string(c.identity.n); }}});
    num("identity.L", [](RunConfig& c) -> double& { return c.identity.L; });
    num("identity.width", [](RunConfig& c) -> double& { return c.identity.width; });
    num("identity.t_wave", [](RunConfig& c) -> double& { return c.identity.t_wave; });
    num("identity.amplitude", [](RunConfig& c) -> double& { return c.identity.amplitude; });
    count("identity.steps", [](RunConfig& c) -> std::uint64_t& { return c.identity.steps; });

    num("strict.charge_drift", [](RunConfig& c) -> double& { return c.strict.charge_drift; });
    num("strict.lorenz", [](RunConfig& c) -> double& { return c.strict.lorenz; });
    num("strict.algebra", [](RunConfig& c) -> double& { return c.strict.algebra; });
    num("strict.rotation", [](RunConfig& c) -> double& { return c.strict.rotation; });
    num("strict.radial", [](RunConfig& c) -> double& { return c.strict.radial; });
    num("strict.boost", [](RunConfig& c) -> double& { return c.strict.boost; });
    num("strict.weight", [](RunConfig& c) -> double& { return c.strict.weight; });
    num("strict.approximation", [](RunConfig& c) -> double& { return c.strict.approximation; });
    return k;
  }();
  return table;
}

const Key* find_key(const std::string& name) {
  for (const auto& [k, v] : keys()) {
    if (k == name) return &v;
  }
  return nullptr;
}

bool known_section(const std::string& s) {
  const std::string prefix = s + ".";
  for (const auto& kv : keys()) {
    if (kv.first.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::simulate: return "simulate";
    case Mode::resonance_scan: return "resonance-scan";
    case Mode::scattering_diagnose: return "scattering-diagnose";
    case Mode::identity_check: return "identity-check";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::simulate, Mode::resonance_scan, Mode::scattering_diagnose, Mode::identity_check}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown mode '" + s + "'");
}

double RunConfig::horizon_time() const {
  switch (mode) {
    case Mode::simulate: return T;
    case Mode::scattering_diagnose:
      return std::max({scattering.t2, scattering.maxwell_early_end, scattering.maxwell_late_end});
    default: return 0.0;
  }
}

double RunConfig::horizon() const {
  double r0 = norm(data.center) + 3.0 * data.width;
  if (data.field_amplitude != 0.0) r0 = std::max(r0, 3.0 * data.field_width);
  return 0.5 * grid.L - r0;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); };
  if (c.grid.n < 4 || c.grid.n % 2 != 0) fail("grid.n", "must be an even integer >= 4");
  if (!(c.grid.L > 0.0)) fail("grid.L", "must be positive");
  if (!(c.grid.mass > 0.0)) fail("grid.mass", "must be positive");
  if (c.data.amplitude < 0.0) fail("data.amplitude", "must be non-negative");
  if (!(c.data.width > 0.0)) fail("data.width", "must be positive");
  if (c.data.branch < -1 || c.data.branch > 1) fail("data.branch", "must be -1, 0 or 1");
  if (c.data.polarization != "up" && c.data.polarization != "random" && words(c.data.polarization).size() != 4) {
    fail("data.polarization", "expected up, random or four numbers");
  }
  if (!(c.data.field_width > 0.0)) fail("data.field_width", "must be positive");
  if (c.integrator.dt < 0.0) fail("integrator.dt", "must be positive or auto");
  if (c.T < 0.0) fail("integrator.T", "must be non-negative");
  if (c.diagnostic_stride == 0) fail("observers.diagnostic_stride", "must be at least 1");
  if (c.constants.delta < 0.0) fail("constants.delta", "must be non-negative");
  if (c.constants.zeta < 0.0) fail("constants.zeta", "must be non-negative");
  if (c.constants.delta_bar < 0.0) fail("constants.delta_bar", "must be non-negative");
  if (c.scan.samples == 0) fail("scan.samples", "must be at least 1");
  if (!(c.scan.min_radius > 0.0 && c.scan.min_radius < c.scan.max_radius)) {
    fail("scan.min_radius", "must satisfy 0 < min_radius < max_radius");
  }
  if (!(c.scan.compact_radius > 0.0)) fail("scan.compact_radius", "must be positive");
  if (c.scan.approximation_samples == 0) fail("scan.approximation_samples", "must be at least 1");
  const auto& s = c.scattering;
  if (!(0.0 <= s.t1 && s.t1 <= s.t2)) fail("scattering.t1", "must satisfy 0 <= t1 <= t2");
  if (!(0.0 <= s.maxwell_early_start && s.maxwell_early_start <= s.maxwell_early_end)) {
    fail("scattering.maxwell_early_start", "must not exceed maxwell_early_end");
  }
  if (!(0.0 <= s.maxwell_late_start && s.maxwell_late_start <= s.maxwell_late_end)) {
    fail("scattering.maxwell_late_start", "must not exceed maxwell_late_end");
  }
  if (s.k_lo > s.k_hi) fail("scattering.k_lo", "must not exceed k_hi");
  if (c.identity.samples == 0) fail("identity.samples", "must be at least 1");
  if (c.identity.n < 4 || c.identity.n % 2 != 0) fail("identity.n", "must be an even integer >= 4");
  if (!(c.identity.L > 0.0)) fail("identity.L", "must be positive");
  if (!(c.identity.width > 0.0)) fail("identity.width", "must be positive");
  if (c.identity.t_wave < 0.0) fail("identity.t_wave", "must be non-negative");
  if (!c.allow_past_horizon && c.horizon_time() > c.horizon()) {
    std::ostringstream o;
    o << "simulated time " << c.horizon_time() << " exceeds the horizon L/2 - r0 = " << c.horizon()
      << " (set run.allow_past_horizon = true to override)";
    fail(c.mode == Mode::scattering_diagnose ? "scattering.t2" : "integrator.T", o.str());
  }
}

RunConfig parse_config(const std::string& text, Mode mode) {
  RunConfig c;
  c.mode = mode;
  std::istringstream in(text);
  std::string section;
  std::set<std::string> seen;
  std::map<std::string, int> line_of;
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = raw;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", lineno);
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) throw ConfigError("unknown section [" + section + "]", lineno);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
    if (section.empty()) throw ConfigError("entry outside of a section", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string name = section + "." + key;
    const Key* k = find_key(name);
    if (!k) throw ConfigError("unknown key '" + key + "' in [" + section + "]", lineno);
    if (!seen.insert(name).second) throw ConfigError("duplicate key '" + name + "'", lineno);
    if (value.empty()) throw ConfigError(name + ": missing value", lineno);
    try {
      k->set(c, value);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), lineno);
    }
    line_of[name] = lineno;
  }
  // zeta and delta_bar follow delta unless given explicitly.
  if (seen.count("constants.delta")) {
    const PaperConstants d = PaperConstants::with_delta(c.constants.delta);
    if (!seen.count("constants.zeta")) c.constants.zeta = d.zeta;
    if (!seen.count("constants.delta_bar")) c.constants.delta_bar = d.delta_bar;
  }
  try {
    validate(c);
  } catch (const ConfigError& e) {
    // Attach the line of the offending field when it was set explicitly.
    const std::string msg = e.what();
    const std::string field = msg.substr(0, msg.find(':'));
    const auto it = line_of.find(field);
    throw ConfigError(msg, it != line_of.end() ? it->second : 0);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path, Mode mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str(), mode);
}

std::string to_text(const RunConfig& c) {
  std::ostringstream o;
  std::string section;
  for (const auto& [name, key] : keys()) {
    const auto dot = name.find('.');
    const std::string s = name.substr(0, dot);
    if (s != section) {
      if (!section.empty()) o << "\n";
      o << "[" << s << "]\n";
      section = s;
    }
    o << name.substr(dot + 1) << " = " << key.get(c) << "\n";
  }
  return o.str();
}

DataRecipe make_recipe(const RunConfig& c) {
  DataRecipe r;
  auto& sp = r.spinor;
  sp.amplitude = c.data.amplitude;
  sp.width = c.data.width;
  sp.center = c.data.center;
  sp.momentum = c.data.momentum;
  sp.branch = c.data.branch;
  if (c.data.polarization == "random") {
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> g;
    for (auto& v : sp.polarization) v = cplx(g(rng), g(rng));
  } else if (c.data.polarization == "up") {
    sp.polarization = {1.0, 0.0, 0.0, 0.0};
  } else {
    const auto w = words(c.data.polarization);
    for (int i = 0; i < 4; ++i) sp.polarization[i] = to_double("data.polarization", w[i]);
  }
  if (c.data.field_amplitude != 0.0) {
    for (int j = 1; j <= 3; ++j) {
      r.a[j].amplitude = c.data.field_amplitude;
      r.a[j].width = c.data.field_width;
      r.a[j].wavevector = c.data.field_wavevector;
    }
  }
  return r;
}

}  // namespace mdlab
