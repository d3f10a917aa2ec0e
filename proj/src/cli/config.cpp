#include "gradsense/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gradsense/units.hpp"

namespace gradsense::cli {

ConfigError::ConfigError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message : message),
      line_(line),
      column_(column) {}

namespace {

struct Unit {
  const char* name;
  Dimension dim;
  double factor;
};

// kHz_paper and MHz_paper are aliases for angular krad/s and Mrad/s
const Unit kUnits[] = {
    {"krad_s", Dimension::frequency, 1.0},
    {"kHz_paper", Dimension::frequency, 1.0},
    {"MHz_paper", Dimension::frequency, 1e3},
    {"rad_s", Dimension::frequency, 1e-3},
    {"Hz_si", Dimension::frequency, 2.0 * units::pi * 1e-3},
    {"kHz_si", Dimension::frequency, 2.0 * units::pi},
    {"MHz_si", Dimension::frequency, 2.0 * units::pi * 1e3},
    {"ms", Dimension::time, 1.0},
    {"us", Dimension::time, 1e-3},
    {"s", Dimension::time, 1e3},
    {"yN", Dimension::force, 1e-24},
    {"zN", Dimension::force, 1e-21},
    {"N", Dimension::force, 1.0},
    {"nm", Dimension::length, 1e-9},
    {"um", Dimension::length, 1e-6},
    {"m", Dimension::length, 1.0},
    {"T", Dimension::field, 1.0},
    {"mT", Dimension::field, 1e-3},
    {"uT", Dimension::field, 1e-6},
    {"nT", Dimension::field, 1e-9},
    {"pT", Dimension::field, 1e-12},
    {"T_per_um", Dimension::gradient, units::tesla_per_micrometre},
    {"T_per_m", Dimension::gradient, 1.0},
    {"rad", Dimension::angle, 1.0},
    {"pi", Dimension::angle, units::pi},
    {"deg", Dimension::angle, units::pi / 180.0},
    {"kg", Dimension::mass, 1.0},
    {"amu", Dimension::mass, units::atomic_mass_unit},
    {"C", Dimension::charge, 1.0},
    {"e", Dimension::charge, units::elementary_charge},
};

const char* dimension_name(Dimension d) {
  switch (d) {
    case Dimension::none: return "dimensionless";
    case Dimension::integer: return "integer";
    case Dimension::text: return "text";
    case Dimension::frequency: return "frequency";
    case Dimension::time: return "time";
    case Dimension::force: return "force";
    case Dimension::length: return "length";
    case Dimension::field: return "magnetic field";
    case Dimension::gradient: return "field gradient";
    case Dimension::angle: return "angle";
    case Dimension::mass: return "mass";
    case Dimension::charge: return "charge";
  }
  return "?";
}

std::string units_for(Dimension d) {
  std::string s;
  for (const auto& u : kUnits) {
    if (u.dim != d) continue;
    if (!s.empty()) s += ", ";
    s += u.name;
  }
  return s;
}

const std::map<std::string, std::map<std::string, Dimension>>& key_table() {
  static const std::map<std::string, std::map<std::string, Dimension>> table = {
      {"",
       {{"scenario", Dimension::text},
        {"protocol", Dimension::text},
        {"method", Dimension::text},
        {"estimand", Dimension::text},
        {"mode", Dimension::text}}},
      {"probe",
       {{"ions", Dimension::integer},
        {"omega0", Dimension::frequency},
        {"gamma", Dimension::frequency},
        {"delta", Dimension::frequency},
        {"kappa", Dimension::frequency},
        {"g", Dimension::frequency},
        {"phi", Dimension::angle},
        {"x0", Dimension::length},
        {"nmax", Dimension::integer},
        {"t_final", Dimension::time},
        {"tolerance", Dimension::none},
        {"record_points", Dimension::integer},
        {"k_c", Dimension::integer},
        {"k_r", Dimension::integer},
        {"n_experiments", Dimension::integer}}},
      {"force", {{"F1", Dimension::force}, {"F2", Dimension::force}, {"F3", Dimension::force}, {"xi", Dimension::angle}}},
      {"magnetic",
       {{"B0", Dimension::field},
        {"Bprime", Dimension::gradient},
        {"z1", Dimension::length},
        {"z2", Dimension::length},
        {"lande_g", Dimension::none}}},
      {"trap",
       {{"mass", Dimension::mass},
        {"charge", Dimension::charge},
        {"omega_x", Dimension::frequency},
        {"dz", Dimension::length}}},
      {"sweep",
       {{"parameter", Dimension::text},
        {"from", Dimension::text},
        {"to", Dimension::text},
        {"points", Dimension::integer},
        {"values", Dimension::text},
        {"spacing", Dimension::text},
        {"endpoint", Dimension::text},
        {"series", Dimension::text},
        {"series_values", Dimension::text}}},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// column offset of the first non-blank character
int lead(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  return b == std::string::npos ? 0 : static_cast<int>(b);
}

const std::vector<std::string>& sweepable_names() {
  static const std::vector<std::string> names = {"omega0", "gamma", "delta", "kappa", "g",      "phi",     "x0",
                                                 "F1",     "F2",    "F3",    "xi",    "B0",     "Bprime",  "z1",
                                                 "z2",     "lande_g", "t_final", "zeta_sq"};
  return names;
}

Dimension parameter_dimension(const std::string& name) {
  if (name == "zeta_sq") return Dimension::none;
  for (const auto& [section, keys] : key_table()) {
    if (section == "sweep" || section == "trap") continue;
    auto it = keys.find(name);
    if (it != keys.end()) return it->second;
  }
  throw ConfigError("unknown parameter '" + name + "'");
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double parse_quantity(const std::string& text, Dimension dim) {
  const int off = lead(text);
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty value", 0, off + 1);
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc()) throw ConfigError("expected a number, found '" + s + "'", 0, off + 1);
  const std::string unit = trim(std::string(ptr, end));
  const int unit_col = off + static_cast<int>(ptr - begin) + 1;
  if (dim == Dimension::none || dim == Dimension::integer) {
    if (!unit.empty()) {
      throw ConfigError("unexpected unit '" + unit + "' on a dimensionless value", 0, unit_col);
    }
    if (dim == Dimension::integer && v != std::floor(v)) throw ConfigError("expected an integer", 0, off + 1);
    return v;
  }
  if (unit.empty()) {
    throw ConfigError(std::string("missing unit suffix on ") + dimension_name(dim) + " value (one of " +
                          units_for(dim) + ")",
                      0, unit_col);
  }
  for (const auto& u : kUnits) {
    if (unit == u.name) {
      if (u.dim != dim) {
        throw ConfigError("unit '" + unit + "' is a " + dimension_name(u.dim) + ", expected " + dimension_name(dim),
                          0, unit_col);
      }
      return v * u.factor;
    }
  }
  throw ConfigError("unknown unit '" + unit + "' (expected one of " + units_for(dim) + ")", 0, unit_col);
}

std::vector<double> parse_quantity_list(const std::string& text, Dimension dim) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      out.push_back(parse_quantity(item, dim));
    } catch (const ConfigError& e) {
      // re-anchor the column to the whole list
      throw ConfigError(e.what(), 0, static_cast<int>(start) + e.column());
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Dimension key_dimension(const std::string& section, const std::string& key) {
  const auto& t = key_table();
  auto s = t.find(section);
  if (s == t.end()) throw ConfigError("unknown section [" + section + "]");
  auto k = s->second.find(key);
  if (k == s->second.end()) {
    throw ConfigError("unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"));
  }
  return k->second;
}

protocols::Perturbation ScenarioSpec::perturbation() const {
  if (force) return *force;
  if (magnetic) return *magnetic;
  throw ConfigError("scenario has neither a [force] nor a [magnetic] section");
}

void ScenarioSpec::validate() const {
  if (force && magnetic) throw ConfigError("[force] and [magnetic] are mutually exclusive");
  if (!force && !magnetic) throw ConfigError("scenario needs a [force] or a [magnetic] section");
  try {
    probe.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid probe: ") + e.what());
  }
  if (force && static_cast<int>(force->force.size()) != probe.num_ions) {
    throw ConfigError("[force] needs F1..F" + std::to_string(probe.num_ions));
  }
  if (magnetic && probe.num_ions != 2) throw ConfigError("[magnetic] scenarios use two ions");
  if (protocol == Protocol::oscillator && (!force || probe.num_ions != 2)) {
    throw ConfigError("oscillator protocol needs two ions and a [force] section");
  }
  if (magnetic && estimand != "gradient") throw ConfigError("magnetic scenarios estimate 'gradient'");
  if (force && estimand != "force" && estimand != "phase") throw ConfigError("estimand must be 'force' or 'phase'");
  if (mode != "com" && mode != "rock") throw ConfigError("mode must be 'com' or 'rock'");
  for (const auto* axis : {&sweep, &series}) {
    if (!*axis) continue;
    if (!is_sweepable((*axis)->parameter)) {
      throw ConfigError("sweep axis names unknown parameter '" + (*axis)->parameter + "'");
    }
  }
  if (sweep && sweep->values.size() < 2) throw ConfigError("sweep needs at least 2 points");
  if (series && series->values.empty()) throw ConfigError("series needs at least one value");
}

bool is_sweepable(const std::string& name) {
  const auto& n = sweepable_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

void set_parameter(ScenarioSpec& spec, const std::string& name, double value) {
  auto& p = spec.probe;
  auto need_force = [&]() -> models::ForceField& {
    if (!spec.force) throw ConfigError("parameter '" + name + "' needs a [force] section");
    return *spec.force;
  };
  auto need_magnetic = [&]() -> models::MagneticField& {
    if (!spec.magnetic) throw ConfigError("parameter '" + name + "' needs a [magnetic] section");
    return *spec.magnetic;
  };
  if (name == "omega0") p.omega0 = value;
  else if (name == "gamma") p.gamma = value;
  else if (name == "delta") p.delta = value;
  else if (name == "kappa") p.kappa = value;
  else if (name == "g") {
    p.g.assign(static_cast<std::size_t>(p.num_ions), value);
    if (p.num_ions == 3) p.g[1] = std::sqrt(2.0) * value;
  } else if (name == "phi") p.phi.assign(static_cast<std::size_t>(p.num_ions), value);
  else if (name == "x0") p.x0 = value;
  else if (name == "F1" || name == "F2" || name == "F3") {
    auto& f = need_force();
    const auto j = static_cast<std::size_t>(name[1] - '1');
    if (j >= f.force.size()) throw ConfigError("parameter '" + name + "' exceeds the number of ions");
    f.force[j] = value;
  } else if (name == "xi") need_force().xi = value;
  else if (name == "B0") need_magnetic().b0 = value;
  else if (name == "Bprime") need_magnetic().b_prime = value;
  else if (name == "z1" || name == "z2") need_magnetic().z_positions.at(static_cast<std::size_t>(name[1] - '1')) = value;
  else if (name == "lande_g") need_magnetic().lande_g = value;
  else if (name == "t_final") spec.t_final = value;
  else if (name == "zeta_sq") {
    // zeta_q^2 = 4 g^2 / (Omega omega_q) for the readout mode
    const auto modes = models::collective_transform(p);
    const double w = spec.mode == "com" ? modes.omega_c() : modes.omega_r();
    if (!(value >= 0.0)) throw ConfigError("zeta_sq must be nonnegative");
    set_parameter(spec, "g", std::sqrt(value * p.omega0 * w) / 2.0);
  } else {
    throw ConfigError("unknown parameter '" + name + "'");
  }
}

namespace {

struct Deferred {
  std::string raw;
  int line = 0;
  int column = 0;
};

[[noreturn]] void rethrow_at(const ConfigError& e, int line, int column_base) {
  // line-less errors carry no position prefix in their message
  throw ConfigError(e.what(), line, column_base + std::max(e.column(), 1) - 1);
}

std::vector<double> axis_values(const std::map<std::string, Deferred>& s, const std::string& parameter,
                                int points) {
  const Dimension dim = parameter_dimension(parameter);
  auto value_of = [&](const std::string& key) {
    const auto& d = s.at(key);
    try {
      return parse_quantity(d.raw, dim);
    } catch (const ConfigError& e) {
      rethrow_at(e, d.line, d.column);
    }
  };
  if (s.count("values")) {
    const auto& d = s.at("values");
    try {
      return parse_quantity_list(d.raw, dim);
    } catch (const ConfigError& e) {
      rethrow_at(e, d.line, d.column);
    }
  }
  if (!s.count("from") || !s.count("to")) throw ConfigError("[sweep] needs 'values' or 'from'/'to'/'points'");
  const double a = value_of("from");
  const double b = value_of("to");
  if (points < 2) throw ConfigError("sweep needs at least 2 points");
  if (a == b) throw ConfigError("empty sweep range", s.at("to").line, s.at("to").column);
  const bool endpoint = !s.count("endpoint") || trim(s.at("endpoint").raw) != "false";
  const bool logspace = s.count("spacing") && trim(s.at("spacing").raw) == "log";
  if (logspace && !(a > 0.0 && b > 0.0)) throw ConfigError("log spacing needs positive bounds");
  std::vector<double> v;
  const int den = endpoint ? points - 1 : points;
  for (int k = 0; k < points; ++k) {
    const double u = static_cast<double>(k) / den;
    v.push_back(logspace ? a * std::pow(b / a, u) : a + (b - a) * u);
  }
  return v;
}

}  // namespace

ScenarioSpec parse_config(const std::string& text, const std::string& source) {
  ScenarioSpec spec;
  std::map<std::string, std::map<std::string, Deferred>> entries;
  std::vector<std::pair<std::string, std::string>> order;
  std::istringstream is(text);
  std::string raw_line;
  std::string section;
  int line_no = 0;
  while (std::getline(is, raw_line)) {
    ++line_no;
    std::string line = raw_line;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const std::string t = trim(line);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("unterminated section header", line_no, lead(line) + 1);
      section = trim(t.substr(1, t.size() - 2));
      if (!key_table().count(section) || section.empty()) {
        throw ConfigError("unknown section [" + section + "]", line_no, lead(line) + 1);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no, lead(line) + 1);
    const std::string key = trim(line.substr(0, eq));
    try {
      key_dimension(section, key);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), line_no, lead(line) + 1);
    }
    if (entries[section].count(key)) {
      throw ConfigError("duplicate key '" + key + "'", line_no, lead(line) + 1);
    }
    entries[section][key] = {line.substr(eq + 1), line_no, static_cast<int>(eq) + 2};
    order.emplace_back(section, key);
  }

  auto has = [&](const std::string& s, const std::string& k) { return entries.count(s) && entries[s].count(k); };
  auto text_of = [&](const std::string& s, const std::string& k) { return trim(entries[s][k].raw); };
  auto number = [&](const std::string& s, const std::string& k) {
    const Deferred& d = entries[s][k];
    try {
      return parse_quantity(d.raw, key_dimension(s, k));
    } catch (const ConfigError& e) {
      rethrow_at(e, d.line, d.column);
    }
  };
  auto list = [&](const std::string& s, const std::string& k) {
    const Deferred& d = entries[s][k];
    try {
      return parse_quantity_list(d.raw, key_dimension(s, k));
    } catch (const ConfigError& e) {
      rethrow_at(e, d.line, d.column);
    }
  };

  if (has("", "scenario")) spec.name = text_of("", "scenario");
  if (has("", "protocol")) {
    const auto v = text_of("", "protocol");
    if (v == "adiabatic") spec.protocol = Protocol::adiabatic;
    else if (v == "oscillator") spec.protocol = Protocol::oscillator;
    else throw ConfigError("protocol must be 'adiabatic' or 'oscillator'", entries[""]["protocol"].line, 1);
  }
  if (has("", "method")) {
    const auto v = text_of("", "method");
    if (v == "analytic") spec.method = Method::analytic;
    else if (v == "numeric") spec.method = Method::numeric;
    else throw ConfigError("method must be 'analytic' or 'numeric'", entries[""]["method"].line, 1);
  }
  if (has("", "estimand")) spec.estimand = text_of("", "estimand");
  else if (entries.count("magnetic")) spec.estimand = "gradient";
  if (has("", "mode")) spec.mode = text_of("", "mode");

  auto& p = spec.probe;
  p.num_ions = has("probe", "ions") ? static_cast<int>(number("probe", "ions")) : 2;
  for (const char* k : {"omega0", "gamma", "delta"}) {
    if (!has("probe", k)) throw ConfigError(std::string("[probe] is missing '") + k + "'");
  }
  p.omega0 = number("probe", "omega0");
  p.gamma = number("probe", "gamma");
  p.delta = number("probe", "delta");
  if (has("probe", "x0")) p.x0 = number("probe", "x0");
  if (has("probe", "nmax")) p.n_max = static_cast<int>(number("probe", "nmax"));
  const auto n = static_cast<std::size_t>(p.num_ions);
  if (!has("probe", "g")) throw ConfigError("[probe] is missing 'g'");
  p.g = list("probe", "g");
  if (p.g.size() == 1) {
    const double g = p.g[0];
    p.g.assign(n, g);
    if (p.num_ions == 3) p.g[1] = std::sqrt(2.0) * g;
  }
  if (p.g.size() != n) throw ConfigError("g needs one value or one per ion", entries["probe"]["g"].line, 1);
  p.phi = has("probe", "phi") ? list("probe", "phi") : std::vector<double>{0.0};
  if (p.phi.size() == 1) p.phi.assign(n, p.phi[0]);
  if (p.phi.size() != n) throw ConfigError("phi needs one value or one per ion", entries["probe"]["phi"].line, 1);
  if (has("probe", "t_final")) spec.t_final = number("probe", "t_final");
  if (has("probe", "tolerance")) spec.tolerance = number("probe", "tolerance");
  if (has("probe", "record_points")) spec.record_points = static_cast<int>(number("probe", "record_points"));
  if (has("probe", "k_c")) spec.k_c = static_cast<int>(number("probe", "k_c"));
  if (has("probe", "k_r")) spec.k_r = static_cast<int>(number("probe", "k_r"));
  if (has("probe", "n_experiments")) spec.n_experiments = static_cast<long>(number("probe", "n_experiments"));

  if (entries.count("trap")) {
    models::TrapGeometry trap;
    for (const char* k : {"mass", "charge", "omega_x", "dz"}) {
      if (!has("trap", k)) throw ConfigError(std::string("[trap] is missing '") + k + "'");
    }
    trap.mass = number("trap", "mass");
    trap.charge = number("trap", "charge");
    trap.omega_x = units::to_rad_per_s(number("trap", "omega_x"));
    trap.dz = number("trap", "dz");
    spec.trap = trap;
  }
  if (has("probe", "kappa")) {
    p.kappa = number("probe", "kappa");
  } else if (spec.trap) {
    p.kappa = models::hopping_from_trap(*spec.trap);
  } else {
    throw ConfigError("[probe] needs 'kappa' (or a [trap] section)");
  }

  if (entries.count("force")) {
    models::ForceField f;
    for (int j = 1; j <= p.num_ions; ++j) {
      const std::string k = "F" + std::to_string(j);
      if (!has("force", k)) throw ConfigError("[force] is missing '" + k + "'");
      f.force.push_back(number("force", k));
    }
    if (p.num_ions == 2 && has("force", "F3")) {
      throw ConfigError("F3 given for a two-ion probe", entries["force"]["F3"].line, 1);
    }
    f.xi = has("force", "xi") ? number("force", "xi") : 0.0;
    spec.force = f;
  }
  if (entries.count("magnetic")) {
    models::MagneticField b;
    b.b0 = has("magnetic", "B0") ? number("magnetic", "B0") : 0.0;
    if (!has("magnetic", "Bprime")) throw ConfigError("[magnetic] is missing 'Bprime'");
    b.b_prime = number("magnetic", "Bprime");
    if (!has("magnetic", "z1") || !has("magnetic", "z2")) throw ConfigError("[magnetic] needs z1 and z2");
    b.z_positions = {number("magnetic", "z1"), number("magnetic", "z2")};
    if (has("magnetic", "lande_g")) b.lande_g = number("magnetic", "lande_g");
    spec.magnetic = b;
  }

  if (entries.count("sweep")) {
    auto& s = entries["sweep"];
    if (s.count("parameter")) {
      const auto& d = s["parameter"];
      const std::string name = trim(d.raw);
      if (!is_sweepable(name)) throw ConfigError("sweep axis names unknown parameter '" + name + "'", d.line, d.column);
      const int points = s.count("points") ? static_cast<int>(number("sweep", "points")) : 0;
      if (s.count("points") && points < 2) {
        throw ConfigError("sweep needs at least 2 points", s["points"].line, s["points"].column);
      }
      spec.sweep = SweepAxis{name, axis_values(s, name, points)};
    }
    if (s.count("series")) {
      const auto& d = s["series"];
      const std::string name = trim(d.raw);
      if (!is_sweepable(name)) throw ConfigError("series names unknown parameter '" + name + "'", d.line, d.column);
      if (!s.count("series_values")) throw ConfigError("[sweep] series needs series_values", d.line, d.column);
      const auto& v = s["series_values"];
      try {
        spec.series = SweepAxis{name, parse_quantity_list(v.raw, parameter_dimension(name))};
      } catch (const ConfigError& e) {
        rethrow_at(e, v.line, v.column);
      }
    }
  }

  for (const auto& [s, k] : order) {
    std::string line = (s.empty() ? "" : s + ".") + k + " = " + trim(entries[s][k].raw);
    const Dimension dim = key_dimension(s, k);
    if (dim != Dimension::text) {
      line += " ->";
      for (double v : list(s, k)) line += " " + format_value(v);
    }
    spec.audit.push_back(line);
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what(), e.line(), e.column());
  }
  return spec;
}

ScenarioSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void apply_override(ScenarioSpec& spec, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  std::string key = trim(assignment.substr(0, eq));
  const std::string value = assignment.substr(eq + 1);
  const auto dot = key.find('.');
  std::string section;
  if (dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  if (key == "nmax") {
    spec.probe.n_max = static_cast<int>(parse_quantity(value, Dimension::integer));
  } else if (key == "tolerance") {
    spec.tolerance = parse_quantity(value, Dimension::none);
  } else if (key == "record_points") {
    spec.record_points = static_cast<int>(parse_quantity(value, Dimension::integer));
  } else if (key == "n_experiments") {
    spec.n_experiments = static_cast<long>(parse_quantity(value, Dimension::integer));
  } else if (key == "k_c" || key == "k_r") {
    (key == "k_c" ? spec.k_c : spec.k_r) = static_cast<int>(parse_quantity(value, Dimension::integer));
  } else if (key == "method") {
    const auto v = trim(value);
    if (v != "analytic" && v != "numeric") throw ConfigError("method must be 'analytic' or 'numeric'");
    spec.method = v == "analytic" ? Method::analytic : Method::numeric;
  } else if (key == "mode") {
    spec.mode = trim(value);
  } else if (key == "estimand") {
    spec.estimand = trim(value);
  } else if (is_sweepable(key)) {
    if (!section.empty()) key_dimension(section, key);
    set_parameter(spec, key, parse_quantity(value, parameter_dimension(key)));
  } else {
    throw ConfigError("override key '" + assignment.substr(0, eq) + "' is not settable");
  }
  spec.audit.push_back("override " + trim(assignment));
  spec.validate();
}

std::string echo(const ScenarioSpec& spec) {
  std::ostringstream os;
  os.precision(6);
  os << "scenario " << spec.name << '\n';
  for (const auto& a : spec.audit) os << "  " << a << '\n';
  const auto& p = spec.probe;
  os << "interpreted (krad/s, ms, SI):\n";
  os << "  ions " << p.num_ions << ", omega0 " << p.omega0 << ", gamma " << p.gamma << ", delta " << p.delta
     << ", kappa " << p.kappa << ", nmax " << p.n_max << ", x0 " << p.x0 << " m\n";
  os << "  g";
  for (double g : p.g) os << ' ' << g;
  os << ", phi/pi";
  for (double ph : p.phi) os << ' ' << ph / units::pi;
  os << '\n';
  if (spec.force) {
    const auto eps = spec.force->drive_rates(p.x0);
    for (std::size_t j = 0; j < eps.size(); ++j) {
      os << "  F" << j + 1 << " " << spec.force->force[j] << " N -> eps" << j + 1 << " " << eps[j] << " krad/s\n";
    }
    os << "  xi/pi " << spec.force->xi / units::pi << '\n';
  }
  if (spec.magnetic) {
    const auto d = spec.magnetic->detunings();
    os << "  B0 " << spec.magnetic->b0 << " T, B' " << spec.magnetic->b_prime << " T/m -> dB1 " << d[0] << ", dB2 "
       << d[1] << " krad/s\n";
  }
  const auto modes = models::collective_transform(p);
  os << "  omega_c " << modes.omega_c() << ", omega_r " << modes.omega_r() << ", J " << modes.j_coupling << '\n';
  if (spec.sweep) {
    os << "  sweep " << spec.sweep->parameter << " over " << spec.sweep->values.size() << " points ["
       << spec.sweep->values.front() << ", " << spec.sweep->values.back() << "]\n";
  }
  if (spec.series) {
    os << "  series " << spec.series->parameter << ":";
    for (double v : spec.series->values) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

}  // namespace gradsense::cli
