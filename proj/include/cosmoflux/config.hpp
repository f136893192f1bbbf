// config.hpp: run and sweep configuration as flat `key = value` text, with validation and round trip.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "cosmoflux/errors.hpp"
#include "cosmoflux/fock.hpp"
#include "cosmoflux/spacetime.hpp"

namespace cosmoflux::config {

enum class Scenario { cosmology, unruh, blackhole, direct_z };
enum class OutputFormat { json, csv };
enum class SweepAxis { momentum, sigma, epsilon, temperature, mass };
enum class Spacing { linear, log };

// Explicit channel for the direct-z scenario.
struct DirectChannel {
  double z = 0.0;
  double omega_in = 1.0;
  double omega_out = 1.0;

  bool operator==(const DirectChannel&) const = default;

  void validate() const {
    if (!(std::isfinite(z) && z >= 0.0)) throw ConfigError("z must be finite and >= 0");
    if (!(std::isfinite(omega_in) && omega_in > 0.0)) throw ConfigError("omega_in must be > 0");
    if (!(std::isfinite(omega_out) && omega_out > 0.0)) throw ConfigError("omega_out must be > 0");
  }
};

using ScenarioParams =
    std::variant<spacetime::CosmologyParams, spacetime::UnruhParams, spacetime::BlackHoleParams, DirectChannel>;

inline constexpr int default_cutoff = 40;
inline constexpr int min_cutoff = 8;
inline constexpr double default_leakage_tolerance = 1e-8;
inline constexpr double max_leakage_tolerance = 1e-2;
inline constexpr int default_precision = 12;

struct RunConfig {
  ScenarioParams params = DirectChannel{};
  double temperature = 1.0;
  int cutoff = default_cutoff;
  double leakage_tolerance = default_leakage_tolerance;
  OutputFormat output = OutputFormat::json;
  int precision = default_precision;

  bool operator==(const RunConfig&) const = default;

  Scenario scenario() const noexcept { return static_cast<Scenario>(params.index()); }

  void validate() const {
    std::visit([](const auto& p) { p.validate(); }, params);
    if (!(std::isfinite(temperature) && temperature >= 0.0)) throw ConfigError("temperature must be finite and >= 0");
    if (cutoff < min_cutoff || cutoff > fock::max_cutoff) {
      throw ConfigError("cutoff must lie in [" + std::to_string(min_cutoff) + ", " + std::to_string(fock::max_cutoff) +
                        "]");
    }
    if (!(leakage_tolerance > 0.0 && leakage_tolerance <= max_leakage_tolerance)) {
      throw ConfigError("leakage_tolerance must lie in (0, 0.01]");
    }
    if (precision < 1 || precision > 17) throw ConfigError("precision must lie in [1, 17]");
  }
};

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  Spacing spacing = Spacing::linear;

  bool operator==(const GridSpec&) const = default;
};

struct SweepConfig {
  RunConfig base;
  SweepAxis axis = SweepAxis::temperature;
  std::variant<std::vector<double>, GridSpec> grid = std::vector<double>{};

  bool operator==(const SweepConfig&) const = default;
};

// ---- names -------------------------------------------------------------------

inline std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::cosmology: return "cosmology";
    case Scenario::unruh: return "unruh";
    case Scenario::blackhole: return "blackhole";
    case Scenario::direct_z: return "direct-z";
  }
  return "";
}

inline std::string_view to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::momentum: return "momentum";
    case SweepAxis::sigma: return "sigma";
    case SweepAxis::epsilon: return "epsilon";
    case SweepAxis::temperature: return "temperature";
    case SweepAxis::mass: return "mass";
  }
  return "";
}

inline std::string_view to_string(Spacing s) { return s == Spacing::linear ? "linear" : "log"; }

inline Scenario parse_scenario(std::string_view s) {
  if (s == "cosmology") return Scenario::cosmology;
  if (s == "unruh") return Scenario::unruh;
  if (s == "blackhole") return Scenario::blackhole;
  if (s == "direct-z") return Scenario::direct_z;
  throw ConfigError("unknown scenario '" + std::string(s) + "' (cosmology, unruh, blackhole, direct-z)");
}

inline OutputFormat parse_output(std::string_view s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw ConfigError("unknown output format '" + std::string(s) + "' (json, csv)");
}

inline SweepAxis parse_axis(std::string_view s) {
  for (auto a : {SweepAxis::momentum, SweepAxis::sigma, SweepAxis::epsilon, SweepAxis::temperature, SweepAxis::mass}) {
    if (s == to_string(a)) return a;
  }
  throw ConfigError("unknown sweep axis '" + std::string(s) + "' (momentum, sigma, epsilon, temperature, mass)");
}

inline Spacing parse_spacing(std::string_view s) {
  if (s == "linear") return Spacing::linear;
  if (s == "log") return Spacing::log;
  throw ConfigError("unknown sweep spacing '" + std::string(s) + "' (linear, log)");
}

// ---- scalar parsing and formatting ---------------------------------------------

inline double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  }
  return v;
}

inline int parse_int(std::string_view key, std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'");
  }
  return v;
}

// Shortest text that reads back to the same double.
inline std::string format_roundtrip(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// ---- key/value entries -----------------------------------------------------------

inline constexpr std::string_view common_keys[] = {"scenario", "temperature", "cutoff", "leakage_tolerance", "output",
                                                   "precision"};
inline constexpr std::string_view cosmology_keys[] = {"k", "m", "epsilon", "sigma"};
inline constexpr std::string_view unruh_keys[] = {"acceleration", "omega"};
inline constexpr std::string_view blackhole_keys[] = {"mass_bh", "omega"};
inline constexpr std::string_view direct_keys[] = {"z", "omega_in", "omega_out"};
inline constexpr std::string_view sweep_keys[] = {"sweep_axis",  "sweep_values", "sweep_min",
                                                  "sweep_max",   "sweep_count",  "sweep_spacing"};

namespace detail {

template <std::size_t N>
bool in(std::string_view key, const std::string_view (&set)[N]) {
  return std::find(std::begin(set), std::end(set), key) != std::end(set);
}

inline std::span<const std::string_view> scenario_keys(Scenario s) {
  switch (s) {
    case Scenario::cosmology: return cosmology_keys;
    case Scenario::unruh: return unruh_keys;
    case Scenario::blackhole: return blackhole_keys;
    case Scenario::direct_z: return direct_keys;
  }
  return {};
}

}  // namespace detail

inline bool is_known_key(std::string_view key) {
  return detail::in(key, common_keys) || detail::in(key, cosmology_keys) || detail::in(key, unruh_keys) ||
         detail::in(key, blackhole_keys) || detail::in(key, direct_keys) || detail::in(key, sweep_keys);
}

using Entries = std::map<std::string, std::string, std::less<>>;

inline void set_entry(Entries& entries, std::string_view key, std::string_view value) {
  if (!is_known_key(key)) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  entries[std::string(key)] = std::string(trim(value));
}

// `key = value` per line; `#` starts a comment; duplicate or unknown keys are errors.
inline Entries parse_entries(std::string_view text) {
  Entries out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    }
    if (out.count(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    try {
      set_entry(out, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline Entries load_entries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_entries(ss.str());
}

// ---- entries → configs ---------------------------------------------------------------

inline RunConfig run_config_from(const Entries& entries, bool allow_sweep_keys = false) {
  const auto scenario_it = entries.find("scenario");
  if (scenario_it == entries.end()) throw ConfigError("missing required key 'scenario'");
  const Scenario scenario = parse_scenario(scenario_it->second);
  const auto own = detail::scenario_keys(scenario);

  for (const auto& [key, value] : entries) {
    if (detail::in(key, common_keys)) continue;
    if (detail::in(key, sweep_keys)) {
      if (allow_sweep_keys) continue;
      throw ConfigError("'" + key + "' is only valid for the sweep command");
    }
    if (std::find(own.begin(), own.end(), key) == own.end()) {
      throw ConfigError("key '" + key + "' does not belong to scenario " + std::string(to_string(scenario)));
    }
  }

  auto number = [&](std::string_view key, double fallback) {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : parse_double(key, it->second);
  };

  RunConfig c;
  switch (scenario) {
    case Scenario::cosmology: {
      spacetime::CosmologyParams p;
      p.momentum = number("k", p.momentum);
      p.mass = number("m", p.mass);
      p.epsilon = number("epsilon", p.epsilon);
      p.sigma = number("sigma", p.sigma);
      c.params = p;
      break;
    }
    case Scenario::unruh: {
      spacetime::UnruhParams p;
      p.acceleration = number("acceleration", p.acceleration);
      p.omega = number("omega", p.omega);
      c.params = p;
      break;
    }
    case Scenario::blackhole: {
      spacetime::BlackHoleParams p;
      p.mass_bh = number("mass_bh", p.mass_bh);
      p.omega = number("omega", p.omega);
      c.params = p;
      break;
    }
    case Scenario::direct_z: {
      DirectChannel p;
      p.z = number("z", p.z);
      p.omega_in = number("omega_in", p.omega_in);
      p.omega_out = number("omega_out", p.omega_out);
      c.params = p;
      break;
    }
  }

  const auto t = entries.find("temperature");
  if (t == entries.end()) throw ConfigError("missing required key 'temperature'");
  c.temperature = parse_double("temperature", t->second);
  if (const auto it = entries.find("cutoff"); it != entries.end()) c.cutoff = parse_int("cutoff", it->second);
  c.leakage_tolerance = number("leakage_tolerance", c.leakage_tolerance);
  if (const auto it = entries.find("output"); it != entries.end()) c.output = parse_output(it->second);
  if (const auto it = entries.find("precision"); it != entries.end()) c.precision = parse_int("precision", it->second);
  c.validate();
  return c;
}

inline RunConfig apply_axis(RunConfig c, SweepAxis axis, double value) {
  if (axis == SweepAxis::temperature) {
    c.temperature = value;
    return c;
  }
  auto* p = std::get_if<spacetime::CosmologyParams>(&c.params);
  if (!p) throw ConfigError("sweep axis '" + std::string(to_string(axis)) + "' needs the cosmology scenario");
  switch (axis) {
    case SweepAxis::momentum: p->momentum = value; break;
    case SweepAxis::sigma: p->sigma = value; break;
    case SweepAxis::epsilon: p->epsilon = value; break;
    case SweepAxis::mass: p->mass = value; break;
    case SweepAxis::temperature: break;
  }
  return c;
}

inline std::vector<double> grid_values(const GridSpec& g) {
  std::vector<double> out(static_cast<std::size_t>(g.count));
  for (int i = 0; i < g.count; ++i) {
    const double f = static_cast<double>(i) / (g.count - 1);
    out[static_cast<std::size_t>(i)] = g.spacing == Spacing::linear
                                           ? g.min + (g.max - g.min) * f
                                           : std::exp(std::log(g.min) + (std::log(g.max) - std::log(g.min)) * f);
  }
  out.front() = g.min;
  out.back() = g.max;
  return out;
}

inline std::vector<double> sweep_values(const SweepConfig& s) {
  if (const auto* list = std::get_if<std::vector<double>>(&s.grid)) return *list;
  return grid_values(std::get<GridSpec>(s.grid));
}

inline void validate(const SweepConfig& s) {
  s.base.validate();
  if (const auto* g = std::get_if<GridSpec>(&s.grid)) {
    if (g->count < 2) throw ConfigError("sweep_count must be >= 2");
    if (!(std::isfinite(g->min) && std::isfinite(g->max))) throw ConfigError("sweep bounds must be finite");
    if (g->spacing == Spacing::log && !(g->min > 0.0 && g->max > 0.0)) {
      throw ConfigError("log spacing needs sweep_min, sweep_max > 0");
    }
  } else if (std::get<std::vector<double>>(s.grid).empty()) {
    throw ConfigError("sweep_values is empty");
  }
  for (double v : sweep_values(s)) {
    try {
      apply_axis(s.base, s.axis, v).validate();
    } catch (const ConfigError& e) {
      throw ConfigError("sweep value " + format_roundtrip(v) + " is outside the domain of '" +
                        std::string(to_string(s.axis)) + "': " + e.what());
    }
  }
}

inline SweepConfig sweep_config_from(const Entries& entries) {
  SweepConfig s;
  s.base = run_config_from(entries, true);
  const auto axis = entries.find("sweep_axis");
  if (axis == entries.end()) throw ConfigError("missing required key 'sweep_axis'");
  s.axis = parse_axis(axis->second);

  const auto values = entries.find("sweep_values");
  const bool has_range = entries.count("sweep_min") || entries.count("sweep_max") || entries.count("sweep_count") ||
                         entries.count("sweep_spacing");
  if (values != entries.end()) {
    if (has_range) throw ConfigError("give either sweep_values or sweep_min/max/count, not both");
    std::vector<double> list;
    std::string_view rest = values->second;
    while (true) {
      const auto comma = rest.find(',');
      list.push_back(parse_double("sweep_values", trim(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    s.grid = std::move(list);
  } else {
    GridSpec g;
    for (const char* key : {"sweep_min", "sweep_max", "sweep_count"}) {
      if (!entries.count(key)) throw ConfigError(std::string("missing '") + key + "' (or give sweep_values)");
    }
    g.min = parse_double("sweep_min", entries.find("sweep_min")->second);
    g.max = parse_double("sweep_max", entries.find("sweep_max")->second);
    g.count = parse_int("sweep_count", entries.find("sweep_count")->second);
    if (const auto it = entries.find("sweep_spacing"); it != entries.end()) g.spacing = parse_spacing(it->second);
    s.grid = g;
  }
  validate(s);
  return s;
}

inline RunConfig parse_run_config(std::string_view text) { return run_config_from(parse_entries(text)); }
inline SweepConfig parse_sweep_config(std::string_view text) { return sweep_config_from(parse_entries(text)); }

// ---- configs → text ------------------------------------------------------------------

inline void write_run_entries(std::ostream& out, const RunConfig& c) {
  auto line = [&](std::string_view key, std::string_view value) { out << key << " = " << value << '\n'; };
  auto num = [&](std::string_view key, double v) { line(key, format_roundtrip(v)); };
  line("scenario", to_string(c.scenario()));
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, spacetime::CosmologyParams>) {
          num("k", p.momentum);
          num("m", p.mass);
          num("epsilon", p.epsilon);
          num("sigma", p.sigma);
        } else if constexpr (std::is_same_v<P, spacetime::UnruhParams>) {
          num("acceleration", p.acceleration);
          num("omega", p.omega);
        } else if constexpr (std::is_same_v<P, spacetime::BlackHoleParams>) {
          num("mass_bh", p.mass_bh);
          num("omega", p.omega);
        } else {
          num("z", p.z);
          num("omega_in", p.omega_in);
          num("omega_out", p.omega_out);
        }
      },
      c.params);
  num("temperature", c.temperature);
  line("cutoff", std::to_string(c.cutoff));
  num("leakage_tolerance", c.leakage_tolerance);
  line("output", to_string(c.output));
  line("precision", std::to_string(c.precision));
}

inline std::string to_config_text(const RunConfig& c) {
  std::ostringstream out;
  write_run_entries(out, c);
  return out.str();
}

inline std::string to_config_text(const SweepConfig& s) {
  std::ostringstream out;
  write_run_entries(out, s.base);
  out << "sweep_axis = " << to_string(s.axis) << '\n';
  if (const auto* list = std::get_if<std::vector<double>>(&s.grid)) {
    out << "sweep_values = ";
    for (std::size_t i = 0; i < list->size(); ++i) out << (i ? ", " : "") << format_roundtrip((*list)[i]);
    out << '\n';
  } else {
    const auto& g = std::get<GridSpec>(s.grid);
    out << "sweep_min = " << format_roundtrip(g.min) << '\n'
        << "sweep_max = " << format_roundtrip(g.max) << '\n'
        << "sweep_count = " << g.count << '\n'
        << "sweep_spacing = " << to_string(g.spacing) << '\n';
  }
  return out.str();
}

}  // namespace cosmoflux::config
