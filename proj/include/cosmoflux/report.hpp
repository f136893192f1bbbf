// report.hpp: end-to-end runs, sweeps, the invariant suite, and CSV/JSON output.

#pragma once

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "cosmoflux/config.hpp"
#include "cosmoflux/errors.hpp"
#include "cosmoflux/fluctuation.hpp"
#include "cosmoflux/fock.hpp"
#include "cosmoflux/spacetime.hpp"
#include "cosmoflux/thermo.hpp"

namespace cosmoflux::report {

using config::RunConfig;
using config::Scenario;
using config::SweepConfig;
using spacetime::SqueezeChannel;

// Process exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_verification = 2;
inline constexpr int exit_numeric = 3;

enum class Status { pass, fail, skip };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skip: return "skip";
  }
  return "";
}

struct Check {
  std::string name;
  Status status = Status::skip;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

inline Check make_check(std::string name, double residual, double tolerance) {
  const bool ok = std::isfinite(residual) && residual <= tolerance;
  return {std::move(name), ok ? Status::pass : Status::fail, residual, tolerance, {}};
}

inline Check skipped(std::string name, std::string detail) {
  return {std::move(name), Status::skip, 0.0, 0.0, std::move(detail)};
}

struct RunReport {
  RunConfig config;
  SqueezeChannel channel;
  thermo::WorkReport work;
  double closed_form_created = 0.0;
  std::optional<double> mean_entropy;
  std::optional<double> kl_classical;
  std::optional<double> kl_quantum;
  std::optional<double> crooks_dev;
  std::optional<double> microstate_residual;
  std::optional<double> integral_fluctuation;
  double renorm_defect = 0.0;
  double floor_mass = 0.0;
  double clipped_weight = 0.0;
  double orthogonality_defect = 0.0;
  std::vector<Check> checks;
  std::vector<std::string> notices;

  // Mass lost to the finite basis: kernel leakage plus the thermal tail.
  double leakage() const noexcept { return work.weighted_leakage + renorm_defect; }
  double truncation_budget() const noexcept { return leakage() + floor_mass; }

  bool passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::fail; });
  }
};

inline SqueezeChannel make_channel(const RunConfig& c) {
  return std::visit(
      [](const auto& p) -> SqueezeChannel {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, spacetime::CosmologyParams>) {
          return spacetime::cosmology_channel(p);
        } else if constexpr (std::is_same_v<P, spacetime::UnruhParams>) {
          return spacetime::unruh_channel(p);
        } else if constexpr (std::is_same_v<P, spacetime::BlackHoleParams>) {
          return spacetime::blackhole_channel(p);
        } else {
          p.validate();
          return {fock::SqueezeParameter(p.z), p.omega_in, p.omega_out};
        }
      },
      c.params);
}

namespace detail {

// P_E mass on odd total-number changes; zero by construction of the sector blocks.
inline double odd_change_mass(const fluctuation::ProcessJoint& joint) {
  double odd = 0.0;
  joint.for_each([&](fock::JointFockIndex n, fock::JointFockIndex m, double p) {
    if ((m.total() - n.total()) % 2 != 0) odd += p;
  });
  return odd;
}

}  // namespace detail

inline RunReport run_simulation(const RunConfig& cfg) {
  namespace tol = fluctuation::tolerance;
  cfg.validate();
  RunReport r;
  r.config = cfg;
  r.channel = make_channel(cfg);
  const double w = r.channel.omega_in;
  const double wt = r.channel.omega_out;
  const fock::TruncationSpec spec(cfg.cutoff, cfg.leakage_tolerance);

  const auto kernel = fock::transition_kernel(r.channel.z, spec);
  const auto thermal = thermo::thermal_distribution(cfg.temperature, w, spec);
  r.renorm_defect = thermal.renorm_defect();
  r.work = thermo::work_report(kernel, thermal, w, wt, Enforce::no);
  r.closed_form_created = thermo::mean_created_closed_form(r.channel.z, cfg.temperature, w);

  if (cfg.scenario() == Scenario::unruh || cfg.scenario() == Scenario::blackhole) {
    r.notices.push_back(
        "formal_extension: horizon scenario mapped onto the unitary two-mode pipeline with omega_in = omega_out");
  }

  r.checks.push_back(make_check("inner_friction", r.work.friction_residual, r.work.truncation_bound));
  r.checks.push_back(make_check("second_law_work", std::max(0.0, -r.work.inner_friction), r.work.truncation_bound));
  r.checks.push_back(make_check("closed_form_created", std::abs(r.work.mean_created - r.closed_form_created),
                                1e-6 * std::max(1.0, r.closed_form_created)));

  if (thermal.is_vacuum()) {
    r.notices.push_back("vacuum path: T = 0, entropy quantities are undefined and their checks are skipped");
    for (const char* name : {"normalization", "parity", "crooks_microstate", "crooks_distribution", "kl_identity",
                             "entropy_nonnegative", "entropy_friction", "entropy_created", "integral_fluctuation",
                             "relative_entropy"}) {
      r.checks.push_back(skipped(name, "vacuum path"));
    }
    return r;
  }

  const double t_ad = r.work.adiabatic_temperature;
  const auto fwd = fluctuation::forward_joint(kernel, thermal);
  const auto rev = fluctuation::reverse_joint(kernel, thermal);
  const auto dists = fluctuation::entropy_distributions(fwd, rev, wt, t_ad);

  r.checks.push_back(make_check("normalization", std::abs(1.0 - dists.expansion.total()), cfg.leakage_tolerance));
  r.checks.push_back(make_check("parity", detail::odd_change_mass(fwd), 0.0));

  r.microstate_residual = fluctuation::microstate_crooks_residual(fwd, rev, wt, t_ad);
  r.checks.push_back(make_check("crooks_microstate", *r.microstate_residual, tol::microstate_crooks));

  try {
    const auto crooks = fluctuation::crooks_deviation(dists.expansion, dists.contraction);
    r.crooks_dev = crooks.deviation;
    r.floor_mass = crooks.floor_mass;
    r.checks.push_back(make_check("crooks_distribution", crooks.deviation, tol::distribution_crooks));

    const auto kl = fluctuation::mean_entropy_and_kl(dists.expansion, dists.contraction, Enforce::no);
    r.mean_entropy = kl.mean_entropy;
    r.kl_classical = kl.kl;
    r.checks.push_back(make_check("kl_identity", kl.residual, tol::kl_identity));
  } catch (const VerificationError& e) {
    r.mean_entropy = dists.expansion.mean();
    for (const char* name : {"crooks_distribution", "kl_identity"}) {
      Check c = make_check(name, std::numeric_limits<double>::infinity(), 0.0);
      c.detail = e.what();
      r.checks.push_back(std::move(c));
    }
  }
  r.checks.push_back(make_check("entropy_nonnegative", std::max(0.0, -*r.mean_entropy), tol::nonnegative_entropy));

  const auto ef = fluctuation::entropy_friction_identity(r.work, *r.mean_entropy, wt, Enforce::no);
  r.checks.push_back(make_check("entropy_friction", ef.residual_friction, tol::entropy_friction));
  r.checks.push_back(make_check("entropy_created", ef.residual_created, tol::entropy_friction));

  r.integral_fluctuation = fluctuation::integral_fluctuation(dists.expansion);
  r.checks.push_back(
      make_check("integral_fluctuation", std::abs(*r.integral_fluctuation - 1.0), tol::integral_fluctuation));

  const auto oracle = fock::squeeze_operator_oracle_sectors(r.channel.z, spec);
  const auto qre = fluctuation::quantum_relative_entropy(thermal, oracle);
  r.kl_quantum = qre.relative_entropy;
  r.clipped_weight = qre.clipped_weight;
  r.orthogonality_defect = qre.orthogonality_defect;
  const auto qcheck =
      fluctuation::check_relative_entropy_friction(qre.relative_entropy, t_ad, r.work.inner_friction, Enforce::no);
  r.checks.push_back(make_check("relative_entropy", qcheck.residual, tol::relative_entropy));
  return r;
}

// ---- sweeps ------------------------------------------------------------------------

struct SweepRow {
  double value = 0.0;
  RunConfig config;
  std::optional<RunReport> report;
  std::string error;
  int error_code = exit_ok;
};

// Worker count: hardware concurrency, capped by COSMOFLUX_THREADS when set.
inline unsigned sweep_threads(std::size_t tasks) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("COSMOFLUX_THREADS")) {
    unsigned cap = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec == std::errc{} && ptr == s.data() + s.size() && cap > 0) n = std::min(n, cap);
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return exit_config;
  if (dynamic_cast<const VerificationError*>(&e)) return exit_verification;
  return exit_numeric;
}

using Progress = std::function<void(std::size_t done, std::size_t total)>;

// Rows come back in grid order whatever the completion order.
inline std::vector<SweepRow> run_sweep(const SweepConfig& sweep, unsigned threads = 0, const Progress& progress = {}) {
  config::validate(sweep);
  const auto values = config::sweep_values(sweep);
  std::vector<SweepRow> rows(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows[i].value = values[i];
    rows[i].config = config::apply_axis(sweep.base, sweep.axis, values[i]);
  }
  if (threads == 0) threads = sweep_threads(rows.size());

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        rows[i].report = run_simulation(rows[i].config);
      } catch (const std::exception& e) {
        rows[i].error = e.what();
        rows[i].error_code = exit_code_for(e);
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, rows.size());
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

// ---- invariant suite ------------------------------------------------------------------

struct VerifySuite {
  std::string label;
  std::vector<Check> checks;
  std::string error;
  int error_code = exit_ok;

  bool passed() const {
    return error_code == exit_ok &&
           std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::fail; });
  }
};

struct VerifyReport {
  std::vector<VerifySuite> suites;

  // Leakage and other numeric errors outrank identity failures.
  int exit_code() const {
    int code = exit_ok;
    for (const auto& s : suites) {
      if (s.error_code == exit_numeric) return exit_numeric;
      if (s.error_code != exit_ok) code = std::max(code, s.error_code);
      if (!s.passed()) code = std::max(code, exit_verification);
    }
    return code;
  }
  bool passed() const { return exit_code() == exit_ok; }
};

// max |analytic − oracle| over states with occupations ≤ max_index; the oracle basis is
// padded so its boundary does not reach those states.
inline double oracle_deviation(fock::SqueezeParameter z, int max_index) {
  const int pad = fock::vacuum_cutoff(z, 1e-24);
  const fock::TruncationSpec oracle_spec(std::clamp(max_index + pad + 2, 40, fock::max_cutoff));
  double worst = 0.0;
  for (int d = 0; d <= max_index; ++d) {
    const Eigen::MatrixXd s = fock::sector_generator(z, d, oracle_spec).exp();
    const int size = std::min(static_cast<int>(s.rows()), max_index - d + 1);
    for (int sign : {1, -1}) {
      if (d == 0 && sign < 0) continue;
      for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
          const auto initial = fock::sector_state(sign * d, j);
          const auto final_state = fock::sector_state(sign * d, i);
          worst = std::max(worst, std::abs(fock::squeeze_amplitude(z, initial, final_state) - s(i, j)));
        }
      }
    }
  }
  return worst;
}

// Largest element of the full (unblocked) truncated exponential connecting different n_a − n_b.
inline double difference_leak(fock::SqueezeParameter z, int cutoff) {
  const fock::TruncationSpec spec(cutoff);
  const Eigen::MatrixXd s = fock::squeeze_generator(z, spec).exp();
  double worst = 0.0;
  for (std::size_t i = 0; i < spec.dimension(); ++i) {
    for (std::size_t j = 0; j < spec.dimension(); ++j) {
      if (fock::from_linear_index(i, spec).difference() != fock::from_linear_index(j, spec).difference()) {
        worst = std::max(worst, std::abs(s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
      }
    }
  }
  return worst;
}

// Relative error of the vacuum column against tanh^{2n} z / cosh² z, n ≤ 10.
inline double vacuum_law_deviation(const fock::TransitionKernel& kernel) {
  const double t = kernel.squeeze().tanh();
  const double c = kernel.squeeze().alpha();
  double worst = 0.0;
  for (int n = 0; n <= std::min(10, kernel.cutoff()); ++n) {
    const double expected = std::pow(t, 2 * n) / (c * c);
    if (expected == 0.0) continue;
    worst = std::max(worst, std::abs(kernel.probability({n, n}, {0, 0}) - expected) / expected);
  }
  return worst;
}

inline RunConfig canonical_config() {
  RunConfig c;
  c.params = config::DirectChannel{std::atanh(0.5), 1.0, 2.0};
  c.temperature = 1.0;
  return c;
}

inline RunConfig static_config() {
  RunConfig c;
  c.params = config::DirectChannel{0.0, 1.0, 1.0};
  c.temperature = 1.0;
  return c;
}

namespace detail {

template <class F>
VerifySuite run_suite(std::string label, F&& body) {
  VerifySuite suite;
  suite.label = std::move(label);
  try {
    body(suite.checks);
  } catch (const LeakageError& e) {
    suite.error = e.what();
    suite.error_code = exit_numeric;
    Check c = make_check("leakage", e.leaked(), 0.0);
    c.status = Status::fail;
    c.detail = e.what();
    suite.checks.push_back(std::move(c));
  } catch (const std::exception& e) {
    suite.error = e.what();
    suite.error_code = exit_code_for(e);
  }
  return suite;
}

inline void structural_checks(const RunConfig& cfg, std::vector<Check>& checks) {
  const auto channel = make_channel(cfg);
  const fock::TruncationSpec spec(cfg.cutoff, cfg.leakage_tolerance);
  const auto kernel = fock::transition_kernel(channel.z, spec);
  checks.push_back(make_check("oracle_amplitudes", oracle_deviation(channel.z, std::min(12, cfg.cutoff)), 1e-10));
  checks.push_back(make_check("vacuum_law", vacuum_law_deviation(kernel), 1e-9));
  checks.push_back(make_check("difference_conservation", difference_leak(channel.z, 6), 1e-14));
}

}  // namespace detail

// Every module invariant at the configured point, then at the canonical and static points.
inline VerifyReport verify_invariants(const RunConfig& cfg) {
  cfg.validate();
  VerifyReport out;

  out.suites.push_back(detail::run_suite("configured", [&](std::vector<Check>& checks) {
    detail::structural_checks(cfg, checks);
    const auto r = run_simulation(cfg);
    checks.insert(checks.end(), r.checks.begin(), r.checks.end());
    checks.push_back(make_check("oracle_orthogonality", r.orthogonality_defect, 1e-12));
  }));

  out.suites.push_back(detail::run_suite("canonical", [&](std::vector<Check>& checks) {
    const RunConfig c = canonical_config();
    detail::structural_checks(c, checks);
    const auto r = run_simulation(c);
    checks.insert(checks.end(), r.checks.begin(), r.checks.end());
    const double values = std::max({std::abs(r.work.mean_work - 5.049224632056857),
                                    std::abs(r.work.adiabatic_work - 2.163953413738653),
                                    std::abs(r.work.inner_friction - 2.885271218318204),
                                    std::abs(r.mean_entropy.value_or(NAN) - 1.442635609159102)});
    checks.push_back(make_check("canonical_values", values, 1e-6));
  }));

  out.suites.push_back(detail::run_suite("static", [&](std::vector<Check>& checks) {
    const auto r = run_simulation(static_config());
    checks.insert(checks.end(), r.checks.begin(), r.checks.end());
    const double exact = std::max({std::abs(r.work.mean_work - r.work.adiabatic_work), std::abs(r.work.inner_friction),
                                   std::abs(r.work.mean_created), std::abs(r.mean_entropy.value_or(NAN)),
                                   std::abs(r.kl_classical.value_or(NAN)), std::abs(r.kl_quantum.value_or(NAN)),
                                   r.crooks_dev.value_or(NAN)});
    checks.push_back(make_check("static_exact", exact, 1e-12));
  }));
  return out;
}

// ---- serialization ------------------------------------------------------------------

// General notation with `precision` significant digits, no locale, no negative zero.
inline std::string format_number(double v, int precision) {
  if (!std::isfinite(v)) return {};
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, ptr);
}

inline std::string format_number(const std::optional<double>& v, int precision) {
  return v ? format_number(*v, precision) : std::string{};
}

// JSON number holding exactly the value the CSV would print; null when undefined.
inline nlohmann::ordered_json json_number(std::optional<double> v, int precision) {
  if (!v || !std::isfinite(*v)) return nullptr;
  const std::string text = format_number(*v, precision);
  double rounded = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), rounded);
  return rounded;
}

inline constexpr const char* csv_columns[] = {
    "scenario",       "k",            "m",           "epsilon",      "sigma",        "T",          "cutoff",
    "z",              "omega_in",     "omega_out",   "mean_work",    "adiabatic_work", "inner_friction",
    "mean_created",   "mean_entropy", "kl_classical", "kl_quantum",  "crooks_dev",   "leakage",    "flags"};

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else if (ch == '\n' || ch == '\r') out += ' ';
    else out += ch;
  }
  return out + "\"";
}

inline std::string csv_header(bool with_error = false) {
  std::string out;
  for (const char* c : csv_columns) {
    if (!out.empty()) out += ',';
    out += c;
  }
  if (with_error) out += ",error";
  return out + '\n';
}

inline std::string flags_text(const std::vector<Check>& checks) {
  std::string out;
  for (const auto& c : checks) {
    if (!out.empty()) out += ';';
    out += c.name + '=' + std::string(to_string(c.status));
  }
  return out;
}

namespace detail {

// Scenario and input columns, shared by report rows and failed sweep rows.
inline std::vector<std::string> config_cells(const RunConfig& cfg) {
  const int p = cfg.precision;
  std::vector<std::string> cells{std::string(config::to_string(cfg.scenario())), {}, {}, {}, {}};
  if (const auto* c = std::get_if<spacetime::CosmologyParams>(&cfg.params)) {
    cells[1] = format_number(c->momentum, p);
    cells[2] = format_number(c->mass, p);
    cells[3] = format_number(c->epsilon, p);
    cells[4] = format_number(c->sigma, p);
  }
  cells.push_back(format_number(cfg.temperature, p));
  cells.push_back(std::to_string(cfg.cutoff));
  return cells;
}

inline std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cells[i]);
  }
  return out + '\n';
}

}  // namespace detail

inline std::vector<std::string> csv_cells(const RunReport& r) {
  const int p = r.config.precision;
  auto cells = detail::config_cells(r.config);
  for (double v : {r.channel.z.value(), r.channel.omega_in, r.channel.omega_out, r.work.mean_work,
                   r.work.adiabatic_work, r.work.inner_friction, r.work.mean_created}) {
    cells.push_back(format_number(v, p));
  }
  for (const auto& v : {r.mean_entropy, r.kl_classical, r.kl_quantum, r.crooks_dev}) cells.push_back(format_number(v, p));
  cells.push_back(format_number(r.leakage(), p));
  cells.push_back(flags_text(r.checks));
  return cells;
}

inline std::string to_csv(const RunReport& r) { return csv_header() + detail::join_row(csv_cells(r)); }

inline std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = csv_header(true);
  for (const auto& row : rows) {
    std::vector<std::string> cells;
    if (row.report) {
      cells = csv_cells(*row.report);
    } else {
      cells = detail::config_cells(row.config);
      cells.resize(std::size(csv_columns));
    }
    cells.push_back(row.error);
    out += detail::join_row(cells);
  }
  return out;
}

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
  const auto entries = config::parse_entries(config::to_config_text(cfg));
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  // Keep the config text's key order rather than the map's.
  std::istringstream lines(config::to_config_text(cfg));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    const std::string key(config::trim(std::string_view(line).substr(0, eq)));
    const std::string& value = entries.at(key);
    if (key == "scenario" || key == "output") {
      out[key] = value;
    } else if (key == "cutoff" || key == "precision") {
      out[key] = config::parse_int(key, value);
    } else {
      out[key] = config::parse_double(key, value);
    }
  }
  return out;
}

inline nlohmann::ordered_json to_json_object(const RunReport& r) {
  const int p = r.config.precision;
  nlohmann::ordered_json j;
  j["scenario"] = std::string(config::to_string(r.config.scenario()));
  const auto* c = std::get_if<spacetime::CosmologyParams>(&r.config.params);
  j["k"] = c ? json_number(c->momentum, p) : nullptr;
  j["m"] = c ? json_number(c->mass, p) : nullptr;
  j["epsilon"] = c ? json_number(c->epsilon, p) : nullptr;
  j["sigma"] = c ? json_number(c->sigma, p) : nullptr;
  j["T"] = json_number(r.config.temperature, p);
  j["cutoff"] = r.config.cutoff;
  j["z"] = json_number(r.channel.z.value(), p);
  j["omega_in"] = json_number(r.channel.omega_in, p);
  j["omega_out"] = json_number(r.channel.omega_out, p);
  j["mean_work"] = json_number(r.work.mean_work, p);
  j["adiabatic_work"] = json_number(r.work.adiabatic_work, p);
  j["inner_friction"] = json_number(r.work.inner_friction, p);
  j["mean_created"] = json_number(r.work.mean_created, p);
  j["mean_entropy"] = json_number(r.mean_entropy, p);
  j["kl_classical"] = json_number(r.kl_classical, p);
  j["kl_quantum"] = json_number(r.kl_quantum, p);
  j["crooks_dev"] = json_number(r.crooks_dev, p);
  j["leakage"] = json_number(r.leakage(), p);
  nlohmann::ordered_json flags = nlohmann::ordered_json::object();
  for (const auto& check : r.checks) flags[check.name] = std::string(to_string(check.status));
  j["flags"] = flags;

  j["config"] = config_json(r.config);
  nlohmann::ordered_json d;
  d["mean_initial"] = json_number(r.work.mean_initial, p);
  d["mean_created_closed_form"] = json_number(r.closed_form_created, p);
  d["adiabatic_temperature"] =
      r.work.adiabatic_temperature > 0.0 ? json_number(r.work.adiabatic_temperature, p) : nlohmann::ordered_json();
  d["truncation_bound"] = json_number(r.work.truncation_bound, p);
  d["weighted_leakage"] = json_number(r.work.weighted_leakage, p);
  d["renorm_defect"] = json_number(r.renorm_defect, p);
  d["floor_mass"] = json_number(r.floor_mass, p);
  d["truncation_budget"] = json_number(r.truncation_budget(), p);
  d["microstate_crooks_residual"] = json_number(r.microstate_residual, p);
  d["integral_fluctuation"] = json_number(r.integral_fluctuation, p);
  d["clipped_weight"] = json_number(r.clipped_weight, p);
  d["oracle_orthogonality_defect"] = json_number(r.orthogonality_defect, p);
  j["diagnostics"] = d;

  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& check : r.checks) {
    nlohmann::ordered_json item;
    item["name"] = check.name;
    item["status"] = std::string(to_string(check.status));
    item["residual"] = check.status == Status::skip ? nlohmann::ordered_json() : json_number(check.residual, p);
    item["tolerance"] = check.status == Status::skip ? nlohmann::ordered_json() : json_number(check.tolerance, p);
    if (!check.detail.empty()) item["detail"] = check.detail;
    checks.push_back(item);
  }
  j["checks"] = checks;
  j["notices"] = r.notices;
  return j;
}

inline std::string to_json(const RunReport& r) { return to_json_object(r).dump(2) + '\n'; }

inline std::string to_json(const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    if (row.report) {
      j = to_json_object(*row.report);
    } else {
      j["scenario"] = std::string(config::to_string(row.config.scenario()));
      j["config"] = config_json(row.config);
    }
    j["error"] = row.error.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(row.error);
    arr.push_back(j);
  }
  return arr.dump(2) + '\n';
}

inline std::string to_json(const VerifyReport& v, int precision) {
  nlohmann::ordered_json j;
  j["passed"] = v.passed();
  j["exit_code"] = v.exit_code();
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const auto& s : v.suites) {
    nlohmann::ordered_json sj;
    sj["label"] = s.label;
    sj["passed"] = s.passed();
    sj["error"] = s.error.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(s.error);
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : s.checks) {
      nlohmann::ordered_json item;
      item["name"] = c.name;
      item["status"] = std::string(to_string(c.status));
      item["residual"] = c.status == Status::skip ? nlohmann::ordered_json() : json_number(c.residual, precision);
      item["tolerance"] = c.status == Status::skip ? nlohmann::ordered_json() : json_number(c.tolerance, precision);
      if (!c.detail.empty()) item["detail"] = c.detail;
      checks.push_back(item);
    }
    sj["checks"] = checks;
    suites.push_back(sj);
  }
  j["suites"] = suites;
  return j.dump(2) + '\n';
}

inline std::string to_csv(const VerifyReport& v, int precision) {
  std::string out = "suite,name,status,residual,tolerance,detail\n";
  for (const auto& s : v.suites) {
    for (const auto& c : s.checks) {
      const bool skip = c.status == Status::skip;
      out += detail::join_row({s.label, c.name, std::string(to_string(c.status)),
                               skip ? std::string{} : format_number(c.residual, precision),
                               skip ? std::string{} : format_number(c.tolerance, precision), c.detail});
    }
    if (!s.error.empty() && s.error_code != exit_numeric) {
      out += detail::join_row({s.label, "error", "fail", {}, {}, s.error});
    }
  }
  return out;
}

}  // namespace cosmoflux::report
