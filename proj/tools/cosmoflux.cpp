// cosmoflux command-line front end with simulate, sweep and verify subcommands.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "cosmoflux/cosmoflux.hpp"

namespace {

using namespace cosmoflux;

struct CommonOptions {
  std::string config_path;
  std::string output;
  bool quiet = false;
};

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_path, "Configuration file (key = value per line)");
  sub->add_option("--output", opts.output, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--quiet", opts.quiet, "Suppress progress messages");
  sub->allow_extras();
  sub->footer("Any configuration key can be overridden with --key value (e.g. --temperature 2 --cutoff 60).");
}

// `--key value` / `--key=value` pairs left over after the fixed options.
config::Entries overrides(const std::vector<std::string>& extras) {
  config::Entries out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& token = extras[i];
    if (token.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + token + "'");
    std::string key = token.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw ConfigError("option '--" + key + "' needs a value");
      value = extras[++i];
    }
    if (key == "output") throw ConfigError("--output takes json or csv");
    config::set_entry(out, key, value);
  }
  return out;
}

config::Entries gather(const CommonOptions& opts, const std::vector<std::string>& extras) {
  config::Entries entries = opts.config_path.empty() ? config::Entries{} : config::load_entries(opts.config_path);
  for (const auto& [key, value] : overrides(extras)) entries[key] = value;
  if (!opts.output.empty()) entries["output"] = opts.output;
  return entries;
}

void note(const CommonOptions& opts, const std::string& text) {
  if (!opts.quiet) std::cerr << text << '\n';
}

int simulate(const CommonOptions& opts, const std::vector<std::string>& extras) {
  const config::RunConfig cfg = config::run_config_from(gather(opts, extras));
  note(opts, "simulating " + std::string(config::to_string(cfg.scenario())) + " at cutoff " +
                 std::to_string(cfg.cutoff));
  const auto r = report::run_simulation(cfg);
  std::cout << (cfg.output == config::OutputFormat::json ? report::to_json(r) : report::to_csv(r));
  for (const auto& n : r.notices) note(opts, "note: " + n);
  if (!r.passed()) {
    for (const auto& c : r.checks) {
      if (c.status == report::Status::fail) note(opts, "FAILED " + c.name);
    }
    return report::exit_verification;
  }
  return report::exit_ok;
}

int sweep(const CommonOptions& opts, const std::vector<std::string>& extras) {
  const auto s = config::sweep_config_from(gather(opts, extras));
  const auto count = config::sweep_values(s).size();
  const unsigned threads = report::sweep_threads(count);
  note(opts, "sweeping " + std::string(config::to_string(s.axis)) + " over " + std::to_string(count) + " points on " +
                 std::to_string(threads) + " thread(s)");
  const auto rows = report::run_sweep(s, threads, [&](std::size_t done, std::size_t total) {
    if (!opts.quiet) std::cerr << "\r" << done << "/" << total << std::flush;
  });
  if (!opts.quiet) std::cerr << '\n';
  std::cout << (s.base.output == config::OutputFormat::json ? report::to_json(rows) : report::to_csv(rows));
  std::size_t failed = 0;
  for (const auto& row : rows) failed += row.report ? 0 : 1;
  if (failed) note(opts, std::to_string(failed) + " row(s) failed; see the error column");
  return report::exit_ok;
}

int verify(const CommonOptions& opts, const std::vector<std::string>& extras) {
  const config::RunConfig cfg = config::run_config_from(gather(opts, extras));
  const auto v = report::verify_invariants(cfg);
  std::cout << (cfg.output == config::OutputFormat::json ? report::to_json(v, cfg.precision)
                                                          : report::to_csv(v, cfg.precision));
  for (const auto& s : v.suites) {
    std::size_t fails = 0;
    for (const auto& c : s.checks) fails += c.status == report::Status::fail;
    std::string line = s.label + ": " + (s.passed() ? "pass" : "FAIL");
    if (fails) line += " (" + std::to_string(fails) + " failed)";
    if (!s.error.empty()) line += " - " + s.error;
    note(opts, line);
  }
  return v.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Work, pair creation and entropy production for two-mode squeeze channels"};
  app.require_subcommand(1);
  CommonOptions opts;
  auto* sim = app.add_subcommand("simulate", "Run one configuration and print its report");
  auto* swp = app.add_subcommand("sweep", "Run a parameter sweep (rows in grid order)");
  auto* ver = app.add_subcommand("verify", "Check every invariant at the configured and reference points");
  for (auto* sub : {sim, swp, ver}) add_common(sub, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? report::exit_ok : report::exit_config;
  }

  try {
    if (*sim) return simulate(opts, sim->remaining());
    if (*swp) return sweep(opts, swp->remaining());
    return verify(opts, ver->remaining());
  } catch (const LeakageError& e) {
    std::cerr << "leakage error: " << e.what() << '\n';
    return report::exit_numeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return report::exit_code_for(e);
  }
}
