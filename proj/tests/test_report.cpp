#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>

#include "cosmoflux/report.hpp"

using namespace cosmoflux;
using namespace cosmoflux::report;
using config::parse_run_config;

namespace {

const std::string canonical_text =
    "scenario = direct-z\nz = 0.54930614433405489\nomega_in = 1\nomega_out = 2\ntemperature = 1\n";

std::pair<int, std::string> run_cli(const std::string& args) {
  std::string out;
  FILE* pipe = popen((std::string(COSMOFLUX_CLI) + " " + args + " 2>/dev/null").c_str(), "r");
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::size_t count(const std::string& s, char c) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), c)); }

}  // namespace

TEST(Simulation, CanonicalValues) {
  const auto r = run_simulation(parse_run_config(canonical_text));
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.work.mean_work, 5.049224632056857, 1e-7);
  EXPECT_NEAR(r.work.inner_friction, 2.885271218318204, 1e-7);
  EXPECT_NEAR(*r.mean_entropy, 1.442635609159102, 1e-7);
  EXPECT_NEAR(*r.kl_quantum, 1.442635609159102, 1e-6);
  EXPECT_LE(*r.crooks_dev, 1e-8);
  EXPECT_TRUE(r.notices.empty());
}

TEST(Simulation, StaticPointIsZero) {
  const auto r = run_simulation(parse_run_config("scenario = direct-z\ntemperature = 1\n"));
  EXPECT_TRUE(r.passed());
  for (double v : {r.work.mean_work, r.work.inner_friction, r.work.mean_created, *r.mean_entropy, *r.kl_classical,
                   *r.kl_quantum, *r.crooks_dev})
    EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Simulation, CosmologyPoint) {
  const auto r = run_simulation(parse_run_config("scenario = cosmology\nk = 1\nm = 1\nepsilon = 1\nsigma = 1\ntemperature = 1\n"));
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.channel.z.value(), 0.009895078074440641, 1e-14);
  // ⟨n_c⟩ = 2 sinh² z (⟨n_i⟩ + 1) at ω = √2, T = 1.
  EXPECT_NEAR(r.work.mean_created, 3.216367239832e-4, 1e-12);
}

TEST(Simulation, VacuumAndHorizonNotices) {
  const auto v =
      run_simulation(parse_run_config("scenario = direct-z\nz = 0.5\nomega_in = 1\nomega_out = 2\ntemperature = 0\n"));
  EXPECT_FALSE(v.mean_entropy.has_value());
  EXPECT_FALSE(v.notices.empty());
  EXPECT_TRUE(v.passed());
  EXPECT_GT(v.work.mean_created, 0.0);
  const auto u = run_simulation(parse_run_config("scenario = unruh\nacceleration = 1\nomega = 1\ntemperature = 1\n"));
  ASSERT_FALSE(u.notices.empty());
  EXPECT_EQ(u.notices[0].rfind("formal_extension", 0), 0u);
}

TEST(Simulation, LeakageThrows) {
  EXPECT_THROW(run_simulation(parse_run_config("scenario = direct-z\nz = 1.2\ntemperature = 1\ncutoff = 8\n")),
               LeakageError);
}

TEST(Serialization, DeterministicAndPrecise) {
  const auto cfg = parse_run_config(canonical_text);
  const auto a = to_json(run_simulation(cfg));
  EXPECT_EQ(a, to_json(run_simulation(cfg)));
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["mean_work"].get<double>(), 5.04922461167);
  EXPECT_TRUE(j["k"].is_null());
  EXPECT_EQ(j["flags"]["crooks_distribution"], "pass");
  EXPECT_EQ(config::parse_run_config(canonical_text).precision, j["config"]["precision"].get<int>());
}

TEST(Serialization, CsvShape) {
  const auto csv = to_csv(run_simulation(parse_run_config(canonical_text)));
  const auto header_end = csv.find('\n');
  EXPECT_EQ(csv.substr(0, header_end),
            "scenario,k,m,epsilon,sigma,T,cutoff,z,omega_in,omega_out,mean_work,adiabatic_work,inner_friction,"
            "mean_created,mean_entropy,kl_classical,kl_quantum,crooks_dev,leakage,flags");
  const std::string row = csv.substr(header_end + 1);
  EXPECT_EQ(count(row, ','), 19u);
  EXPECT_NE(row.find(",5.04922461167,"), std::string::npos);
}

TEST(Serialization, NumberFormatting) {
  EXPECT_EQ(format_number(-0.0, 12), "0");
  EXPECT_EQ(format_number(1.0 / 3.0, 5), "0.33333");
  EXPECT_EQ(format_number(1e-20, 3), "1e-20");
  EXPECT_EQ(format_number(NAN, 3), "");
  EXPECT_EQ(format_number(std::optional<double>{}, 3), "");
}

TEST(Sweep, GridOrderAndSingleRunConsistency) {
  const auto s = config::parse_sweep_config(
      "scenario = cosmology\nk = 1\nepsilon = 1\nsigma = 1\ntemperature = 1\nsweep_axis = mass\n"
      "sweep_values = 1, 0, 0.5\n");
  const auto rows = run_sweep(s, 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].value, 1.0);
  EXPECT_EQ(rows[1].value, 0.0);
  EXPECT_EQ(rows[1].report->channel.z.value(), 0.0);
  EXPECT_NEAR(rows[1].report->work.inner_friction, 0.0, 1e-12);
  for (const auto& row : rows) {
    ASSERT_TRUE(row.report);
    EXPECT_EQ(to_json(*row.report), to_json(run_simulation(row.config)));
  }
  EXPECT_EQ(to_json(rows), to_json(run_sweep(s, 1)));
}

TEST(Sweep, SigmaLogGridMonotone) {
  const auto s = config::parse_sweep_config(
      "scenario = cosmology\nk = 1\nm = 1\nepsilon = 1\ntemperature = 1\nsweep_axis = sigma\nsweep_min = 0.01\n"
      "sweep_max = 100\nsweep_count = 9\nsweep_spacing = log\n");
  const auto rows = run_sweep(s);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].report->channel.z.value(), rows[i - 1].report->channel.z.value());
}

TEST(Sweep, TemperatureRowsTrackCreation) {
  const auto s = config::parse_sweep_config(canonical_text.substr(0, canonical_text.find("temperature")) +
                                            "temperature = 1\ncutoff = 80\nsweep_axis = temperature\nsweep_values = 0.5, 1, 2\n");
  const auto rows = run_sweep(s);
  for (const auto& row : rows) {
    ASSERT_TRUE(row.report) << row.error;
    // ⟨s⟩ = (ω/T)⟨n_c⟩ with ω = 1.
    EXPECT_NEAR(*row.report->mean_entropy, row.report->work.mean_created / row.value, 1e-6);
  }
  EXPECT_LT(rows[0].report->work.mean_created, rows[2].report->work.mean_created);
}

TEST(Sweep, ErrorsStayInTheirRow) {
  const auto s = config::parse_sweep_config(
      "scenario = direct-z\nz = 1.0\nomega_in = 1\nomega_out = 2\ntemperature = 1\ncutoff = 60\n"
      "sweep_axis = temperature\nsweep_values = 0.2, 3\n");
  const auto rows = run_sweep(s);
  EXPECT_TRUE(rows[0].report.has_value());
  EXPECT_FALSE(rows[1].report.has_value());
  EXPECT_EQ(rows[1].error_code, exit_numeric);
  EXPECT_NE(rows[1].error.find("cutoff"), std::string::npos);
  const auto csv = to_csv(rows);
  EXPECT_NE(csv.find(",error\n"), std::string::npos);
  const auto json = nlohmann::json::parse(to_json(rows));
  EXPECT_TRUE(json[0]["error"].is_null());
  EXPECT_TRUE(json[1]["error"].is_string());
}

TEST(Verify, CanonicalPasses) {
  const auto v = verify_invariants(parse_run_config(canonical_text));
  EXPECT_EQ(v.exit_code(), exit_ok);
  ASSERT_EQ(v.suites.size(), 3u);
  for (const auto& s : v.suites) EXPECT_TRUE(s.passed()) << s.label << ": " << s.error;
}

TEST(Verify, LeakageReportedNotThrown) {
  const auto v = verify_invariants(parse_run_config("scenario = direct-z\nz = 1.2\ntemperature = 1\ncutoff = 8\n"));
  EXPECT_EQ(v.exit_code(), exit_numeric);
  EXPECT_FALSE(v.suites[0].passed());
  EXPECT_TRUE(v.suites[1].passed());
}

TEST(Cli, ExitCodesAndOverrides) {
  const std::string cfg = std::string(COSMOFLUX_CONFIGS) + "/canonical.cfg";
  const auto a = run_cli("simulate --quiet --config " + cfg);
  EXPECT_EQ(a.first, 0);
  EXPECT_EQ(a, run_cli("simulate --quiet --config " + cfg));
  EXPECT_EQ(run_cli("simulate --quiet --config " + cfg + " --nonsense 1").first, exit_config);
  EXPECT_EQ(run_cli("simulate --quiet --config /nonexistent.cfg").first, exit_config);
  EXPECT_EQ(run_cli("simulate --quiet --config " + cfg + " --cutoff 8 --z 1.2").first, exit_numeric);
  EXPECT_EQ(run_cli("verify --quiet --config " + cfg).first, exit_ok);
  EXPECT_EQ(run_cli("verify --quiet --config " + cfg + " --cutoff=8 --z=1.2").first, exit_numeric);
  const auto csv = run_cli("simulate --quiet --output csv --config " + cfg + " --temperature 0.5");
  EXPECT_EQ(csv.first, 0);
  EXPECT_NE(csv.second.find("direct-z,,,,,0.5,40,"), std::string::npos);
  EXPECT_EQ(run_cli("bogus").first, exit_config);
}
