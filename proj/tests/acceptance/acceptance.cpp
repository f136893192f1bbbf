// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-cosmoflux-cli> <configs-dir>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cosmoflux/cosmoflux.hpp"

using namespace cosmoflux;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fixed(double v, int digits = 9) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Canonical configuration: tanh z = 0.5, ω = 1, ω̃ = 2, T = 1, cutoff 40, tolerance 1e-8.
struct Canonical {
  fock::SqueezeParameter z = fock::SqueezeParameter::from_tanh(0.5);
  double omega = 1.0, omega_out = 2.0, temperature = 1.0;
  fock::TruncationSpec spec{40, 1e-8};
  fock::TransitionKernel kernel = fock::transition_kernel(z, spec);
  thermo::ThermalDistribution thermal = thermo::thermal_distribution(temperature, omega, spec);
  thermo::WorkReport work = thermo::work_report(kernel, thermal, omega, omega_out);
  fluctuation::ProcessJoint fwd = fluctuation::forward_joint(kernel, thermal);
  fluctuation::ProcessJoint rev = fluctuation::reverse_joint(kernel, thermal);
  fluctuation::EntropyDistributions dist =
      fluctuation::entropy_distributions(fwd, rev, omega_out, work.adiabatic_temperature);
};

const Canonical& canonical() {
  static const Canonical c;
  return c;
}

// Values frozen from a 40-digit evaluation of the closed forms at the canonical point.
constexpr double canonical_mean_work = 5.049224632056857;
constexpr double canonical_adiabatic_work = 2.163953413738653;
constexpr double canonical_friction = 2.885271218318204;
constexpr double canonical_entropy = 1.442635609159102;

Outcome c1_oracle() {
  double worst_jacobi = 0.0, worst_series = 0.0;
  for (double zv : {0.25, 0.5493, 1.0}) {
    const fock::SqueezeParameter z(zv);
    // Basis padded past index 12 so the truncated exponential is exact there.
    const fock::TruncationSpec oracle_spec(std::max(40, 14 + fock::vacuum_cutoff(z, 1e-24)));
    const auto s = fock::squeeze_operator_oracle_sectors(z, oracle_spec);
    for (int ia = 0; ia <= 12; ++ia)
      for (int ib = 0; ib <= 12; ++ib)
        for (int fa = 0; fa <= 12; ++fa)
          for (int fb = 0; fb <= 12; ++fb) {
            const fock::JointFockIndex i{ia, ib}, f{fa, fb};
            const double oracle = s(f, i);
            worst_jacobi = std::max(worst_jacobi, std::abs(fock::squeeze_amplitude(z, i, f) - oracle));
            worst_series = std::max(worst_series, std::abs(fock::squeeze_amplitude_series(z, i, f) - oracle));
          }
  }
  return {worst_jacobi <= 1e-10 && worst_series <= 1e-10,
          "max |analytic - expm| = " + sci(worst_jacobi) + " (Jacobi), " + sci(worst_series) +
              " (series); tol 1e-10"};
}

Outcome c2_vacuum() {
  double worst = 0.0;
  for (double zv : {0.25, std::atanh(0.5), 1.0}) {
    const fock::SqueezeParameter z(zv);
    const auto k = fock::transition_kernel(z, fock::TruncationSpec(60, 1e-8));
    const double t = z.tanh(), c = z.alpha();
    for (int n = 0; n <= 10; ++n) {
      const double expected = std::pow(t, 2 * n) / (c * c);
      worst = std::max(worst, std::abs(k.probability({n, n}, {0, 0}) - expected) / expected);
    }
  }
  const auto& k = canonical().kernel;
  const std::array<double, 4> masses{0.75, 0.1875, 0.046875, 0.01171875};
  double worst_masses = 0.0;
  for (int n = 0; n < 4; ++n) {
    worst_masses = std::max(worst_masses, std::abs(k.probability({n, n}, {0, 0}) - masses[n]) / masses[n]);
  }
  return {worst <= 1e-9 && worst_masses <= 1e-9,
          "max rel dev " + sci(worst) + "; first four masses at tanh z=0.5 rel dev " + sci(worst_masses) +
              "; tol 1e-9"};
}

Outcome c3_crooks() {
  const auto& c = canonical();
  const double micro = fluctuation::microstate_crooks_residual(c.fwd, c.rev, c.omega_out, c.work.adiabatic_temperature);
  const auto crooks = fluctuation::crooks_deviation(c.dist.expansion, c.dist.contraction);
  return {micro <= 1e-10 && crooks.deviation <= 1e-8,
          "microstate " + sci(micro) + " (tol 1e-10); distribution " + sci(crooks.deviation) + " over " +
              std::to_string(crooks.points) + " points (tol 1e-8)"};
}

Outcome c4_kl() {
  const auto& c = canonical();
  const auto kl = fluctuation::mean_entropy_and_kl(c.dist.expansion, c.dist.contraction, Enforce::no);
  return {kl.residual <= 1e-8 && kl.mean_entropy >= -1e-10,
          "<s> = " + fixed(kl.mean_entropy) + ", KL = " + fixed(kl.kl) + ", |diff| " + sci(kl.residual) +
              " (tol 1e-8)"};
}

Outcome c5_central() {
  const auto& c = canonical();
  const double s = c.dist.expansion.mean();
  const auto rec = fluctuation::entropy_friction_identity(c.work, s, c.omega_out, Enforce::no);
  const double value_dev = std::max(std::abs(s - canonical_entropy), std::abs(c.work.inner_friction - canonical_friction));
  return {rec.residual_friction <= 1e-6 && rec.residual_created <= 1e-6 && value_dev <= 1e-6,
          "<s> = " + fixed(s) + ", W_fric/T_ad = " + fixed(rec.friction_over_temperature) + " (dev " +
              sci(rec.residual_friction) + "), (w~/T_ad)<n_c> dev " + sci(rec.residual_created) +
              "; W_fric = " + fixed(c.work.inner_friction) + "; tol 1e-6"};
}

Outcome c6_quantum() {
  const auto& c = canonical();
  const auto s = fock::squeeze_operator_oracle_sectors(c.z, c.spec);
  const auto q = fluctuation::quantum_relative_entropy(c.thermal, s);
  const auto chk = fluctuation::check_relative_entropy_friction(q.relative_entropy, c.work.adiabatic_temperature,
                                                                c.work.inner_friction, Enforce::no);
  return {chk.passed(), "T_ad K = " + fixed(chk.scaled) + " vs W_fric " + fixed(c.work.inner_friction) +
                            ", rel dev " + sci(chk.residual) + " (tol 1e-5)"};
}

Outcome c7_work() {
  const auto& c = canonical();
  const double dw = std::abs(c.work.mean_work - canonical_mean_work);
  const double dad = std::abs(c.work.adiabatic_work - canonical_adiabatic_work);
  // z = 0: the kernel is the identity, so ⟨W⟩ = W_ad.
  const fock::SqueezeParameter zero(0.0);
  const auto k0 = fock::transition_kernel(zero, c.spec);
  double static_dev = 0.0;
  for (double wt : {1.0, 2.0, 3.0}) {
    const auto w0 = thermo::work_report(k0, c.thermal, c.omega, wt);
    static_dev = std::max(static_dev, std::abs(w0.mean_work - w0.adiabatic_work));
  }
  return {dw <= 1e-6 && dad <= 1e-6 && static_dev <= 1e-12,
          "<W> = " + fixed(c.work.mean_work) + " (dev " + sci(dw) + "), W_ad = " + fixed(c.work.adiabatic_work) +
              " (dev " + sci(dad) + "), z=0 |<W> - W_ad| = " + sci(static_dev) + " (tol 1e-12)"};
}

Outcome c8_created() {
  double worst = 0.0;
  int points = 0, max_cutoff = 0;
  for (int iz = 0; iz <= 10; ++iz) {
    const fock::SqueezeParameter z(0.1 * iz);
    for (double t : {0.1, 0.25, 0.5, 1.0, 1.5, 2.0}) {
      const int n = thermo::suggest_cutoff(z, t, 1.0, 1e-10);
      max_cutoff = std::max(max_cutoff, n);
      const fock::TruncationSpec spec(n, 1e-8);
      const auto k = fock::transition_kernel(z, spec);
      const auto th = thermo::thermal_distribution(t, 1.0, spec);
      const double nc = thermo::mean_created(k, th);
      worst = std::max(worst, std::abs(nc - thermo::mean_created_closed_form(z, t, 1.0)));
      ++points;
    }
  }
  return {worst <= 1e-6, std::to_string(points) + " points, cutoff <= " + std::to_string(max_cutoff) +
                             ", max |<n_c> - 2 sinh^2 z (<n_i>+1)| = " + sci(worst) + " (tol 1e-6)"};
}

Outcome c9_limits() {
  using spacetime::CosmologyParams;
  const double massless = spacetime::cosmology_channel({1.0, 1.0, 0.0, 1.0}).z.value();

  bool monotone = true;
  double previous = std::numeric_limits<double>::infinity();
  for (double sigma : {1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01}) {
    const double z = spacetime::cosmology_channel({1.0, sigma, 1.0, 1.0}).z.value();
    monotone = monotone && z < previous;
    previous = z;
  }
  const bool vanishing = previous < 1e-100;

  const auto [w, wt] = spacetime::asymptotic_frequencies({1.0, 1e6, 1.0, 1.0});
  const double sudden =
      std::abs(spacetime::squeeze_from_cosmology(w, wt, 1e6).tanh() - (wt - w) / (wt + w));

  // 0.009895078074440641 from a 50-digit evaluation; the three-figure value 0.009899 is
  // quoted alongside and accepted at the 1e-3 relative level.
  const double z = spacetime::cosmology_channel({1.0, 1.0, 1.0, 1.0}).z.value();
  const double oracle_dev = std::abs(z - 0.009895078074440641);
  const double quoted_dev = std::abs(z - 0.009899) / 0.009899;

  return {massless == 0.0 && monotone && vanishing && sudden <= 1e-9 && oracle_dev <= 1e-12 && quoted_dev <= 1e-3,
          "m=0 z = " + sci(massless) + "; sigma->0 monotone " + (monotone ? "yes" : "no") + ", z(0.01) = " +
              sci(previous) + "; sudden-limit dev " + sci(sudden) + " (tol 1e-9); cosmology z = " +
              fixed(z, 10) + " (oracle dev " + sci(oracle_dev) + ")"};
}

Outcome c10_second_law() {
  double worst_friction_margin = std::numeric_limits<double>::infinity();
  double min_entropy = std::numeric_limits<double>::infinity();
  int points = 0, capped = 0;
  bool ok = true;
  for (int iz = 0; iz <= 6; ++iz) {
    const fock::SqueezeParameter z(0.2 * iz);
    for (double t : {0.1, 0.3, 1.0, 2.0, 5.0}) {
      for (double wt : {1.0, 2.0, 3.0}) {
        const int wanted = thermo::suggest_cutoff(z, t, 1.0, 1e-8);
        const bool at_cap = wanted >= fock::max_cutoff;
        capped += at_cap;
        // Points the basis cannot hold to 1e-8 run at the largest basis with their
        // leakage folded into the truncation bound.
        const fock::TruncationSpec spec(wanted, at_cap ? 1e-2 : 1e-8);
        const auto k = fock::transition_kernel(z, spec);
        const auto th = thermo::thermal_distribution(t, 1.0, spec);
        const auto work = thermo::work_report(k, th, 1.0, wt, Enforce::no);
        const auto dist = fluctuation::entropy_distributions(fluctuation::forward_joint(k, th),
                                                             fluctuation::reverse_joint(k, th), wt,
                                                             work.adiabatic_temperature);
        const double s = dist.expansion.mean();
        worst_friction_margin = std::min(worst_friction_margin, work.inner_friction + work.truncation_bound);
        min_entropy = std::min(min_entropy, s);
        ok = ok && work.inner_friction >= -work.truncation_bound && s >= -1e-10;
        ++points;
      }
    }
  }
  return {ok, std::to_string(points) + " points (" + std::to_string(capped) + " at cutoff " +
                  std::to_string(fock::max_cutoff) + "); min (W_fric + bound) = " + sci(worst_friction_margin) +
                  ", min <s> = " + sci(min_entropy)};
}

Outcome c11_integral() {
  const double ifr = fluctuation::integral_fluctuation(canonical().dist.expansion);
  return {std::abs(ifr - 1.0) <= 1e-6, "sum P_E(s) e^-s = " + fixed(ifr, 12) + " (tol 1e-6)"};
}

struct Captured {
  int status = -1;
  std::string out;
};

Captured run(const std::string& command) {
  Captured c;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return c;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return c;
}

Outcome c12_cli(const std::string& cli, const std::string& configs) {
  const std::string canonical_cfg = configs + "/canonical.cfg";
  const auto a = run(cli + " simulate --quiet --config " + canonical_cfg);
  const auto b = run(cli + " simulate --quiet --config " + canonical_cfg);
  const bool identical = a.status == 0 && !a.out.empty() && a.out == b.out;
  const auto ok = run(cli + " verify --quiet --config " + canonical_cfg);
  const auto leaky = run(cli + " verify --quiet --config " + canonical_cfg + " --cutoff 8 --z 1.2");
  return {identical && ok.status == 0 && leaky.status == 3,
          std::string("simulate x2 byte-identical: ") + (identical ? "yes" : "no") + " (" +
              std::to_string(a.out.size()) + " bytes); verify canonical exit " + std::to_string(ok.status) +
              " (want 0); verify cutoff 8, z=1.2 exit " + std::to_string(leaky.status) + " (want 3)"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <cosmoflux-cli> <configs-dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1], configs = argv[2];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 oracle equivalence", c1_oracle},
      {"C2 vacuum law", c2_vacuum},
      {"C3 Crooks identity", c3_crooks},
      {"C4 KL identity", c4_kl},
      {"C5 entropy = friction / T_ad", c5_central},
      {"C6 quantum relative entropy", c6_quantum},
      {"C7 work decomposition", c7_work},
      {"C8 closed-form pair creation", c8_created},
      {"C9 scenario limits", c9_limits},
      {"C10 second law sweep", c10_second_law},
      {"C11 integral fluctuation relation", c11_integral},
      {"C12 CLI determinism and exit codes", [&] { return c12_cli(cli, configs); }},
  };

  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu/%zu criteria passed in %.1f s\n", criteria.size() - failed, criteria.size(), secs);
  return failed ? 1 : 0;
}
