// Library walkthrough at tanh z = 0.5, ω = 1, ω̃ = 2, T = 1: work split, entropy
// production and the Crooks check, printed as plain text.

#include <cmath>
#include <cstdio>

#include "cosmoflux/cosmoflux.hpp"

int main() {
  using namespace cosmoflux;

  const fock::TruncationSpec spec(40, 1e-8);
  const auto z = fock::SqueezeParameter::from_tanh(0.5);
  const double omega = 1.0, omega_out = 2.0, temperature = 1.0;

  const auto kernel = fock::transition_kernel(z, spec);
  const auto thermal = thermo::thermal_distribution(temperature, omega, spec);
  const auto work = thermo::work_report(kernel, thermal, omega, omega_out);

  std::printf("z = %.12g\n", z.value());
  std::printf("<W>        = %.10f\n", work.mean_work);
  std::printf("W_ad       = %.10f\n", work.adiabatic_work);
  std::printf("W_fric     = %.10f\n", work.inner_friction);
  std::printf("<n_c>      = %.10f (closed form %.10f)\n", work.mean_created,
              thermo::mean_created_closed_form(z, temperature, omega));

  const auto fwd = fluctuation::forward_joint(kernel, thermal);
  const auto rev = fluctuation::reverse_joint(kernel, thermal);
  const auto dist = fluctuation::entropy_distributions(fwd, rev, omega_out, work.adiabatic_temperature);
  const auto kl = fluctuation::mean_entropy_and_kl(dist.expansion, dist.contraction);
  const auto crooks = fluctuation::crooks_deviation(dist.expansion, dist.contraction);

  std::printf("<s>        = %.10f\n", kl.mean_entropy);
  std::printf("W_fric/T_ad= %.10f\n", work.inner_friction / work.adiabatic_temperature);
  std::printf("Crooks dev = %.3g over %zu points\n", crooks.deviation, crooks.points);

  std::printf("\n   s      P_E(s)        P_C(-s)       ratio/e^s\n");
  for (std::size_t i = 0; i < dist.expansion.size(); ++i) {
    const double s = dist.expansion.support()[i];
    const double pe = dist.expansion.masses()[i];
    if (std::abs(s) > 8.0) continue;
    const double pc = dist.contraction.mass_at(-s);
    std::printf("%5.1f  %.6e  %.6e  %.12f\n", s, pe, pc, pe / pc / std::exp(s));
  }
}
