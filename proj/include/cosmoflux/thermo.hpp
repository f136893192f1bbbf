// thermo.hpp: thermal initial states of H = ω(a†a + b†b + 1) and the work
// bookkeeping ⟨W⟩ = W_ad + W_fric for one squeeze of the mode pair.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cosmoflux/errors.hpp"
#include "cosmoflux/fock.hpp"

namespace cosmoflux::thermo {

using fock::JointFockIndex;
using fock::SqueezeParameter;
using fock::TransitionKernel;
using fock::TruncationSpec;

// Gibbs weights p(n) = (1−x)² x^{n_a+n_b}, x = e^{−ω/T}, renormalised on the truncated
// basis. T = 0 is the vacuum path: a point mass on (0, 0).
class ThermalDistribution {
 public:
  ThermalDistribution(double temperature, double omega, TruncationSpec spec, std::vector<double> weights,
                      std::vector<double> log_weights, double renorm_defect)
      : data_(std::make_shared<const Data>(Data{temperature, omega, spec, std::move(weights),
                                                std::move(log_weights), renorm_defect})) {}

  double temperature() const noexcept { return data_->temperature; }
  double omega() const noexcept { return data_->omega; }
  const TruncationSpec& truncation() const noexcept { return data_->spec; }
  int cutoff() const noexcept { return data_->spec.cutoff(); }
  bool is_vacuum() const noexcept { return data_->temperature == 0.0; }
  double renorm_defect() const noexcept { return data_->renorm_defect; }

  double weight(JointFockIndex n) const { return data_->weights.at(fock::linear_index(n, data_->spec)); }
  // −∞ where the weight is zero.
  double log_weight(JointFockIndex n) const { return data_->log_weights.at(fock::linear_index(n, data_->spec)); }
  std::span<const double> weights() const noexcept { return data_->weights; }

  double mean_total() const {
    double mean = 0.0;
    for (std::size_t i = 0; i < data_->weights.size(); ++i) {
      mean += fock::from_linear_index(i, data_->spec).total() * data_->weights[i];
    }
    return mean;
  }

 private:
  struct Data {
    double temperature;
    double omega;
    TruncationSpec spec;
    std::vector<double> weights;
    std::vector<double> log_weights;
    double renorm_defect;
  };
  std::shared_ptr<const Data> data_;
};

inline ThermalDistribution vacuum_distribution(double omega, const TruncationSpec& spec) {
  if (!(std::isfinite(omega) && omega > 0.0)) throw ConfigError("omega must be > 0");
  std::vector<double> weights(spec.dimension(), 0.0);
  std::vector<double> logs(spec.dimension(), -std::numeric_limits<double>::infinity());
  weights[0] = 1.0;
  logs[0] = 0.0;
  return ThermalDistribution(0.0, omega, spec, std::move(weights), std::move(logs), 0.0);
}

// ⟨n_a + n_b⟩ of the untruncated Gibbs state: 2x/(1−x).
inline double mean_occupation_closed_form(double temperature, double omega) {
  if (temperature == 0.0) return 0.0;
  const double x = std::exp(-omega / temperature);
  return 2.0 * x / (1.0 - x);
}

// Cutoff whose estimated thermal tail and squeezed-state leakage both stay below
// tolerance/4. Each final mode marginal is geometric with mean (n̄+½)cosh 2z − ½.
inline int suggest_cutoff(SqueezeParameter z, double temperature, double omega, double tolerance) {
  const double x = temperature > 0.0 ? std::exp(-omega / temperature) : 0.0;
  const double per_mode = x / (1.0 - x);
  const double final_mean = (per_mode + 0.5) * std::cosh(2.0 * z.value()) - 0.5;
  const double q = final_mean / (final_mean + 1.0);
  const double budget = tolerance / 4.0;
  for (int n = 8; n <= fock::max_cutoff; ++n) {
    const double thermal_tail = 2.0 * std::pow(x, n + 1);
    const double squeezed_tail = 2.0 * std::pow(q, n + 1);
    if (thermal_tail <= budget && squeezed_tail <= budget) return n;
  }
  return fock::max_cutoff;
}

inline ThermalDistribution thermal_distribution(double temperature, double omega, const TruncationSpec& spec) {
  if (!(std::isfinite(omega) && omega > 0.0)) throw ConfigError("omega must be > 0");
  if (!(std::isfinite(temperature) && temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (temperature == 0.0) return vacuum_distribution(omega, spec);

  const double beta_omega = omega / temperature;
  const double x = std::exp(-beta_omega);
  // 1 − Σ_{n_a,n_b ≤ N} (1−x)² x^{n_a+n_b} = x^{N+1}(2 − x^{N+1}).
  const double tail = std::pow(x, spec.cutoff() + 1);
  const double defect = tail * (2.0 - tail);
  if (defect > spec.leakage_tolerance()) {
    const int suggested = suggest_cutoff(SqueezeParameter(0.0), temperature, omega, spec.leakage_tolerance());
    throw LeakageError("thermal tail beyond cutoff " + std::to_string(spec.cutoff()) + " is " +
                           format_value(defect) + "; try cutoff >= " + std::to_string(suggested),
                       defect, suggested);
  }
  const double log_norm = 2.0 * std::log1p(-x) - std::log1p(-defect);
  std::vector<double> weights(spec.dimension());
  std::vector<double> logs(spec.dimension());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    logs[i] = log_norm - beta_omega * fock::from_linear_index(i, spec).total();
    weights[i] = std::exp(logs[i]);
  }
  return ThermalDistribution(temperature, omega, spec, std::move(weights), std::move(logs), defect);
}

// T̃_ad with T̃_ad/ω̃ = T/ω.
inline double adiabatic_temperature(double temperature, double omega_in, double omega_out) {
  return temperature * omega_out / omega_in;
}

// Σ_n p_th(n) (1 − Σ_m p(m|n)).
inline double weighted_leakage(const TransitionKernel& kernel, const ThermalDistribution& thermal) {
  const auto leak = kernel.leakage();
  const auto w = thermal.weights();
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) total += w[i] * leak[i];
  return total;
}

namespace detail {

inline void require_same_space(const TransitionKernel& kernel, const ThermalDistribution& thermal) {
  if (kernel.cutoff() != thermal.cutoff()) throw ConfigError("kernel and thermal state use different cutoffs");
}

inline void require_leakage_budget(const TransitionKernel& kernel, const ThermalDistribution& thermal) {
  const double leaked = weighted_leakage(kernel, thermal);
  const double tol = kernel.truncation().leakage_tolerance();
  if (leaked > tol) {
    const int suggested = suggest_cutoff(kernel.squeeze(), thermal.temperature(), thermal.omega(), tol);
    throw LeakageError("thermally weighted leakage " + format_value(leaked) + " exceeds " +
                           format_value(tol) + " at cutoff " + std::to_string(kernel.cutoff()) +
                           "; try cutoff >= " + std::to_string(suggested),
                       leaked, suggested);
  }
}

}  // namespace detail

struct AverageWork {
  double mean_work = 0.0;      // ⟨W⟩ = ω̃(⟨n_f⟩ + 1) − ω(⟨n_i⟩ + 1)
  double mean_final = 0.0;     // ⟨n_f⟩
  double mean_initial = 0.0;   // ⟨n_i⟩ on the truncated thermal state
  double weighted_leakage = 0.0;
  double truncation_bound = 0.0;
};

// Error allowance for averages taken on the truncated space: the top energy
// (ω̃ + ω)(2N + 2 + n̄) times the lost mass, plus a rounding floor.
inline double truncation_bound(int cutoff, double omega_in, double omega_out, double mean_initial,
                               double leaked_mass, double scale) {
  const double top = (omega_in + omega_out) * (2.0 * cutoff + 2.0 + mean_initial);
  return top * leaked_mass + 1e-12 * std::max(1.0, std::abs(scale));
}

inline AverageWork average_work(const TransitionKernel& kernel, const ThermalDistribution& thermal,
                                double omega_in, double omega_out) {
  detail::require_same_space(kernel, thermal);
  detail::require_leakage_budget(kernel, thermal);
  AverageWork out;
  kernel.for_each_transition([&](JointFockIndex n, JointFockIndex m, double p) {
    out.mean_final += m.total() * p * thermal.weight(n);
  });
  out.mean_initial = thermal.mean_total();
  out.mean_work = omega_out * (out.mean_final + 1.0) - omega_in * (out.mean_initial + 1.0);
  out.weighted_leakage = weighted_leakage(kernel, thermal);
  out.truncation_bound = truncation_bound(kernel.cutoff(), omega_in, omega_out, out.mean_initial,
                                          out.weighted_leakage + thermal.renorm_defect(), out.mean_work);
  return out;
}

// ⟨W⟩_ad = (ω̃ − ω)(⟨n_i⟩ + 1), closed form.
inline double adiabatic_work(double temperature, double omega_in, double omega_out) {
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  return (omega_out - omega_in) * (mean_occupation_closed_form(temperature, omega_in) + 1.0);
}

// ⟨n_c⟩ = Σ (total(m) − total(n)) p(m|n) p_th(n).
inline double mean_created(const TransitionKernel& kernel, const ThermalDistribution& thermal) {
  detail::require_same_space(kernel, thermal);
  double created = 0.0;
  kernel.for_each_transition([&](JointFockIndex n, JointFockIndex m, double p) {
    created += (m.total() - n.total()) * p * thermal.weight(n);
  });
  return created;
}

// ⟨n_c⟩ = 2 sinh² z (⟨n_i⟩ + 1) for the untruncated thermal (or vacuum) state.
inline double mean_created_closed_form(SqueezeParameter z, double temperature, double omega) {
  const double s = std::sinh(z.value());
  return 2.0 * s * s * (mean_occupation_closed_form(temperature, omega) + 1.0);
}

struct InnerFriction {
  double inner_friction = 0.0;  // ⟨W⟩ − ⟨W⟩_ad
  double mean_created = 0.0;
  double residual = 0.0;        // |W_fric − ω̃⟨n_c⟩|
  double tolerance = 0.0;
  bool passed() const noexcept { return residual <= tolerance; }
};

inline InnerFriction inner_friction(const AverageWork& work, double adiabatic, double created, double omega_out,
                                    Enforce enforce = Enforce::yes) {
  InnerFriction out;
  out.inner_friction = work.mean_work - adiabatic;
  out.mean_created = created;
  out.residual = std::abs(out.inner_friction - omega_out * created);
  out.tolerance = work.truncation_bound;
  if (enforce == Enforce::yes && !out.passed()) {
    throw VerificationError("inner friction " + format_value(out.inner_friction) + " differs from ω̃⟨n_c⟩ by " +
                            format_value(out.residual) + " (bound " + format_value(out.tolerance) + ")");
  }
  return out;
}

struct WorkReport {
  double mean_work = 0.0;
  double adiabatic_work = 0.0;
  double inner_friction = 0.0;
  double mean_initial = 0.0;
  double mean_created = 0.0;
  double adiabatic_temperature = 0.0;  // 0 on the vacuum path
  double truncation_bound = 0.0;
  double weighted_leakage = 0.0;
  double friction_residual = 0.0;      // |W_fric − ω̃⟨n_c⟩|
};

inline WorkReport work_report(const TransitionKernel& kernel, const ThermalDistribution& thermal, double omega_in,
                              double omega_out, Enforce enforce = Enforce::yes) {
  if (thermal.omega() != omega_in) throw ConfigError("thermal state must be built at the in-frequency");
  const AverageWork work = average_work(kernel, thermal, omega_in, omega_out);
  const double w_ad = adiabatic_work(thermal.temperature(), omega_in, omega_out);
  const InnerFriction fric = inner_friction(work, w_ad, mean_created(kernel, thermal), omega_out, enforce);
  WorkReport r;
  r.mean_work = work.mean_work;
  r.adiabatic_work = w_ad;
  r.inner_friction = fric.inner_friction;
  r.mean_initial = work.mean_initial;
  r.mean_created = fric.mean_created;
  r.adiabatic_temperature = adiabatic_temperature(thermal.temperature(), omega_in, omega_out);
  r.truncation_bound = work.truncation_bound;
  r.weighted_leakage = work.weighted_leakage;
  r.friction_residual = fric.residual;
  return r;
}

}  // namespace cosmoflux::thermo
