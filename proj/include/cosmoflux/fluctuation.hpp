// fluctuation.hpp: two-point-measurement entropy statistics for the expansion and
// contraction processes, the Crooks relation and the relative-entropy identities.

#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cosmoflux/errors.hpp"
#include "cosmoflux/fock.hpp"
#include "cosmoflux/thermo.hpp"

namespace cosmoflux::fluctuation {

using fock::JointFockIndex;
using fock::TransitionKernel;
using thermo::ThermalDistribution;
using thermo::WorkReport;

namespace tolerance {
inline constexpr double probability_floor = 1e-12;
inline constexpr double s_resolution = 1e-12;
inline constexpr double microstate_crooks = 1e-10;
inline constexpr double distribution_crooks = 1e-8;
inline constexpr double kl_identity = 1e-8;
inline constexpr double nonnegative_entropy = 1e-10;
inline constexpr double entropy_friction = 1e-6;
inline constexpr double integral_fluctuation = 1e-6;
inline constexpr double relative_entropy = 1e-5;
inline constexpr double eigenvalue_clip = 1e-300;
}  // namespace tolerance

enum class Direction { expansion, contraction };

// Joint probabilities of a process that starts in a thermal microstate, measured
// before and after. Expansion: p(n→m) = p(m|n) p_th(n). Contraction: q(m→n) =
// q(n|m) q(m) with q(n|m) = p(m|n) and q(m) the weight at (T̃_ad, ω̃), which equals
// p_th(m) at (T, ω).
class ProcessJoint {
 public:
  ProcessJoint(TransitionKernel kernel, ThermalDistribution thermal, Direction direction)
      : kernel_(std::move(kernel)), thermal_(std::move(thermal)), direction_(direction) {
    if (kernel_.cutoff() != thermal_.cutoff()) throw ConfigError("kernel and thermal state use different cutoffs");
  }

  Direction direction() const noexcept { return direction_; }
  const TransitionKernel& kernel() const noexcept { return kernel_; }
  const ThermalDistribution& thermal() const noexcept { return thermal_; }

  double conditional(JointFockIndex start, JointFockIndex end) const {
    return direction_ == Direction::expansion ? kernel_.probability(end, start) : kernel_.probability(start, end);
  }

  double probability(JointFockIndex start, JointFockIndex end) const {
    return conditional(start, end) * thermal_.weight(start);
  }

  // f(start, end, probability) over every pair in a common sector.
  template <class F>
  void for_each(F&& f) const {
    kernel_.for_each_transition([&](JointFockIndex n, JointFockIndex m, double p) {
      if (direction_ == Direction::expansion) {
        f(n, m, p * thermal_.weight(n));
      } else {
        // q(n|m) = p(m|n): this entry is the contraction from m back to n.
        f(m, n, p * thermal_.weight(m));
      }
    });
  }

  double total_mass() const {
    double total = 0.0;
    for_each([&](JointFockIndex, JointFockIndex, double p) { total += p; });
    return total;
  }

 private:
  TransitionKernel kernel_;
  ThermalDistribution thermal_;
  Direction direction_;
};

inline ProcessJoint forward_joint(const TransitionKernel& kernel, const ThermalDistribution& thermal) {
  thermo::detail::require_leakage_budget(kernel, thermal);
  return ProcessJoint(kernel, thermal, Direction::expansion);
}

inline ProcessJoint reverse_joint(const TransitionKernel& kernel, const ThermalDistribution& thermal) {
  thermo::detail::require_leakage_budget(kernel, thermal);
  return ProcessJoint(kernel, thermal, Direction::contraction);
}

// s(n→m) = (ω̃/T̃_ad)(total(m) − total(n)).
inline double entropy_change(JointFockIndex n, JointFockIndex m, double omega_out, double adiabatic_temperature) {
  if (!(adiabatic_temperature > 0.0)) {
    throw UndefinedEntropyError("entropy change is undefined at zero temperature");
  }
  return omega_out / adiabatic_temperature * (m.total() - n.total());
}

// Finitely supported distribution over s, support sorted ascending.
class EntropyDistribution {
 public:
  EntropyDistribution() = default;

  // Merges points closer than `resolution` into the first of the run.
  static EntropyDistribution from_points(std::vector<std::pair<double, double>> points,
                                         double resolution = tolerance::s_resolution) {
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    EntropyDistribution out;
    out.resolution_ = resolution;
    for (const auto& [s, mass] : points) {
      if (!out.support_.empty() && std::abs(s - out.support_.back()) <= resolution) {
        out.masses_.back() += mass;
      } else {
        out.support_.push_back(s);
        out.masses_.push_back(mass);
      }
    }
    return out;
  }

  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  double resolution() const noexcept { return resolution_; }
  std::size_t size() const noexcept { return support_.size(); }

  double mass_at(double s) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), s - resolution_);
    if (it == support_.end() || std::abs(*it - s) > resolution_) return 0.0;
    return masses_[static_cast<std::size_t>(it - support_.begin())];
  }

  double total() const {
    double t = 0.0;
    for (double m : masses_) t += m;
    return t;
  }

  double mean() const {
    double t = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) t += support_[i] * masses_[i];
    return t;
  }

 private:
  std::vector<double> support_;
  std::vector<double> masses_;
  double resolution_ = tolerance::s_resolution;
};

struct EntropyDistributions {
  EntropyDistribution expansion;    // P_E(s)
  EntropyDistribution contraction;  // P_C(s'), s' the contraction's entropy change; pairs as P_C(−s)
};

namespace detail {

// Aggregates a process by total-number change first (s depends on nothing else), then by s.
inline EntropyDistribution aggregate(const ProcessJoint& joint, double omega_out, double adiabatic_temperature) {
  if (!(adiabatic_temperature > 0.0)) {
    throw UndefinedEntropyError("entropy change is undefined at zero temperature");
  }
  const int n = joint.kernel().cutoff();
  std::vector<double> by_change(static_cast<std::size_t>(4 * n + 1), 0.0);
  joint.for_each([&](JointFockIndex start, JointFockIndex end, double p) {
    by_change[static_cast<std::size_t>(end.total() - start.total() + 2 * n)] += p;
  });
  std::vector<std::pair<double, double>> points;
  for (int delta = -2 * n; delta <= 2 * n; ++delta) {
    const double mass = by_change[static_cast<std::size_t>(delta + 2 * n)];
    if (mass > 0.0) {
      points.emplace_back(omega_out / adiabatic_temperature * delta, mass);
    }
  }
  return EntropyDistribution::from_points(std::move(points));
}

}  // namespace detail

inline EntropyDistributions entropy_distributions(const ProcessJoint& forward, const ProcessJoint& reverse,
                                                  double omega_out, double adiabatic_temperature) {
  if (forward.direction() != Direction::expansion || reverse.direction() != Direction::contraction) {
    throw ConfigError("entropy_distributions expects (expansion, contraction) joints");
  }
  return {detail::aggregate(forward, omega_out, adiabatic_temperature),
          detail::aggregate(reverse, omega_out, adiabatic_temperature)};
}

struct CrooksResult {
  double deviation = 0.0;   // max |log(P_E(s)/P_C(−s)) − s| over P_E(s) > floor
  double floor_mass = 0.0;  // P_E mass below the floor, excluded from the check
  std::size_t points = 0;
  bool passed() const noexcept { return deviation <= tolerance::distribution_crooks; }
};

inline CrooksResult crooks_deviation(const EntropyDistribution& expansion, const EntropyDistribution& contraction,
                                     double floor = tolerance::probability_floor) {
  CrooksResult out;
  for (std::size_t i = 0; i < expansion.size(); ++i) {
    const double s = expansion.support()[i];
    const double pe = expansion.masses()[i];
    if (pe < floor) {
      out.floor_mass += pe;
      continue;
    }
    const double pc = contraction.mass_at(-s);
    if (!(pc > 0.0)) {
      throw VerificationError("support mismatch: P_E(" + format_value(s) + ") > 0 but P_C(" + format_value(-s) +
                              ") = 0");
    }
    out.deviation = std::max(out.deviation, std::abs(std::log(pe) - std::log(pc) - s));
    ++out.points;
  }
  return out;
}

// max over (n, m) with p(m|n) > 0 of |log(p(m|n)p_th(n)) − log(q(n|m)q(m)) − s(n→m)|.
inline double microstate_crooks_residual(const ProcessJoint& forward, const ProcessJoint& reverse,
                                         double omega_out, double adiabatic_temperature) {
  double worst = 0.0;
  forward.for_each([&](JointFockIndex n, JointFockIndex m, double p_forward) {
    if (!(p_forward > 0.0)) return;
    const double q = reverse.probability(m, n);
    if (!(q > 0.0)) return;
    const double s = entropy_change(n, m, omega_out, adiabatic_temperature);
    worst = std::max(worst, std::abs(std::log(p_forward) - std::log(q) - s));
  });
  return worst;
}

// Σ_s P_E(s) e^{−s}; evaluated as exp(log P − s) so extreme s cannot overflow.
inline double integral_fluctuation(const EntropyDistribution& expansion) {
  double total = 0.0;
  for (std::size_t i = 0; i < expansion.size(); ++i) {
    const double p = expansion.masses()[i];
    if (p > 0.0) total += std::exp(std::log(p) - expansion.support()[i]);
  }
  return total;
}

struct KlResult {
  double mean_entropy = 0.0;  // ⟨s⟩ = Σ s P_E(s)
  double kl = 0.0;            // K[P_E ‖ P_C(−·)] over P_E(s) > floor
  double residual = 0.0;      // |⟨s⟩ − K|
  double floor_mass = 0.0;
  bool passed() const noexcept {
    return residual <= tolerance::kl_identity && mean_entropy >= -tolerance::nonnegative_entropy;
  }
};

inline KlResult mean_entropy_and_kl(const EntropyDistribution& expansion, const EntropyDistribution& contraction,
                                    Enforce enforce = Enforce::yes, double floor = tolerance::probability_floor) {
  KlResult out;
  out.mean_entropy = expansion.mean();
  for (std::size_t i = 0; i < expansion.size(); ++i) {
    const double s = expansion.support()[i];
    const double pe = expansion.masses()[i];
    if (pe < floor) {
      out.floor_mass += pe;
      continue;
    }
    const double pc = contraction.mass_at(-s);
    if (!(pc > 0.0)) throw VerificationError("support mismatch in relative entropy at s = " + format_value(s));
    out.kl += pe * (std::log(pe) - std::log(pc));
  }
  out.residual = std::abs(out.mean_entropy - out.kl);
  if (enforce == Enforce::yes && !out.passed()) {
    throw VerificationError("<s> = " + format_value(out.mean_entropy) + " but K[P_E||P_C] = " +
                            format_value(out.kl));
  }
  return out;
}

struct EntropyFrictionRecord {
  bool skipped = false;              // vacuum path: T̃_ad undefined
  double mean_entropy = 0.0;
  double friction_over_temperature = 0.0;  // W_fric / T̃_ad
  double created_term = 0.0;               // (ω̃/T̃_ad)⟨n_c⟩
  double residual_friction = 0.0;
  double residual_created = 0.0;
  bool passed() const noexcept {
    return skipped || (residual_friction <= tolerance::entropy_friction &&
                       residual_created <= tolerance::entropy_friction);
  }
};

// ⟨s⟩ = W_fric/T̃_ad = (ω̃/T̃_ad)⟨n_c⟩.
inline EntropyFrictionRecord entropy_friction_identity(const WorkReport& work, double mean_entropy, double omega_out,
                                                       Enforce enforce = Enforce::yes) {
  EntropyFrictionRecord r;
  if (!(work.adiabatic_temperature > 0.0)) {
    r.skipped = true;
    return r;
  }
  r.mean_entropy = mean_entropy;
  r.friction_over_temperature = work.inner_friction / work.adiabatic_temperature;
  r.created_term = omega_out / work.adiabatic_temperature * work.mean_created;
  r.residual_friction = std::abs(mean_entropy - r.friction_over_temperature);
  r.residual_created = std::abs(mean_entropy - r.created_term);
  if (enforce == Enforce::yes && !r.passed()) {
    throw VerificationError("<s> = " + format_value(mean_entropy) + " disagrees with W_fric/T_ad = " +
                            format_value(r.friction_over_temperature));
  }
  return r;
}

struct RelativeEntropyResult {
  double relative_entropy = 0.0;  // K[ρ ‖ ρ′]
  double clipped_weight = 0.0;    // ρ-weight on eigenvectors of ρ′ dropped below the clip
  double orthogonality_defect = 0.0;  // max |SSᵀ − 1| over sectors
};

// K[ρ ‖ ρ′] = tr ρ log ρ − tr ρ log ρ′ with ρ′ = S ρ Sᵀ, sector by sector.
// ρ′ is diagonalised through its modular operator −log ρ′ = S(−log ρ)Sᵀ: the
// spectrum of ρ′ spans ~e^{−2Nω/T}, far below what a direct eigensolve of ρ′
// resolves, while −log ρ′ is well conditioned.
inline RelativeEntropyResult quantum_relative_entropy(const ThermalDistribution& thermal,
                                                      const fock::SectorMatrices& squeeze) {
  if (thermal.is_vacuum()) throw UndefinedEntropyError("quantum relative entropy needs T > 0");
  if (squeeze.cutoff() != thermal.cutoff()) throw ConfigError("squeeze operator and thermal state use different cutoffs");
  const int n = thermal.cutoff();
  const double log_clip = std::log(tolerance::eigenvalue_clip);
  RelativeEntropyResult out;
  double rho_log_rho = 0.0;
  double rho_log_rho_prime = 0.0;
  for (int d = -n; d <= n; ++d) {
    const Eigen::MatrixXd& s = squeeze.sector(d);
    const auto size = s.rows();
    Eigen::VectorXd w(size);
    Eigen::VectorXd log_w(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      const auto state = fock::sector_state(d, static_cast<int>(i));
      w(i) = thermal.weight(state);
      log_w(i) = thermal.log_weight(state);
      if (w(i) > 0.0) rho_log_rho += w(i) * log_w(i);
    }
    out.orthogonality_defect = std::max(
        out.orthogonality_defect, (s * s.transpose() - Eigen::MatrixXd::Identity(size, size)).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd modular = -(s * log_w.asDiagonal() * s.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(modular);
    const Eigen::VectorXd& h = eig.eigenvalues();
    const Eigen::MatrixXd& v = eig.eigenvectors();
    for (Eigen::Index k = 0; k < size; ++k) {
      const double overlap = v.col(k).cwiseAbs2().dot(w);
      if (-h(k) < log_clip) {
        out.clipped_weight += overlap;
        continue;
      }
      rho_log_rho_prime -= overlap * h(k);
    }
  }
  out.relative_entropy = rho_log_rho - rho_log_rho_prime;
  return out;
}

struct RelativeEntropyCheck {
  double scaled = 0.0;    // T̃_ad K
  double residual = 0.0;  // |T̃_ad K − W_fric| / max(1, W_fric)
  bool passed() const noexcept { return residual <= tolerance::relative_entropy; }
};

inline RelativeEntropyCheck check_relative_entropy_friction(double relative_entropy, double adiabatic_temperature,
                                                            double inner_friction, Enforce enforce = Enforce::yes) {
  RelativeEntropyCheck c;
  c.scaled = adiabatic_temperature * relative_entropy;
  c.residual = std::abs(c.scaled - inner_friction) / std::max(1.0, std::abs(inner_friction));
  if (enforce == Enforce::yes && !c.passed()) {
    throw VerificationError("T_ad K[rho||rho'] = " + format_value(c.scaled) + " but W_fric = " +
                            format_value(inner_friction));
  }
  return c;
}

}  // namespace cosmoflux::fluctuation
