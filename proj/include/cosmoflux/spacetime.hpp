// spacetime.hpp: scenario parameters mapped to a squeeze channel (z, ω, ω̃).
// Natural units c = ħ = G = k_B = 1.

#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "cosmoflux/errors.hpp"
#include "cosmoflux/fock.hpp"

namespace cosmoflux::spacetime {

using fock::SqueezeParameter;

// Ω²(η) = 1 + ε(1 + tanh ση).
struct CosmologyParams {
  double epsilon = 1.0;
  double sigma = 1.0;
  double mass = 0.0;
  double momentum = 1.0;

  bool operator==(const CosmologyParams&) const = default;

  void validate() const {
    if (!(std::isfinite(epsilon) && epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (!(std::isfinite(sigma) && sigma > 0.0)) throw ConfigError("sigma must be > 0");
    if (!(std::isfinite(mass) && mass >= 0.0)) throw ConfigError("mass must be >= 0");
    if (!std::isfinite(momentum)) throw ConfigError("momentum must be finite");
  }
};

struct UnruhParams {
  double acceleration = 1.0;
  double omega = 1.0;

  bool operator==(const UnruhParams&) const = default;

  void validate() const {
    if (!(std::isfinite(acceleration) && acceleration > 0.0)) throw ConfigError("acceleration must be > 0");
    if (!(std::isfinite(omega) && omega > 0.0)) throw ConfigError("omega must be > 0");
  }
};

struct BlackHoleParams {
  double mass_bh = 1.0;
  double omega = 1.0;

  bool operator==(const BlackHoleParams&) const = default;

  void validate() const {
    if (!(std::isfinite(mass_bh) && mass_bh > 0.0)) throw ConfigError("mass_bh must be > 0");
    if (!(std::isfinite(omega) && omega > 0.0)) throw ConfigError("omega must be > 0");
  }
};

struct SqueezeChannel {
  SqueezeParameter z{0.0};
  double omega_in = 1.0;
  double omega_out = 1.0;
};

inline double conformal_factor(double eta, const CosmologyParams& p) {
  p.validate();
  return 1.0 + p.epsilon * (1.0 + std::tanh(p.sigma * eta));
}

// (ω, ω̃) = (√(k² + m²), √(k² + m²(1 + 2ε))).
inline std::pair<double, double> asymptotic_frequencies(const CosmologyParams& p) {
  p.validate();
  if (p.momentum == 0.0 && p.mass == 0.0) throw ConfigError("degenerate mode: k = m = 0 has zero frequency");
  const double k2 = p.momentum * p.momentum;
  const double m2 = p.mass * p.mass;
  return {std::sqrt(k2 + m2), std::sqrt(k2 + m2 * (1.0 + 2.0 * p.epsilon))};
}

// tanh z = sinh(π(ω̃−ω)/2σ) / sinh(π(ω̃+ω)/2σ), positive branch.
inline SqueezeParameter squeeze_from_cosmology(double omega_in, double omega_out, double sigma) {
  if (!(omega_in > 0.0 && omega_out >= omega_in && std::isfinite(omega_out))) {
    throw ConfigError("cosmology channel needs omega_out >= omega_in > 0");
  }
  if (!(std::isfinite(sigma) && sigma > 0.0)) throw ConfigError("sigma must be > 0");
  const double a = std::numbers::pi * (omega_out - omega_in) / (2.0 * sigma);
  const double b = std::numbers::pi * (omega_out + omega_in) / (2.0 * sigma);
  double ratio;
  if (b > 20.0) {
    // sinh a / sinh b = e^{a−b} (1 − e^{−2a}) / (1 − e^{−2b}); avoids overflow as σ → 0.
    ratio = std::exp(a - b) * (-std::expm1(-2.0 * a)) / (-std::expm1(-2.0 * b));
  } else {
    ratio = std::sinh(a) / std::sinh(b);
  }
  return SqueezeParameter(std::atanh(ratio));
}

// tanh z = exp(−πω/a).
inline SqueezeParameter squeeze_from_unruh(const UnruhParams& p) {
  p.validate();
  return SqueezeParameter(std::atanh(std::exp(-std::numbers::pi * p.omega / p.acceleration)));
}

// tanh z = exp(−4πMω).
inline SqueezeParameter squeeze_from_blackhole(const BlackHoleParams& p) {
  p.validate();
  return SqueezeParameter(std::atanh(std::exp(-4.0 * std::numbers::pi * p.mass_bh * p.omega)));
}

inline SqueezeChannel cosmology_channel(const CosmologyParams& p) {
  const auto [w, wt] = asymptotic_frequencies(p);
  return {squeeze_from_cosmology(w, wt, p.sigma), w, wt};
}

// Horizon scenarios: the mode frequency is unchanged; the unitary pipeline is a formal extension.
inline SqueezeChannel unruh_channel(const UnruhParams& p) { return {squeeze_from_unruh(p), p.omega, p.omega}; }

inline SqueezeChannel blackhole_channel(const BlackHoleParams& p) {
  return {squeeze_from_blackhole(p), p.omega, p.omega};
}

}  // namespace cosmoflux::spacetime
