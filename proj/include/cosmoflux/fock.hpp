// fock.hpp: truncated two-mode Fock space, squeeze-operator amplitudes and the
// transition kernel p(m|n) = |<m|S|n>|^2 with S = exp(z (a†b† − ab)).

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cosmoflux/errors.hpp"

namespace cosmoflux::fock {

// Upper bound on the per-mode cutoff. Jacobi values up to C(2N, N) must fit a double.
inline constexpr int max_cutoff = 300;

class TruncationSpec {
 public:
  explicit TruncationSpec(int cutoff, double leakage_tolerance = 1e-8)
      : cutoff_(cutoff), leakage_tolerance_(leakage_tolerance) {
    if (cutoff < 0 || cutoff > max_cutoff) {
      throw ConfigError("cutoff must lie in [0, " + std::to_string(max_cutoff) +
                        "], got " + std::to_string(cutoff));
    }
    if (!(leakage_tolerance > 0.0 && leakage_tolerance < 1.0)) {
      throw ConfigError("leakage_tolerance must lie in (0, 1)");
    }
  }

  int cutoff() const noexcept { return cutoff_; }
  double leakage_tolerance() const noexcept { return leakage_tolerance_; }
  std::size_t modes() const noexcept { return static_cast<std::size_t>(cutoff_) + 1; }
  std::size_t dimension() const noexcept { return modes() * modes(); }

  friend bool operator==(const TruncationSpec&, const TruncationSpec&) = default;

 private:
  int cutoff_;
  double leakage_tolerance_;
};

// Occupations (n_a, n_b) of the mode pair (k, −k).
struct JointFockIndex {
  int n_a = 0;
  int n_b = 0;

  int total() const noexcept { return n_a + n_b; }
  int difference() const noexcept { return n_a - n_b; }

  friend auto operator<=>(const JointFockIndex&, const JointFockIndex&) = default;
};

// Row-major position of n in the basis of `spec`.
inline std::size_t linear_index(JointFockIndex n, const TruncationSpec& spec) noexcept {
  return static_cast<std::size_t>(n.n_a) * spec.modes() + static_cast<std::size_t>(n.n_b);
}

inline JointFockIndex from_linear_index(std::size_t index, const TruncationSpec& spec) noexcept {
  return {static_cast<int>(index / spec.modes()), static_cast<int>(index % spec.modes())};
}

inline bool contains(const TruncationSpec& spec, JointFockIndex n) noexcept {
  return n.n_a >= 0 && n.n_b >= 0 && n.n_a <= spec.cutoff() && n.n_b <= spec.cutoff();
}

inline std::vector<JointFockIndex> enumerate_basis(const TruncationSpec& spec) {
  std::vector<JointFockIndex> basis;
  basis.reserve(spec.dimension());
  for (int a = 0; a <= spec.cutoff(); ++a) {
    for (int b = 0; b <= spec.cutoff(); ++b) basis.push_back({a, b});
  }
  return basis;
}

// The squeeze generator conserves n_a − n_b. A sector is the set of basis states
// with a fixed difference d, ordered by position i = min(n_a, n_b).
inline int sector_size(int difference, int cutoff) noexcept {
  return cutoff + 1 - std::abs(difference);
}

inline JointFockIndex sector_state(int difference, int position) noexcept {
  return difference >= 0 ? JointFockIndex{position + difference, position}
                         : JointFockIndex{position, position - difference};
}

inline int sector_position(JointFockIndex n) noexcept { return std::min(n.n_a, n.n_b); }

// Squeezing magnitude z ≥ 0; Bogoliubov coefficients α = cosh z, β = sinh z (real phase).
class SqueezeParameter {
 public:
  explicit SqueezeParameter(double z) : z_(z) {
    if (!std::isfinite(z) || z < 0.0) throw ConfigError("squeeze parameter z must be finite and >= 0");
  }

  static SqueezeParameter from_tanh(double t) {
    if (!(t >= 0.0 && t < 1.0)) throw ConfigError("tanh z must lie in [0, 1)");
    return SqueezeParameter(std::atanh(t));
  }

  double value() const noexcept { return z_; }
  double tanh() const noexcept { return std::tanh(z_); }
  double alpha() const noexcept { return std::cosh(z_); }
  double beta() const noexcept { return std::sinh(z_); }

 private:
  double z_;
};

// G = z (a†b† − ab) on the full truncated basis. Dense; intended for small cutoffs.
inline Eigen::MatrixXd squeeze_generator(SqueezeParameter z, const TruncationSpec& spec) {
  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < spec.cutoff(); ++a) {
    for (int b = 0; b < spec.cutoff(); ++b) {
      const auto lo = static_cast<Eigen::Index>(linear_index({a, b}, spec));
      const auto up = static_cast<Eigen::Index>(linear_index({a + 1, b + 1}, spec));
      const double v = z.value() * std::sqrt(static_cast<double>(a + 1) * (b + 1));
      g(up, lo) = v;
      g(lo, up) = -v;
    }
  }
  return g;
}

// Restriction of G to the sector with the given difference.
inline Eigen::MatrixXd sector_generator(SqueezeParameter z, int difference, const TruncationSpec& spec) {
  const int size = sector_size(difference, spec.cutoff());
  if (size <= 0) throw ConfigError("difference outside the truncated basis");
  const int d = std::abs(difference);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(size, size);
  for (int i = 0; i + 1 < size; ++i) {
    const double v = z.value() * std::sqrt(static_cast<double>(i + d + 1) * (i + 1));
    g(i + 1, i) = v;
    g(i, i + 1) = -v;
  }
  return g;
}

// Real block-diagonal operator over difference sectors. Sectors d and −d carry
// the same block (the a ↔ b swap symmetry of the squeeze), so only d ≥ 0 is stored.
class SectorMatrices {
 public:
  SectorMatrices(int cutoff, std::vector<Eigen::MatrixXd> blocks)
      : cutoff_(cutoff), blocks_(std::move(blocks)) {}

  int cutoff() const noexcept { return cutoff_; }
  const Eigen::MatrixXd& sector(int difference) const { return blocks_.at(static_cast<std::size_t>(std::abs(difference))); }

  double operator()(JointFockIndex row, JointFockIndex col) const {
    if (row.difference() != col.difference()) return 0.0;
    return sector(row.difference())(sector_position(row), sector_position(col));
  }

  Eigen::MatrixXd dense() const {
    const TruncationSpec spec(cutoff_);
    const auto dim = static_cast<Eigen::Index>(spec.dimension());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (int d = -cutoff_; d <= cutoff_; ++d) {
      const Eigen::MatrixXd& block = sector(d);
      for (int i = 0; i < block.rows(); ++i) {
        for (int j = 0; j < block.cols(); ++j) {
          out(static_cast<Eigen::Index>(linear_index(sector_state(d, i), spec)),
              static_cast<Eigen::Index>(linear_index(sector_state(d, j), spec))) = block(i, j);
        }
      }
    }
    return out;
  }

 private:
  int cutoff_;
  std::vector<Eigen::MatrixXd> blocks_;
};

// Mass of the vacuum column beyond the cutoff: Σ_{n>N} tanh^{2n} z / cosh² z.
inline double vacuum_leakage(SqueezeParameter z, int cutoff) {
  return std::pow(z.tanh(), 2.0 * (cutoff + 1));
}

// Smallest cutoff whose vacuum leakage is within `tolerance`.
inline int vacuum_cutoff(SqueezeParameter z, double tolerance) {
  const double t = z.tanh();
  if (t <= 0.0) return 0;
  const double n = std::log(tolerance) / (2.0 * std::log(t)) - 1.0;
  return std::clamp(static_cast<int>(std::ceil(n)), 0, max_cutoff);
}

namespace detail {

inline void require_vacuum_budget(SqueezeParameter z, const TruncationSpec& spec) {
  const double leaked = vacuum_leakage(z, spec.cutoff());
  if (leaked > spec.leakage_tolerance()) {
    const int suggested = vacuum_cutoff(z, spec.leakage_tolerance());
    throw LeakageError("vacuum column leaks " + format_value(leaked) + " beyond cutoff " +
                           std::to_string(spec.cutoff()) + "; try cutoff >= " + std::to_string(suggested),
                       leaked, suggested);
  }
}

// out[k] = P_k^{(alpha,beta)}(x) for k < out.size(), by the three-term recurrence in degree.
inline void jacobi_sequence(double alpha, double beta, double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0;
  const double ab = alpha + beta;
  for (std::size_t n = 2; n < out.size(); ++n) {
    const double k = static_cast<double>(n);
    const double c1 = 2.0 * k * (k + ab) * (2.0 * k + ab - 2.0);
    const double c2 = (2.0 * k + ab - 1.0) * ((2.0 * k + ab) * (2.0 * k + ab - 2.0) * x + alpha * alpha - beta * beta);
    const double c3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + ab);
    out[n] = (c2 * out[n - 1] - c3 * out[n - 2]) / c1;
  }
}

inline double jacobi(int degree, double alpha, double beta, double x) {
  std::vector<double> values(static_cast<std::size_t>(degree) + 1);
  jacobi_sequence(alpha, beta, x, values);
  return values.back();
}

}  // namespace detail

// Brute-force S = exp(G), one matrix exponential per sector.
inline SectorMatrices squeeze_operator_oracle_sectors(SqueezeParameter z, const TruncationSpec& spec) {
  detail::require_vacuum_budget(z, spec);
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(spec.modes());
  for (int d = 0; d <= spec.cutoff(); ++d) blocks.push_back(sector_generator(z, d, spec).exp());
  return SectorMatrices(spec.cutoff(), std::move(blocks));
}

inline Eigen::MatrixXd squeeze_operator_oracle(SqueezeParameter z, const TruncationSpec& spec) {
  return squeeze_operator_oracle_sectors(z, spec).dense();
}

// <final|S|initial>. Disentangling S = exp(τ a†b†) cosh(z)^{−(n̂_a+n̂_b+1)} exp(−τ ab)
// gives a terminating 2F1(−n_a, −n_b; l+1; −sinh² z); a Pfaff transformation turns it
// into the Jacobi polynomial P_i^{(l,|d|)}(1 − 2 tanh² z), i = lower sector position,
// l = number of created pairs. Evaluated by recurrence, which stays accurate for
// large occupations where the alternating sum does not.
inline double squeeze_amplitude(SqueezeParameter z, JointFockIndex initial, JointFockIndex final_state) {
  if (initial.n_a < 0 || initial.n_b < 0 || final_state.n_a < 0 || final_state.n_b < 0) {
    throw ConfigError("occupation numbers must be non-negative");
  }
  if (initial.difference() != final_state.difference()) return 0.0;
  const int d = std::abs(initial.difference());
  int lo = sector_position(initial);
  int hi = sector_position(final_state);
  double sign = 1.0;
  if (hi < lo) {
    // S^T(z) = S(−z): annihilating l pairs flips the sign of tanh z.
    std::swap(lo, hi);
    if ((hi - lo) % 2 != 0) sign = -1.0;
  }
  const int pairs = hi - lo;
  const double t = z.tanh();
  double ratio = 1.0;
  for (int k = 1; k <= pairs; ++k) ratio *= std::sqrt(static_cast<double>(lo + d + k) / (lo + k));
  return sign * std::pow(t, pairs) * std::pow(1.0 / std::cosh(z.value()), d + 1) * ratio *
         detail::jacobi(lo, pairs, d, 1.0 - 2.0 * t * t);
}

// The same amplitude as the explicit finite double sum over lowering count j and raising
// count l = j + m_a − n_a, with factorial ratios accumulated as running products.
// Alternating; accurate to ~1e-10 only for occupations up to a few dozen.
inline double squeeze_amplitude_series(SqueezeParameter z, JointFockIndex initial, JointFockIndex final_state) {
  if (initial.n_a < 0 || initial.n_b < 0 || final_state.n_a < 0 || final_state.n_b < 0) {
    throw ConfigError("occupation numbers must be non-negative");
  }
  if (initial.difference() != final_state.difference()) return 0.0;
  const double t = z.tanh();
  const double c = std::cosh(z.value());
  const double sinh2 = std::sinh(z.value()) * std::sinh(z.value());
  const int na = initial.n_a;
  const int nb = initial.n_b;
  const int shift = std::abs(final_state.n_a - na);
  const int lo_a = std::min(na, final_state.n_a);
  const int lo_b = std::min(nb, final_state.n_b);
  int j = std::max(0, na - final_state.n_a);
  int l = std::max(0, final_state.n_a - na);

  // sqrt(n_a! n_b! m_a! m_b!) / (j! l! (n_a−j)! (n_b−j)!) at the first admissible j.
  double factorials = 1.0;
  for (int k = 1; k <= shift; ++k) factorials *= std::sqrt(static_cast<double>(lo_a + k) * (lo_b + k)) / k;

  double term = factorials * std::pow(t, shift) * std::pow(c, 2 * j - na - nb - 1);
  if (j % 2 != 0) term = -term;
  double sum = 0.0;
  for (; j <= std::min(na, nb); ++j, ++l) {
    sum += term;
    term *= -sinh2 * static_cast<double>(na - j) * (nb - j) / (static_cast<double>(j + 1) * (l + 1));
  }
  return sum;
}

// p(m|n) = <m|S|n>² on the truncated basis, with per-column leakage 1 − Σ_m p(m|n).
// Cheap to copy: the tables are shared and immutable.
class TransitionKernel {
 public:
  TransitionKernel(SqueezeParameter z, TruncationSpec spec, std::vector<Eigen::MatrixXd> sectors,
                   std::vector<double> leakage)
      : data_(std::make_shared<const Data>(Data{z, spec, std::move(sectors), std::move(leakage)})) {}

  SqueezeParameter squeeze() const noexcept { return data_->z; }
  const TruncationSpec& truncation() const noexcept { return data_->spec; }
  int cutoff() const noexcept { return data_->spec.cutoff(); }

  // Rows: final sector position; columns: initial sector position.
  const Eigen::MatrixXd& sector(int difference) const {
    return data_->sectors.at(static_cast<std::size_t>(std::abs(difference)));
  }

  double probability(JointFockIndex final_state, JointFockIndex initial) const {
    if (!contains(data_->spec, final_state) || !contains(data_->spec, initial)) return 0.0;
    if (final_state.difference() != initial.difference()) return 0.0;
    return sector(initial.difference())(sector_position(final_state), sector_position(initial));
  }

  double column_leakage(JointFockIndex initial) const {
    return data_->leakage.at(linear_index(initial, data_->spec));
  }

  std::span<const double> leakage() const noexcept { return data_->leakage; }

  // f(initial, final, p) for every pair within a common sector.
  template <class F>
  void for_each_transition(F&& f) const {
    const int n = cutoff();
    for (int d = -n; d <= n; ++d) {
      const Eigen::MatrixXd& block = sector(d);
      for (int i = 0; i < block.cols(); ++i) {
        const JointFockIndex initial = sector_state(d, i);
        for (int k = 0; k < block.rows(); ++k) f(initial, sector_state(d, k), block(k, i));
      }
    }
  }

 private:
  struct Data {
    SqueezeParameter z;
    TruncationSpec spec;
    std::vector<Eigen::MatrixXd> sectors;
    std::vector<double> leakage;
  };
  std::shared_ptr<const Data> data_;
};

// Amplitude block of sector |d| (rows final, cols initial), filled column-diagonal by
// column-diagonal: for each pair count l one recurrence run yields P_i^{(l,d)} for all i.
inline Eigen::MatrixXd squeeze_sector_amplitudes(SqueezeParameter z, int difference, int cutoff) {
  const int d = std::abs(difference);
  const int size = sector_size(d, cutoff);
  const double t = z.tanh();
  const double x = 1.0 - 2.0 * t * t;
  const double base = std::pow(1.0 / std::cosh(z.value()), d + 1);

  Eigen::MatrixXd amp = Eigen::MatrixXd::Zero(size, size);
  std::vector<double> ratio(static_cast<std::size_t>(size), 1.0);  // Π_k sqrt((i+d+k)/(i+k)), k ≤ l
  std::vector<double> poly(static_cast<std::size_t>(size));
  double t_pow = 1.0;
  for (int l = 0; l < size; ++l) {
    const int count = size - l;
    if (l > 0) {
      t_pow *= t;
      for (int i = 0; i < count; ++i) ratio[static_cast<std::size_t>(i)] *= std::sqrt(static_cast<double>(i + d + l) / (i + l));
    }
    std::span<double> p(poly.data(), static_cast<std::size_t>(count));
    detail::jacobi_sequence(l, d, x, p);
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < count; ++i) {
      const double v = t_pow * base * ratio[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
      amp(i + l, i) = v;
      amp(i, i + l) = sign * v;
    }
  }
  return amp;
}

inline TransitionKernel transition_kernel(SqueezeParameter z, const TruncationSpec& spec) {
  detail::require_vacuum_budget(z, spec);
  const int n = spec.cutoff();
  std::vector<Eigen::MatrixXd> sectors;
  sectors.reserve(spec.modes());
  std::vector<double> leakage(spec.dimension(), 0.0);
  for (int d = 0; d <= n; ++d) {
    Eigen::MatrixXd p = squeeze_sector_amplitudes(z, d, n).array().square().matrix();
    const Eigen::RowVectorXd kept = p.colwise().sum();
    for (int i = 0; i < p.cols(); ++i) {
      const double leak = std::max(0.0, 1.0 - kept(i));
      leakage[linear_index(sector_state(d, i), spec)] = leak;
      leakage[linear_index(sector_state(-d, i), spec)] = leak;
    }
    sectors.push_back(std::move(p));
  }
  return TransitionKernel(z, spec, std::move(sectors), std::move(leakage));
}

}  // namespace cosmoflux::fock
