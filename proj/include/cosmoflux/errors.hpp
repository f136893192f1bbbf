#pragma once

#include <charconv>
#include <stdexcept>
#include <string>

namespace cosmoflux {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or malformed configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Probability mass lost to Fock-space truncation exceeds the budget.
class LeakageError : public Error {
 public:
  LeakageError(const std::string& what, double leaked, int suggested_cutoff)
      : Error(what), leaked_(leaked), suggested_cutoff_(suggested_cutoff) {}

  double leaked() const noexcept { return leaked_; }
  int suggested_cutoff() const noexcept { return suggested_cutoff_; }

 private:
  double leaked_;
  int suggested_cutoff_;
};

// An identity that must hold numerically did not.
class VerificationError : public Error {
 public:
  using Error::Error;
};

// Entropy quantities requested on the zero-temperature path.
class UndefinedEntropyError : public Error {
 public:
  using Error::Error;
};

enum class Enforce { yes, no };

// Compact text for a double in messages (6 significant digits).
inline std::string format_value(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, ptr);
}

}  // namespace cosmoflux
