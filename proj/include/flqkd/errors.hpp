#pragma once

#include <stdexcept>
#include <string>

namespace flqkd {

// Base for every error the engine raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside a function's mathematical domain (g(x<0), Pr(e) > 0.5, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Non-symmetric or odd-dimensional covariance matrix.
class InvalidCovariance : public Error {
 public:
  using Error::Error;
};

// A SystemParams field violates its constraints. field() names the key.
class InvalidParameter : public Error {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class InfeasibleSource : public Error {
 public:
  using Error::Error;
};

class InfeasibleAttack : public Error {
 public:
  using Error::Error;
};

// sigma0 + sigma1 == 0: the homodyne statistic carries no spread to threshold.
class DegenerateReceiver : public Error {
 public:
  using Error::Error;
};

// A closed-form result was requested outside the regime where it holds.
class RegimeViolation : public Error {
 public:
  using Error::Error;
};

// Monitoring baseline (IA coincidence excess) is zero; f_E cannot be estimated.
class UndefinedBaseline : public Error {
 public:
  using Error::Error;
};

// A computed quantity broke a physical or mathematical invariant
// (Heisenberg bound, NaN, chi0/chi > 1, ...).
class NumericInvariantError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration text or an unknown key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace flqkd
