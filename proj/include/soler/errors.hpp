#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace soler {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration: bad grid sizes, mismatched lengths, out-of-range
/// parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Root bracketing failed: f(lo) and f(hi) have the same sign.
class BracketingError : public Error {
 public:
  using Error::Error;
};

/// The solitary-wave existence condition has no solution at this frequency.
class ExistenceError : public Error {
 public:
  using Error::Error;
};

/// The profile ODE left its admissible region (square-root argument went
/// negative beyond the clip tolerance).
class ProfileIntegrationError : public Error {
 public:
  using Error::Error;
};

/// The profile did not decay below the required threshold at the grid edge.
class DomainTooSmallError : public Error {
 public:
  using Error::Error;
};

/// An eigenvalue or linear solve failed to converge.
class NumericalFailureError : public Error {
 public:
  NumericalFailureError(const std::string& what, int dimension)
      : Error(what + " (matrix dimension " + std::to_string(dimension) + ")"),
        dimension_(dimension) {}
  int dimension() const { return dimension_; }

 private:
  int dimension_ = 0;
};

/// An expected eigenvalue was not found; carries the nearest candidates for
/// diagnosis.
class DetectionError : public Error {
 public:
  DetectionError(const std::string& what,
                 std::vector<std::complex<double>> nearest)
      : Error(what + describe(nearest)), nearest_(std::move(nearest)) {}
  const std::vector<std::complex<double>>& nearest() const { return nearest_; }

 private:
  static std::string describe(const std::vector<std::complex<double>>& zs) {
    std::string s = "; nearest eigenvalues:";
    for (const auto& z : zs)
      s += " (" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
    return s;
  }
  std::vector<std::complex<double>> nearest_;
};

}  // namespace soler
