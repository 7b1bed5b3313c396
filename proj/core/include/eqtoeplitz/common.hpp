#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace eqt {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Raised when a disc point lies on or outside the unit circle.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Orbit descent or Poincare summation ran past its word-length budget.
struct HorizonExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotInvertible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Undersampled : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GluingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace eqt
