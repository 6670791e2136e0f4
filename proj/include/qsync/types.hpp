#pragma once

// Core value types, conventions, and error taxonomy.
//
// Conventions used throughout:
//   * Units: hbar = omega1 = 1. All frequencies, rates and times are
//     dimensionless ratios against the first qubit frequency.
//   * Two-qubit computational basis, first label = qubit 1:
//       0 = |ee>, 1 = |eg>, 2 = |ge>, 3 = |gg>
//     Single-qubit ordering is (e, g), so the excited state comes first.
//   * Operators on the two-qubit space are 4x4; superoperators act on
//     row-major vectorized operators, vec(|a><b|) at flat index 4a+b,
//     so vec(A rho B) = (A (x) B^T) vec(rho).

#include <complex>
#include <limits>
#include <stdexcept>
#include <Eigen/Dense>

namespace qsync {

using Complex = std::complex<double>;

template <class Scalar>
using Matrix2T = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <class Scalar>
using Matrix4T = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <class Scalar>
using SuperopT = Eigen::Matrix<std::complex<Scalar>, 16, 16>;

using Matrix2 = Matrix2T<double>;
using Matrix4 = Matrix4T<double>;
using Superop = SuperopT<double>;
using Vector16 = Eigen::Matrix<Complex, 16, 1>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Bath description: Ohmic spectral density with Lorentz-Drude cutoff at
// omega_c, inverse temperature beta (beta = +inf is the T = 0 sentinel).
struct BathParams {
  double mu = 0.0;       // coupling energy, units hbar*omega1
  double omega_c = 20.0; // cutoff frequency, units omega1
  double beta = kInf;    // inverse temperature, units 1/(hbar*omega1)

  bool zero_temperature() const { return std::isinf(beta); }
};

// Full model: two qubit frequencies, dimensionless dissipative weights,
// the common bath, and a local T1 relaxation time (+inf disables it).
struct ModelParams {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double g1 = 1.0;
  double g2 = 1.0;
  BathParams bath;
  double t1_local = kInf; // units 1/omega1

  double delta_omega() const { return omega1 - omega2; }
};

inline void validate(const BathParams& p) {
  if (!(p.mu >= 0.0)) throw std::invalid_argument("bath: mu must be nonnegative");
  if (!(p.omega_c > 0.0)) throw std::invalid_argument("bath: omega_c must be positive");
  if (!(p.beta > 0.0)) throw std::invalid_argument("bath: beta must be positive");
}

inline void validate(const ModelParams& p) {
  validate(p.bath);
  if (!(p.omega1 > 0.0) || !(p.omega2 > 0.0))
    throw std::invalid_argument("model: qubit frequencies must be positive");
  if (p.g1 < 0.0 || p.g2 < 0.0)
    throw std::invalid_argument("model: weights must be nonnegative");
  if (!(p.t1_local > 0.0))
    throw std::invalid_argument("model: t1_local must be positive");
}

// Error taxonomy. Each type names the condition it reports.
struct DegenerateFrequency : std::domain_error {
  using std::domain_error::domain_error;
};
struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotPhaseCovariant : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonDiagonalizable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoSlowMode : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateWindow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidCapacitance : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct CpViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace qsync
