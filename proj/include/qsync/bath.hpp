#pragma once

// Ohmic bath correlation functions: spectral density, Bose occupation, and
// the half-range Fourier transform Gamma(omega) whose real part is the
// golden-rule rate and whose imaginary part (a principal-value integral)
// feeds the Lamb-type frequency shifts.

#include <cmath>
#include <cstddef>

#include "qsync/types.hpp"

namespace qsync {

// J(omega) = mu^2 * omega * omega_c^2 / (omega_c^2 + omega^2).
// Odd in omega; peaks at omega = omega_c with J(omega_c) = mu^2 omega_c / 2.
template <class Real>
Real ohmic_density(Real omega, Real mu, Real omega_c) {
  const Real wc2 = omega_c * omega_c;
  return mu * mu * omega * wc2 / (wc2 + omega * omega);
}

inline double ohmic_density(double omega, const BathParams& bath) {
  return ohmic_density(omega, bath.mu, bath.omega_c);
}

// Thermal occupation N(omega) = 1/(exp(beta*omega) - 1). Negative omega is
// allowed (N(-w) = -(1 + N(w))); omega = 0 at finite beta diverges.
template <class Real>
Real bose_occupation(Real omega, Real beta) {
  if (std::isinf(beta)) {
    if (omega == Real(0)) throw DegenerateFrequency("bose_occupation: omega = 0");
    return omega > Real(0) ? Real(0) : Real(-1);
  }
  const Real x = beta * omega;
  if (x == Real(0)) throw DegenerateFrequency("bose_occupation: omega = 0 at finite beta");
  return Real(1) / std::expm1(x);
}

namespace detail {

// Emission and absorption kernels, written with the overflow-safe factors
//   u(x) = x / (1 - e^{-x}),  v(x) = x / (e^x - 1),
// so that J(w)(N(w)+1) = lorentz(w) u(beta w)/beta and J(w)N(w) =
// lorentz(w) v(beta w)/beta stay finite down to w = 0 and for beta w >> 1.
template <class Real>
Real stable_u(Real x) {
  if (std::abs(x) < Real(1e-12)) return Real(1);
  return x / (-std::expm1(-x));
}

template <class Real>
Real stable_v(Real x) {
  if (std::abs(x) < Real(1e-12)) return Real(1);
  if (x > Real(700)) return Real(0);
  return x / std::expm1(x);
}

template <class Real>
Real lorentz_weight(Real omega, Real mu, Real omega_c) {
  const Real wc2 = omega_c * omega_c;
  return mu * mu * wc2 / (wc2 + omega * omega);
}

// J(w) (N(w) + 1) on w > 0, finite at w -> 0 (limit mu^2/beta at finite
// temperature, 0 at T = 0).
template <class Real>
Real emission_kernel(Real omega, Real mu, Real omega_c, Real beta) {
  if (std::isinf(beta)) return ohmic_density(omega, mu, omega_c);
  return lorentz_weight(omega, mu, omega_c) * stable_u(beta * omega) / beta;
}

// J(w) N(w) on w > 0.
template <class Real>
Real absorption_kernel(Real omega, Real mu, Real omega_c, Real beta) {
  if (std::isinf(beta)) return Real(0);
  return lorentz_weight(omega, mu, omega_c) * stable_v(beta * omega) / beta;
}

// Adaptive Gauss-Legendre quadrature (15-point panels, bisection refinement).
// Compares each panel against its two halves and subdivides until the local
// estimate is within the budgeted tolerance.
template <class F>
struct AdaptiveGauss {
  // 15-point Gauss-Legendre nodes/weights on [-1, 1].
  static constexpr int kN = 15;
  static constexpr double kNodes[kN] = {
      -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
      -0.7244177313601700, -0.5709721726085388, -0.3941513470775634,
      -0.2011940939974345, 0.0,                 0.2011940939974345,
      0.3941513470775634,  0.5709721726085388,  0.7244177313601700,
      0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
  static constexpr double kWeights[kN] = {
      0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
      0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
      0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
      0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
      0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

  const F& f;
  double tol;
  std::size_t evals = 0;
  std::size_t max_evals;

  AdaptiveGauss(const F& fn, double tolerance, std::size_t eval_budget)
      : f(fn), tol(tolerance), max_evals(eval_budget) {}

  double panel(double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < kN; ++i) acc += kWeights[i] * f(mid + half * kNodes[i]);
    evals += kN;
    return acc * half;
  }

  double refine(double a, double b, double whole, double local_tol, int depth) {
    if (evals > max_evals || depth > 60)
      throw QuadratureFailure("adaptive quadrature: refinement budget exhausted");
    const double mid = 0.5 * (a + b);
    const double left = panel(a, mid);
    const double right = panel(mid, b);
    const double split = left + right;
    if (std::abs(split - whole) <= local_tol) return split;
    return refine(a, mid, left, 0.5 * local_tol, depth + 1) +
           refine(mid, b, right, 0.5 * local_tol, depth + 1);
  }

  double integrate(double a, double b) {
    if (!(b > a)) return 0.0;
    return refine(a, b, panel(a, b), tol, 0);
  }
};

template <class F>
double adaptive_integrate(const F& f, double a, double b, double tol,
                          std::size_t eval_budget = 2000000) {
  AdaptiveGauss<F> q(f, tol, eval_budget);
  return q.integrate(a, b);
}

} // namespace detail

// Gamma(omega) = pi (N(omega)+1) J(omega)
//              + i PV int_0^Lambda dw [ J(w)(N(w)+1)/(omega - w)
//                                      + J(w)N(w)/(omega + w) ],
// with Lambda = 50 omega_c. The pole is removed by singularity subtraction:
// the subtracted log remainder is f(omega) ln(omega/(Lambda-omega)) when the
// pole sits in the emission term (omega > 0) and
// g(|omega|) ln((Lambda-|omega|)/|omega|) when it sits in the absorption
// term (omega < 0).
inline Complex half_fourier(double omega, const BathParams& bath,
                            double rel_tol = 1e-10) {
  validate(bath);
  if (omega == 0.0)
    throw DegenerateFrequency("half_fourier: omega = 0");

  const double mu = bath.mu, wc = bath.omega_c, beta = bath.beta;
  const double cutoff = 50.0 * wc;
  if (std::abs(omega) >= cutoff)
    throw std::invalid_argument("half_fourier: |omega| must lie below the integration cutoff");
  if (mu == 0.0) return Complex(0.0, 0.0); // decoupled bath

  auto emit = [&](double w) { return detail::emission_kernel(w, mu, wc, beta); };
  auto absorb = [&](double w) { return detail::absorption_kernel(w, mu, wc, beta); };

  // Real part: pi (N+1) J, written with the stable emission kernel so that
  // omega < 0 reduces to pi N(|omega|) J(|omega|) without cancellation.
  const double pi = 3.14159265358979323846;
  const double re = omega > 0.0 ? pi * emit(omega) : pi * absorb(-omega);

  // Everything scales with mu^2; anchor the absolute tolerance to the peak
  // spectral density so the relative accuracy is uniform in mu.
  const double pole = std::abs(omega);
  const double scale = std::max(mu * mu * wc, 1e-300);
  const double tol = rel_tol * scale;

  double im = 0.0;
  if (omega > 0.0) {
    const double f_pole = emit(omega);
    auto integrand = [&](double w) {
      const double d = omega - w;
      double down;
      if (std::abs(d) > 1e-7 * std::max(1.0, pole)) {
        down = (emit(w) - f_pole) / d;
      } else {
        const double h = 1e-5 * std::max(1.0, pole);
        down = -(emit(omega + h) - emit(omega - h)) / (2.0 * h);
      }
      return down + absorb(w) / (omega + w);
    };
    im += detail::adaptive_integrate(integrand, 0.0, pole, 0.5 * tol);
    im += detail::adaptive_integrate(integrand, pole, cutoff, 0.5 * tol);
    im += f_pole * std::log(omega / (cutoff - omega));
  } else {
    const double g_pole = absorb(pole);
    auto integrand = [&](double w) {
      const double d = omega + w;
      double up;
      if (std::abs(d) > 1e-7 * std::max(1.0, pole)) {
        up = (absorb(w) - g_pole) / d;
      } else {
        const double h = 1e-5 * std::max(1.0, pole);
        up = (absorb(pole + h) - absorb(pole - h)) / (2.0 * h);
      }
      return emit(w) / (omega - w) + up;
    };
    im += detail::adaptive_integrate(integrand, 0.0, pole, 0.5 * tol);
    im += detail::adaptive_integrate(integrand, pole, cutoff, 0.5 * tol);
    im += g_pole * std::log((cutoff - pole) / pole);
  }

  return Complex(re, im);
}

} // namespace qsync
