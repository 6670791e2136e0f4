#pragma once

// Closed-form spectra in the two exactly solvable regimes: the
// zero-temperature partial-secular generator (absorption channel closed)
// and the fully collective infinite-temperature generator. Eigenvalues are
// reported in formula order, not magnitude order, so label-based
// identities (gap equals V, exchange-split pair, ...) hold exactly.

#include <cmath>
#include <complex>

#include "qsync/lindblad.hpp"
#include "qsync/types.hpp"

namespace qsync {

// Principal square root: nonnegative real part, and +i sqrt|z| on the
// negative real axis regardless of the sign of the zero imaginary part.
inline Complex principal_root(Complex z) {
  if (z.imag() == 0.0 && z.real() < 0.0)
    return Complex(0.0, std::sqrt(-z.real()));
  Complex r = std::sqrt(z);
  if (r.real() < 0.0) r = -r;
  return r;
}

// Zero-temperature spectrum of the d = 0 and d = 1 blocks.
//
// With gamma_j the total single-qubit decay rates (bath + local T1), the
// shifted splittings w~_j = w_j + s_jj and the collective parameter
//   V = sqrt( (g12 + 2i s12)(g21 + 2i s21) + ((g11 - g22)/2 + i dW)^2 ),
// dW = w~_1 - w~_2, the six population-block and four coherence-block
// eigenvalues are elementary functions of V alone.
struct ZeroTempSpectrum {
  Complex v;                       // collective splitting parameter
  std::array<Complex, 6> block0;   // formula order; block0[5] = 0 (steady)
  std::array<Complex, 4> block1;   // formula order; fast pair first
  Complex alpha_s;                 // |eg> weight in the subradiant mode
  Complex alpha_a;                 // |eg> weight in the slow coherence mode
  Complex delta_lambda;            // slow-mode gap, equals V in both blocks
  double x = 0.0;                  // Re V^2 in rate variables
  double y = 0.0;                  // Im V^2 in rate variables
  double re_v = 0.0;               // Re V recovered from (x, y)
};

inline ZeroTempSpectrum zero_temp_spectrum(const RateSet& rates,
                                           const ModelParams& model) {
  const double g11 = rates.gamma_down(0, 0).real();
  const double g22 = rates.gamma_down(1, 1).real();
  const Complex g12 = rates.gamma_down(0, 1);
  const Complex g21 = rates.gamma_down(1, 0);
  const double s11 = rates.s_down(0, 0).real();
  const double s22 = rates.s_down(1, 1).real();
  const Complex s12 = rates.s_down(0, 1);
  const Complex s21 = rates.s_down(1, 0);

  const double w1 = model.omega1 + s11;
  const double w2 = model.omega2 + s22;
  const double dw = w1 - w2;
  const double wsum = w1 + w2;

  const Complex i_unit(0.0, 1.0);
  const Complex d_tilde = 0.5 * (g11 - g22) + i_unit * dw;
  const Complex c12 = g12 + 2.0 * i_unit * s12;
  const Complex c21 = g21 + 2.0 * i_unit * s21;
  const Complex v = principal_root(c12 * c21 + d_tilde * d_tilde);

  ZeroTempSpectrum out;
  out.v = v;
  const double gsum = g11 + g22;
  const double gbar = 0.5 * gsum;

  out.block0 = {Complex(-gsum, 0.0),
                Complex(-gbar, 0.0) - v.real(),
                Complex(-gbar, 0.0) + i_unit * v.imag(),
                Complex(-gbar, 0.0) - i_unit * v.imag(),
                Complex(-gbar, 0.0) + v.real(),
                Complex(0.0, 0.0)};

  const Complex drift = -0.5 * i_unit * wsum;
  out.block1 = {-0.5 * (3.0 * gbar + std::conj(v)) + drift,
                -0.5 * (3.0 * gbar - std::conj(v)) + drift,
                -0.5 * (gbar + v) + drift,
                -0.5 * (gbar - v) + drift};

  // Slow-mode gap: block0[4] - block0[3] = block1[3] - block1[2] = V.
  out.delta_lambda = v;

  // Slow-mode composition: the subradiant population mode is built on
  // |S> = (alpha |eg> + |ge>)/sqrt(1+|alpha|^2) and the slow coherence mode
  // on the same combination against |gg>; both carry the same alpha.
  if (std::abs(c12) < 1e-300 * std::max(1.0, std::abs(d_tilde)))
    throw DegenerateDenominator("zero_temp_spectrum: vanishing cross coupling");
  out.alpha_s = (d_tilde - v) / c12;
  out.alpha_a = out.alpha_s;

  // Re V recovered from x = Re V^2 and y = Im V^2 written in rates only:
  //   x = (g11-g22)^2/4 - dW^2 + |g12|^2 - 4|s12|^2,
  //   y = 2 Re(g12 s21 + g21 s12) + dW (g11 - g22),
  // and Re V = sqrt((sqrt(x^2+y^2) + x)/2).
  out.x = 0.25 * (g11 - g22) * (g11 - g22) - dw * dw +
          (g12 * g21).real() - 4.0 * (s12 * s21).real();
  out.y = 2.0 * (g12 * s21 + g21 * s12).real() + dw * (g11 - g22);
  out.re_v = std::sqrt(0.5 * (std::hypot(out.x, out.y) + out.x));
  return out;
}

// Exact slow-mode matrices implied by alpha: the subradiant population mode
// |S><S| - |gg><gg| and the slow coherence mode |A><gg| / sqrt(2), with
// |S> = (alpha |eg> + |ge>) / sqrt(1+|alpha|^2) and |A> its coherence-block
// counterpart. Used to cross-check mode weights of probe states.
inline Matrix4 subradiant_mode_matrix(Complex alpha) {
  Eigen::Vector4cd s = Eigen::Vector4cd::Zero();
  const double norm = std::sqrt(1.0 + std::norm(alpha));
  s(1) = alpha / norm;
  s(2) = 1.0 / norm;
  Matrix4 m = s * s.adjoint();
  m(3, 3) -= 1.0;
  return m;
}

inline Matrix4 slow_coherence_mode_matrix(Complex alpha) {
  Eigen::Vector4cd a = Eigen::Vector4cd::Zero();
  const double norm = std::sqrt(1.0 + std::norm(alpha));
  a(1) = alpha / norm;
  a(2) = 1.0 / norm;
  Matrix4 m = Matrix4::Zero();
  m.col(3) = a / std::sqrt(2.0);
  m(3, 3) = 0.0;
  return m;
}

// Coherence-block spectrum of the fully collective infinite-temperature
// generator, in formula order:
//   lambda_1,2 = -3 gamma -+ sqrt(4 gamma^2 - s_plus^2) - i w,
//   lambda_3   = -gamma - i (w - s_plus),
//   lambda_4   = -gamma - i (w + s_plus),
// so lambda_4 - lambda_3 = -2 i s_plus exactly.
inline std::array<Complex, 4> infinite_temp_block1(double omega, double gamma,
                                                   double s_plus) {
  const Complex root = principal_root(Complex(4.0 * gamma * gamma - s_plus * s_plus, 0.0));
  const Complex drift(0.0, -omega);
  return {Complex(-3.0 * gamma, 0.0) - root + drift,
          Complex(-3.0 * gamma, 0.0) + root + drift,
          Complex(-gamma, 0.0) + Complex(0.0, -(omega - s_plus)),
          Complex(-gamma, 0.0) + Complex(0.0, -(omega + s_plus))};
}

} // namespace qsync
