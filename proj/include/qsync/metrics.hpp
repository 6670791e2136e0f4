#pragma once

// Figures of merit built on the normal-mode decomposition: dominance times
// and measures for mutual synchronization and subradiant transients,
// windowed Pearson correlation of the local coherences, entanglement
// negativity, map collectiveness through the Choi state, and the
// entanglement-generation criterion from the partially transposed
// generator.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "qsync/lindblad.hpp"
#include "qsync/operators.hpp"
#include "qsync/spectral.hpp"
#include "qsync/types.hpp"

namespace qsync {

struct MeritConfig {
  double dominance_factor = 100.0; // amplitude ratio defining dominance
  double pearson_window = 7.0;     // correlation window length
  double amplitude_floor = 1e-12;  // modes below this are treated as absent
  double degeneracy_rtol = 1e-9;   // relative Re-degeneracy threshold
  double grid_t_min = 1e-2;        // peak-search grid start
  double grid_t_max = 0.0;         // 0 = auto: span_factor * slowest lifetime
  int grid_points = 2000;
  double grid_span_factor = 10.0;
  double t1_hint = 0.0;            // local T1, widens the auto grid span
  int refine_rounds = 3;           // parabolic refinements of the peak
};

struct DecayMeasure {
  double threshold_time = 0.0; // time for the slow mode to dominate
  double measure = 0.0;        // |log(dominance) / (threshold_time * Re lambda_slow)|
};

struct PeakMeasure {
  double time = 0.0;
  double value = 0.0;
};

// Bundle of all figures of merit for one parameter point. NaN marks a value
// that was not requested or could not be computed.
struct MeritReport {
  double syn = std::numeric_limits<double>::quiet_NaN();
  double t_sync = std::numeric_limits<double>::quiet_NaN();
  double sub = std::numeric_limits<double>::quiet_NaN();
  double t_sub = std::numeric_limits<double>::quiet_NaN();
  double neg_max = std::numeric_limits<double>::quiet_NaN();
  double t_neg_max = std::numeric_limits<double>::quiet_NaN();
  double coll_max = std::numeric_limits<double>::quiet_NaN();
  double t_coll_max = std::numeric_limits<double>::quiet_NaN();
  // Most negative Choi eigenvalue at the collectiveness peak: the
  // complete-positivity diagnostic (0 when the map is numerically CP).
  double choi_defect = 0.0;
};

// --- probe states -----------------------------------------------------------

inline Eigen::Vector2cd qubit_ket(Complex e_amp, Complex g_amp) {
  Eigen::Vector2cd v;
  v << e_amp, g_amp;
  return v.normalized();
}

inline Matrix4 product_state(const Eigen::Vector2cd& q1, const Eigen::Vector2cd& q2) {
  Eigen::Vector4cd psi = Eigen::kroneckerProduct(q1, q2);
  return psi * psi.adjoint();
}

// Generic two-qubit probe with unequal local phases; both qubits carry
// coherence, so every block is populated.
inline Matrix4 syn_probe_state() {
  const double quarter = 3.14159265358979323846 / 4.0;
  const double third = 3.14159265358979323846 / 3.0;
  const Eigen::Vector2cd q1 = qubit_ket(std::cos(quarter), std::sin(quarter));
  const Eigen::Vector2cd q2 = qubit_ket(std::cos(third), Complex(0.0, 1.0) * std::sin(third));
  return product_state(q1, q2);
}

// Maximally entangled antisymmetric state (|eg> - |ge>)/sqrt(2).
inline Matrix4 singlet_state() {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return psi * psi.adjoint();
}

// |++><++|: every density-matrix entry equals 1/4.
inline Matrix4 coherent_probe_state() {
  return Matrix4::Constant(Complex(0.25, 0.0));
}

inline Matrix4 basis_state(int index) {
  Matrix4 m = Matrix4::Zero();
  m(index, index) = 1.0;
  return m;
}

inline Matrix4 ground_state() { return basis_state(3); }
inline Matrix4 excited_state() { return basis_state(0); }

// --- mode-resolved trajectories ---------------------------------------------

// One exponential mode of an observable pair. The pointwise signal is
// sum_j signal_weight * Re[coeff_k e^{lambda t}]; the dominance bookkeeping
// uses the oscillation envelope amplitude envelope * |coeff_k|.
struct TrajectoryMode {
  Complex lambda;
  std::array<Complex, 2> coeff{};   // p_j * Tr[O_k tau_j] for k = 1, 2
  double envelope = 1.0;            // conjugate-pair envelope weight
  double signal_weight = 1.0;       // 2 when the conjugate block is implicit
};

namespace detail {

inline Matrix4 mode_matrix(const BlockSpectrum& spec, int j) {
  Vector16 v = Vector16::Zero();
  for (std::size_t i = 0; i < spec.indices.size(); ++i)
    v(spec.indices[i]) = spec.right(static_cast<int>(i), j);
  return unvectorize(v);
}

} // namespace detail

// Modes of the local coherences <sx_k>(t) carried by the d = +1 block. The
// d = -1 block is its conjugate, so each mode contributes the real-part
// envelope 2 |p c| e^{Re lambda t} cos(Im lambda t + arg(p c)).
inline std::vector<TrajectoryMode> coherence_modes(const SystemSpectra& spectra,
                                                   const Matrix4& rho0) {
  const BlockSpectrum& spec = spectra.blocks.at(1);
  const Eigen::VectorXcd weights = mode_weights(spec, rho0);
  const Matrix4 sx1 = embed(sigma_x(), 1), sx2 = embed(sigma_x(), 2);
  std::vector<TrajectoryMode> modes;
  for (int j = 0; j < spec.eigenvalues.size(); ++j) {
    TrajectoryMode m;
    m.lambda = spec.eigenvalues(j);
    const Matrix4 tau = detail::mode_matrix(spec, j);
    m.coeff[0] = weights(j) * (sx1 * tau).trace();
    m.coeff[1] = weights(j) * (sx2 * tau).trace();
    m.envelope = 2.0;      // the d = -1 conjugate doubles every envelope
    m.signal_weight = 2.0; // and is implicit in the pointwise sum
    modes.push_back(m);
  }
  return modes;
}

// Modes of the two excited populations carried by the d = 0 block. Real
// eigenvalues contribute bare exponentials; complex ones appear in
// conjugate pairs, each pair forming one oscillating envelope of weight 2.
inline std::vector<TrajectoryMode> population_modes(const SystemSpectra& spectra,
                                                    const Matrix4& rho0) {
  const BlockSpectrum& spec = spectra.blocks.at(0);
  const Eigen::VectorXcd weights = mode_weights(spec, rho0);
  const Matrix4 id = Matrix4::Identity();
  const Matrix4 p1 = 0.5 * (id + embed(sigma_z(), 1));
  const Matrix4 p2 = 0.5 * (id + embed(sigma_z(), 2));
  const double im_tol = 1e-12 * std::max(1.0, spectra.norm);
  std::vector<TrajectoryMode> modes;
  for (int j = 0; j < spec.eigenvalues.size(); ++j) {
    TrajectoryMode m;
    m.lambda = spec.eigenvalues(j);
    const Matrix4 tau = detail::mode_matrix(spec, j);
    m.coeff[0] = weights(j) * (p1 * tau).trace();
    m.coeff[1] = weights(j) * (p2 * tau).trace();
    // Complex block-0 eigenvalues come in conjugate pairs inside the same
    // block, so the pointwise sum already contains both members; only the
    // per-pair envelope amplitude carries the factor 2.
    m.envelope = std::abs(m.lambda.imag()) > im_tol ? 2.0 : 1.0;
    m.signal_weight = 1.0;
    modes.push_back(m);
  }
  return modes;
}

// Pointwise observable reconstruction from a mode list (sum of real-part
// envelopes). Used for trajectories and the Pearson signals.
inline double mode_signal(const std::vector<TrajectoryMode>& modes, int k, double t) {
  double acc = 0.0;
  for (const auto& m : modes) {
    const Complex z = m.coeff[static_cast<std::size_t>(k)] *
                      std::exp(m.lambda * t);
    acc += m.signal_weight * z.real();
  }
  return acc;
}

// --- dominance measures ------------------------------------------------------

namespace detail {

struct DominanceInput {
  std::vector<double> re;                   // Re lambda per retained mode
  std::vector<std::array<double, 2>> amp;   // envelope amplitudes per observable
};

// Shared dominance-time engine: the slowest retained mode must exceed every
// other mode's envelope by the dominance factor. Returns the latest such
// crossing over modes and observables.
inline DecayMeasure dominance_measure(const DominanceInput& in, int slow,
                                      const MeritConfig& cfg, const char* what) {
  const auto& a_slow = in.amp[static_cast<std::size_t>(slow)];
  if (a_slow[0] < cfg.amplitude_floor && a_slow[1] < cfg.amplitude_floor)
    throw NoSlowMode(std::string(what) + ": slow mode carries no amplitude");

  const double re_slow = in.re[static_cast<std::size_t>(slow)];
  bool any = false;
  double t_star = 0.0;
  for (std::size_t j = 0; j < in.re.size(); ++j) {
    if (static_cast<int>(j) == slow) continue;
    const double gap = re_slow - in.re[j];
    if (gap <= std::abs(re_slow) * cfg.degeneracy_rtol) continue; // same envelope
    for (int k = 0; k < 2; ++k) {
      const double a_fast = in.amp[j][static_cast<std::size_t>(k)];
      const double a_ref = a_slow[static_cast<std::size_t>(k)];
      if (a_fast < cfg.amplitude_floor || a_ref < cfg.amplitude_floor) continue;
      const double t = std::log(cfg.dominance_factor * a_fast / a_ref) / gap;
      t_star = any ? std::max(t_star, t) : t;
      any = true;
    }
  }

  DecayMeasure out;
  out.threshold_time = any ? t_star : 0.0;
  const double denom = out.threshold_time * re_slow;
  out.measure = denom == 0.0 ? kInf : std::abs(std::log(cfg.dominance_factor) / denom);
  return out;
}

} // namespace detail

// Synchronization: dominance time of the slowest single-excitation
// coherence mode. Returns measure 0 when the two slowest decay rates are
// degenerate (no mode ever dominates).
inline DecayMeasure synchronization_measure(const SystemSpectra& spectra,
                                            const Matrix4& rho0,
                                            const MeritConfig& cfg = {}) {
  const auto modes = coherence_modes(spectra, rho0);
  detail::DominanceInput in;
  for (const auto& m : modes) {
    in.re.push_back(m.lambda.real());
    in.amp.push_back({m.envelope * std::abs(m.coeff[0]),
                      m.envelope * std::abs(m.coeff[1])});
  }

  // Sorted ascending |Re| with Re <= 0, so mode 0 is slowest.
  const double re0 = in.re[0];
  double re_next = -kInf;
  for (std::size_t j = 1; j < in.re.size(); ++j) re_next = std::max(re_next, in.re[j]);
  if (in.re.size() > 1 &&
      std::abs(re_next - re0) <= cfg.degeneracy_rtol * std::max(std::abs(re0), 1e-300))
    return {kInf, 0.0};

  return detail::dominance_measure(in, 0, cfg, "synchronization_measure");
}

// Subradiance: dominance time of the slowest decaying population mode,
// steady states excluded. A degenerate steady subspace (second zero mode)
// means the subradiant lifetime diverges: measure = +inf sentinel.
inline DecayMeasure subradiance_measure(const SystemSpectra& spectra,
                                        const Matrix4& rho0,
                                        const MeritConfig& cfg = {}) {
  const auto modes = population_modes(spectra, rho0);
  const double tol = spectra.steady_tol();

  int steady_count = 0;
  detail::DominanceInput in;
  for (const auto& m : modes) {
    if (std::abs(m.lambda) < tol) {
      ++steady_count;
      continue;
    }
    in.re.push_back(m.lambda.real());
    in.amp.push_back({m.envelope * std::abs(m.coeff[0]),
                      m.envelope * std::abs(m.coeff[1])});
  }
  if (steady_count > 1) return {kInf, kInf};
  if (in.re.empty()) return {kInf, kInf};

  // Modes arrive sorted ascending |Re|; the first retained one is slowest.
  return detail::dominance_measure(in, 0, cfg, "subradiance_measure");
}

// --- windowed Pearson correlation --------------------------------------------

// Pearson coefficient of two signals over [t0, t0 + window], composite
// Simpson quadrature. n_intervals must be even and resolves the fastest
// oscillation (>= 40 samples per period at the qubit frequencies).
template <class F1, class F2>
double pearson_correlation(const F1& f1, const F2& f2, double t0, double window,
                           int n_intervals = 280) {
  if (n_intervals % 2 != 0) ++n_intervals;
  const int n = n_intervals;
  const double h = window / n;
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 1.0);
  for (int i = 1; i < n; ++i) w[static_cast<std::size_t>(i)] = (i % 2 == 1) ? 4.0 : 2.0;

  double wsum = 0.0, m1 = 0.0, m2 = 0.0;
  std::vector<double> s1(static_cast<std::size_t>(n) + 1), s2(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = t0 + h * i;
    s1[static_cast<std::size_t>(i)] = f1(t);
    s2[static_cast<std::size_t>(i)] = f2(t);
    wsum += w[static_cast<std::size_t>(i)];
    m1 += w[static_cast<std::size_t>(i)] * s1[static_cast<std::size_t>(i)];
    m2 += w[static_cast<std::size_t>(i)] * s2[static_cast<std::size_t>(i)];
  }
  m1 /= wsum;
  m2 /= wsum;

  double c11 = 0.0, c22 = 0.0, c12 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double d1 = s1[static_cast<std::size_t>(i)] - m1;
    const double d2 = s2[static_cast<std::size_t>(i)] - m2;
    c11 += w[static_cast<std::size_t>(i)] * d1 * d1;
    c22 += w[static_cast<std::size_t>(i)] * d2 * d2;
    c12 += w[static_cast<std::size_t>(i)] * d1 * d2;
  }

  // Variance floor at relative amplitude ~1e-12: a constant signal's mean
  // accumulates a few hundred ulp of rounding, so the floor must sit well
  // above (n * eps * mean)^2 while staying far below any live oscillation.
  const double scale = std::max({m1 * m1, m2 * m2, 1.0});
  if (c11 <= 1e-24 * wsum * scale || c22 <= 1e-24 * wsum * scale)
    throw DegenerateWindow("pearson_correlation: vanishing variance in window");
  return c12 / std::sqrt(c11 * c22);
}

// First window start after which |C| stays above the threshold on a
// half-window-stepped scan out to t_max. Returns +inf when never reached.
inline double pearson_locking_time(const std::vector<TrajectoryMode>& modes,
                                   double threshold, const MeritConfig& cfg,
                                   double t_max = 5000.0, double step = 2.0) {
  auto f1 = [&](double t) { return mode_signal(modes, 0, t); };
  auto f2 = [&](double t) { return mode_signal(modes, 1, t); };
  double candidate = kInf;
  for (double t = 0.0; t <= t_max; t += step) {
    double c;
    try {
      c = pearson_correlation(f1, f2, t, cfg.pearson_window);
    } catch (const DegenerateWindow&) {
      break; // signals have decayed away; no further locking information
    }
    if (std::abs(c) >= threshold) {
      if (std::isinf(candidate)) candidate = t;
    } else {
      candidate = kInf;
    }
  }
  return candidate;
}

// --- entanglement negativity --------------------------------------------------

template <class Derived>
double negativity(const Eigen::MatrixBase<Derived>& rho) {
  const Matrix4 pt = partial_transpose_2(rho);
  const Matrix4 herm = 0.5 * (pt + pt.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(herm);
  double neg = 0.0;
  for (int i = 0; i < 4; ++i) neg += std::max(0.0, -solver.eigenvalues()(i));
  return neg;
}

// --- peak search over time -----------------------------------------------------

namespace detail {

inline double auto_t_max(const SystemSpectra& spectra, const MeritConfig& cfg) {
  if (cfg.grid_t_max > 0.0) return cfg.grid_t_max;
  double slowest = kInf;
  const double tol = spectra.steady_tol();
  for (const auto& [d, spec] : spectra.blocks)
    for (int j = 0; j < spec.eigenvalues.size(); ++j) {
      const Complex ev = spec.eigenvalues(j);
      if (std::abs(ev) >= tol && std::abs(ev.real()) > 0.0)
        slowest = std::min(slowest, std::abs(ev.real()));
    }
  double lifetime = std::isfinite(slowest) && slowest > 0.0 ? 1.0 / slowest : 0.0;
  if (std::isfinite(cfg.t1_hint)) lifetime = std::max(lifetime, cfg.t1_hint);
  if (lifetime == 0.0) return 1e4;
  return cfg.grid_span_factor * lifetime;
}

// Geometric grid sweep plus parabolic refinement in log t.
inline PeakMeasure maximize_over_time(const std::function<double(double)>& f,
                                      double t_min, double t_max,
                                      const MeritConfig& cfg) {
  const int n = std::max(cfg.grid_points, 8);
  const double la = std::log(t_min), lb = std::log(std::max(t_max, t_min * 2.0));
  std::vector<double> ts(static_cast<std::size_t>(n)), vs(static_cast<std::size_t>(n));
  int best = 0;
  for (int i = 0; i < n; ++i) {
    const double t = std::exp(la + (lb - la) * i / (n - 1));
    ts[static_cast<std::size_t>(i)] = t;
    vs[static_cast<std::size_t>(i)] = f(t);
    if (vs[static_cast<std::size_t>(i)] > vs[static_cast<std::size_t>(best)]) best = i;
  }

  double x0, x1, x2, y0, y1, y2;
  if (best == 0 || best == n - 1) {
    // Peak at a grid edge: no interior bracket, skip refinement.
    return {ts[static_cast<std::size_t>(best)], vs[static_cast<std::size_t>(best)]};
  }
  x0 = std::log(ts[static_cast<std::size_t>(best - 1)]);
  x1 = std::log(ts[static_cast<std::size_t>(best)]);
  x2 = std::log(ts[static_cast<std::size_t>(best + 1)]);
  y0 = vs[static_cast<std::size_t>(best - 1)];
  y1 = vs[static_cast<std::size_t>(best)];
  y2 = vs[static_cast<std::size_t>(best + 1)];

  for (int round = 0; round < cfg.refine_rounds; ++round) {
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curv = 2.0 * (d12 - d01) / (x2 - x0);
    double xv;
    if (curv >= 0.0) {
      xv = 0.5 * (x0 + x2); // flat or inverted fit: bisect the bracket
    } else {
      // Vertex of the quadratic through the three bracket points.
      xv = 0.5 * (x0 + x1) - d01 / curv;
    }
    if (!(xv > x0 && xv < x2) || xv == x1) xv = 0.5 * (x0 + x2);
    if (xv == x1) break;
    const double yv = f(std::exp(xv));
    // Re-bracket around the better of (x1, xv).
    if (yv > y1) {
      if (xv < x1) { x2 = x1; y2 = y1; } else { x0 = x1; y0 = y1; }
      x1 = xv; y1 = yv;
    } else {
      if (xv < x1) { x0 = xv; y0 = yv; } else { x2 = xv; y2 = yv; }
    }
  }
  return {std::exp(x1), y1};
}

} // namespace detail

// Peak negativity over a geometric time grid with parabolic refinement.
inline PeakMeasure max_negativity(const SystemSpectra& spectra, const Matrix4& rho0,
                                  const MeritConfig& cfg = {}) {
  auto f = [&](double t) { return negativity(evolve(spectra, rho0, t)); };
  return detail::maximize_over_time(f, cfg.grid_t_min,
                                    detail::auto_t_max(spectra, cfg), cfg);
}

// --- Choi state, entropies, collectiveness -------------------------------------

// Choi state of the propagator E (row-major vec convention):
//   Phi[(u,s),(v,t)] = E[(u,v),(s,t)] / 4.
// Trace-preserving E gives Tr Phi = 1; complete positivity gives Phi >= 0.
inline Superop choi_matrix(const Superop& e) {
  Superop phi;
  for (int u = 0; u < 4; ++u)
    for (int s = 0; s < 4; ++s)
      for (int v = 0; v < 4; ++v)
        for (int t = 0; t < 4; ++t)
          phi(4 * u + s, 4 * v + t) = e(4 * u + v, 4 * s + t) / 4.0;
  return phi;
}

// Von Neumann entropy (natural log) with spectrum clamped at 1e-14. The
// partial-secular generator is not exactly completely positive (the rate
// matrices pick up non-Hermitian-PSD corrections of order the bath-shift
// differences), so small negative Choi eigenvalues are expected physics:
// they are clamped here and surfaced through min_eigenvalue so callers can
// flag them. Eigenvalues below -1e-2 mean the input is not a state at all.
template <class Derived>
double von_neumann_entropy(const Eigen::MatrixBase<Derived>& rho,
                           double* min_eigenvalue = nullptr) {
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
  double s = 0.0;
  double lowest = kInf;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) {
    const double p = solver.eigenvalues()(i);
    lowest = std::min(lowest, p);
    if (p < -1e-2)
      throw CpViolation("von_neumann_entropy: eigenvalue below -1e-2");
    if (p > 1e-14) s -= p * std::log(p);
  }
  if (min_eigenvalue != nullptr) *min_eigenvalue = lowest;
  return s;
}

namespace detail {

// Partial traces of the Choi state over the (output, input) pair of qubit 1
// or qubit 2. Row index bits of Phi: (a1 a2 c1 c2) = output pair, input pair.
inline Matrix4 choi_trace_first(const Superop& phi) {
  Matrix4 out = Matrix4::Zero();
  for (int a2 = 0; a2 < 2; ++a2)
    for (int c2 = 0; c2 < 2; ++c2)
      for (int b2 = 0; b2 < 2; ++b2)
        for (int d2 = 0; d2 < 2; ++d2) {
          Complex acc = 0.0;
          for (int a1 = 0; a1 < 2; ++a1)
            for (int c1 = 0; c1 < 2; ++c1)
              acc += phi(8 * a1 + 4 * a2 + 2 * c1 + c2, 8 * a1 + 4 * b2 + 2 * c1 + d2);
          out(2 * a2 + c2, 2 * b2 + d2) = acc;
        }
  return out;
}

inline Matrix4 choi_trace_second(const Superop& phi) {
  Matrix4 out = Matrix4::Zero();
  for (int a1 = 0; a1 < 2; ++a1)
    for (int c1 = 0; c1 < 2; ++c1)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int d1 = 0; d1 < 2; ++d1) {
          Complex acc = 0.0;
          for (int a2 = 0; a2 < 2; ++a2)
            for (int c2 = 0; c2 < 2; ++c2)
              acc += phi(8 * a1 + 4 * a2 + 2 * c1 + c2, 8 * b1 + 4 * a2 + 2 * d1 + c2);
          out(2 * a1 + c1, 2 * b1 + d1) = acc;
        }
  return out;
}

} // namespace detail

// Collectiveness of a propagator: normalized mutual information between the
// two single-qubit reductions of its Choi state,
//   I = [S(Phi_1) + S(Phi_2) - S(Phi)] / (4 ln 2),
// which is 0 for product maps and 1 for maximally correlating ones (SWAP).
// cp_defect, when requested, receives the most negative eigenvalue of the
// Choi state (0 when it is numerically PSD): the complete-positivity
// diagnostic for the clamped entropies.
inline double collectiveness(const Superop& e, double* cp_defect = nullptr) {
  const Superop phi = choi_matrix(e);
  double lowest = 0.0;
  const double s_full = von_neumann_entropy(phi, &lowest);
  if (cp_defect != nullptr) *cp_defect = std::min(lowest, 0.0);
  const double s1 = von_neumann_entropy(detail::choi_trace_first(phi));
  const double s2 = von_neumann_entropy(detail::choi_trace_second(phi));
  return (s1 + s2 - s_full) / (4.0 * std::log(2.0));
}

inline PeakMeasure max_collectiveness(const SystemSpectra& spectra,
                                      const MeritConfig& cfg = {}) {
  auto f = [&](double t) { return collectiveness(propagator(spectra, t)); };
  return detail::maximize_over_time(f, cfg.grid_t_min,
                                    detail::auto_t_max(spectra, cfg), cfg);
}

// --- entanglement generation criterion ------------------------------------------

struct EntanglingReport {
  bool entangling = false;
  Matrix4 m = Matrix4::Zero(); // generator matrix in the moving product frame
};

namespace detail {

inline Eigen::Vector2cd perp_ket(const Eigen::Vector2cd& v) {
  Eigen::Vector2cd w;
  w << -std::conj(v(1)), std::conj(v(0));
  return w;
}

} // namespace detail

// Entanglement-generation test for the pure product state q1 (x) q2: the
// partially transposed generator is expressed in the frame
//   Psi_1 = psi (x) phi*, Psi_2 = psi (x) phi*_perp,
//   Psi_3 = psi_perp (x) phi*, Psi_4 = psi_perp (x) phi*_perp,
// and the state starts to entangle iff M22 M33 < |M23|^2.
inline EntanglingReport entangling_condition(const Eigen::Vector2cd& q1,
                                             const Eigen::Vector2cd& q2,
                                             const Superop& liouvillian) {
  const Superop lt = build_pt_liouvillian(liouvillian);

  const Eigen::Vector2cd psi = q1.normalized();
  const Eigen::Vector2cd phi_c = q2.normalized().conjugate();
  const Eigen::Vector2cd psi_p = detail::perp_ket(psi);
  const Eigen::Vector2cd phi_cp = detail::perp_ket(phi_c);

  const Matrix4 rho_t2 = product_state(psi, phi_c); // rho^T2 of |psi phi>
  const Matrix4 x = unvectorize(Vector16(lt * vectorize(rho_t2)));

  std::array<Eigen::Vector4cd, 4> frame = {
      Eigen::kroneckerProduct(psi, phi_c).eval(),
      Eigen::kroneckerProduct(psi, phi_cp).eval(),
      Eigen::kroneckerProduct(psi_p, phi_c).eval(),
      Eigen::kroneckerProduct(psi_p, phi_cp).eval(),
  };

  EntanglingReport out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out.m(i, j) = frame[static_cast<std::size_t>(i)].dot(
          x * frame[static_cast<std::size_t>(j)]);
  out.entangling = out.m(1, 1).real() * out.m(2, 2).real() <
                   std::norm(out.m(1, 2));
  return out;
}

inline EntanglingReport entangling_condition(const Eigen::Vector2cd& q1,
                                             const Eigen::Vector2cd& q2,
                                             const RateSet& rates,
                                             const ModelParams& model) {
  return entangling_condition(q1, q2, build_liouvillian(rates, model));
}

} // namespace qsync
