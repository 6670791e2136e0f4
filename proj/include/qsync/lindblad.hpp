#pragma once

// Partial-secular Lindblad generator for two qubits in a common thermal
// bath, plus an optional local T1 channel on each qubit. Cross terms
// between the qubits are retained, so near-degenerate qubits develop
// collective (super/subradiant) dynamics; the generator stays phase
// covariant and decomposes into five excitation-difference blocks.

#include <array>
#include <map>
#include <vector>

#include "qsync/bath.hpp"
#include "qsync/operators.hpp"
#include "qsync/types.hpp"

namespace qsync {

// Correlated decay/absorption rates and the associated frequency shifts.
// Entries are indexed (j, k) over the two qubits; gamma matrices are
// Hermitian and positive semidefinite, s matrices Hermitian.
struct RateSet {
  Matrix2 gamma_down = Matrix2::Zero();
  Matrix2 gamma_up = Matrix2::Zero();
  Matrix2 s_down = Matrix2::Zero();
  Matrix2 s_up = Matrix2::Zero();
};

// Rates from the bath correlation function at the two qubit frequencies:
//   gamma_jk(down) = g_j g_k (Gamma(w_j) + Gamma(w_k)*) + delta_jk / T1,
//   gamma_jk(up)   = g_j g_k (Gamma(-w_j) + Gamma(-w_k)*),
//   s_jk(down)     = g_j g_k (Gamma(w_j) - Gamma(w_k)*) / 2i,
// and likewise s(up) at negated frequencies. At zero temperature the
// absorption channel closes identically: gamma_up = s_up = 0.
// The local T1 channel is taken at zero temperature and contributes no
// frequency shift.
inline RateSet compute_rates(const ModelParams& model, double rel_tol = 1e-10) {
  validate(model);
  const std::array<double, 2> w = {model.omega1, model.omega2};
  const std::array<double, 2> g = {model.g1, model.g2};

  std::array<Complex, 2> gamma_pos, gamma_neg;
  const bool cold = model.bath.zero_temperature();
  for (int j = 0; j < 2; ++j) {
    gamma_pos[j] = half_fourier(w[j], model.bath, rel_tol);
    gamma_neg[j] = cold ? Complex(0.0, 0.0)
                        : half_fourier(-w[j], model.bath, rel_tol);
  }

  RateSet r;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const double gg = g[j] * g[k];
      r.gamma_down(j, k) = gg * (gamma_pos[j] + std::conj(gamma_pos[k]));
      r.gamma_up(j, k) = gg * (gamma_neg[j] + std::conj(gamma_neg[k]));
      r.s_down(j, k) = gg * (gamma_pos[j] - std::conj(gamma_pos[k])) / Complex(0.0, 2.0);
      r.s_up(j, k) = gg * (gamma_neg[j] - std::conj(gamma_neg[k])) / Complex(0.0, 2.0);
    }
  }

  if (std::isfinite(model.t1_local)) {
    const double local = 1.0 / model.t1_local;
    r.gamma_down(0, 0) += local;
    r.gamma_down(1, 1) += local;
  }
  return r;
}

// Generator in vectorized form (16x16). The coherent part contains the bare
// splittings and the bath-induced shifts; the dissipative part carries the
// correlated emission and absorption channels:
//   H = sum_j w_j/2 sz_j + sum_jk [ s_jk(down) sp_k sm_j + s_jk(up) sm_k sp_j ]
//   D = sum_jk gamma_jk(down) D(sm_j, sm_k) + gamma_jk(up) D(sp_j, sp_k).
inline Superop build_liouvillian(const RateSet& rates, const ModelParams& model) {
  Matrix4 h = Matrix4::Zero();
  h += 0.5 * model.omega1 * embed(sigma_z(), 1);
  h += 0.5 * model.omega2 * embed(sigma_z(), 2);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const Matrix4 sm_j = lowering(j + 1), sm_k = lowering(k + 1);
      const Matrix4 sp_j = raising(j + 1), sp_k = raising(k + 1);
      h += rates.s_down(j, k) * (sp_k * sm_j);
      h += rates.s_up(j, k) * (sm_k * sp_j);
    }
  }

  Superop l = hamiltonian_part(h);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      l += rates.gamma_down(j, k) * dissipator(lowering(j + 1), lowering(k + 1));
      l += rates.gamma_up(j, k) * dissipator(raising(j + 1), raising(k + 1));
    }
  }
  return l;
}

// Excitation-difference grading of the 16 vectorized basis elements
// |a><b|: d(|a><b|) = n(a) - n(b) with n the number of excited qubits in
// the difference sense (d in {-2,...,2}). A phase-covariant generator is
// block diagonal in this grading.
inline const std::map<int, std::vector<int>>& block_indices() {
  static const std::map<int, std::vector<int>> blocks = {
      {0, {0, 5, 6, 9, 10, 15}},  // populations + eg/ge coherences
      {1, {1, 2, 7, 11}},         // single-excitation coherences
      {-1, {4, 8, 13, 14}},
      {2, {3}},                   // ee-gg coherence
      {-2, {12}},
  };
  return blocks;
}

struct BlockSet {
  std::map<int, Eigen::MatrixXcd> blocks; // keyed by excitation difference d
  double norm = 0.0;                      // max-norm of the full generator
};

// Extract the five diagonal blocks, verifying that every cross-block entry
// vanishes to round-off (relative threshold 1e-12 * max|L|).
inline BlockSet block_decompose(const Superop& l) {
  BlockSet out;
  out.norm = l.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * std::max(1.0, out.norm);

  std::array<int, 16> block_of{};
  for (const auto& [d, idx] : block_indices())
    for (int i : idx) block_of[static_cast<std::size_t>(i)] = d;
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c)
      if (block_of[r] != block_of[c] && std::abs(l(r, c)) > tol)
        throw NotPhaseCovariant("block_decompose: cross-block entry above threshold");

  for (const auto& [d, idx] : block_indices()) {
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = l(idx[r], idx[c]);
    out.blocks[d] = std::move(m);
  }
  return out;
}

// Partially transposed generator T2 o L o T2 (superoperator conjugation by
// the qubit-2 transposition permutation). Governs d/dt of rho^T2, whose
// short-time action decides whether entanglement can be generated.
inline Superop build_pt_liouvillian(const Superop& l) {
  const Superop p = t2_permutation();
  return p * l * p;
}

inline Superop build_pt_liouvillian(const RateSet& rates, const ModelParams& model) {
  return build_pt_liouvillian(build_liouvillian(rates, model));
}

// Fully collective infinite-temperature limit: equal weights, a single
// rate gamma for every emission and absorption entry (j, k), coherent
// exchange s_plus:
//   H = w/2 (sz_1 + sz_2) + s_plus (sp_1 sm_2 + sp_2 sm_1),
//   D = gamma sum_jk [ D(sm_j, sm_k) + D(sp_j, sp_k) ].
inline Superop build_linf(double omega, double gamma, double s_plus) {
  Matrix4 h = Matrix4::Zero();
  h += 0.5 * omega * (embed(sigma_z(), 1) + embed(sigma_z(), 2));
  h += s_plus * (raising(1) * lowering(2) + raising(2) * lowering(1));

  Superop l = hamiltonian_part(h);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      l += gamma * dissipator(lowering(j + 1), lowering(k + 1));
      l += gamma * dissipator(raising(j + 1), raising(k + 1));
    }
  }
  return l;
}

} // namespace qsync
