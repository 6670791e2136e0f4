#pragma once

// Block-wise spectral decomposition of the generator and normal-mode
// evolution. Right eigenmatrices tau_j and left duals tau~_j satisfy
// Tr[tau~_j^+ tau_k] = delta_jk, so rho(t) = sum_j p_j e^{lambda_j t} tau_j
// with mode weights p_j = Tr[tau~_j^+ rho(0)].

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "qsync/lindblad.hpp"
#include "qsync/operators.hpp"
#include "qsync/types.hpp"

namespace qsync {

struct BlockSpectrum {
  Eigen::VectorXcd eigenvalues;    // sorted ascending |Re|, ties ascending Im
  Eigen::MatrixXcd right;          // columns: vectorized modes on the block
  Eigen::MatrixXcd left;           // rows: dual (left) modes, left = right^{-1}
  std::vector<int> indices;        // flat 16-dim indices spanned by the block
};

struct SystemSpectra {
  std::map<int, BlockSpectrum> blocks;
  double norm = 0.0; // max-norm of the originating generator

  // Threshold below which an eigenvalue counts as a steady (zero) mode.
  double steady_tol() const { return 1e-12 * std::max(1.0, norm); }
};

namespace detail {

inline double condition_number(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return kInf;
  return sv(0) / smin;
}

} // namespace detail

// Eigendecomposition of one block. Throws NonDiagonalizable when the right
// eigenvector matrix is ill conditioned (cond > 1e8), which is how a Jordan
// structure manifests numerically.
inline BlockSpectrum diagonalize_block(const Eigen::MatrixXcd& block,
                                       std::vector<int> indices = {}) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(block, true);
  if (solver.info() != Eigen::Success)
    throw NonDiagonalizable("diagonalize_block: eigensolver failed");

  const int n = static_cast<int>(block.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ra = std::abs(ev(a).real()), rb = std::abs(ev(b).real());
    if (ra != rb) return ra < rb;
    return ev(a).imag() < ev(b).imag();
  });

  BlockSpectrum out;
  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.eigenvalues(i) = ev(order[static_cast<std::size_t>(i)]);
    out.right.col(i) = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  if (detail::condition_number(out.right) > 1e8)
    throw NonDiagonalizable("diagonalize_block: eigenvector matrix condition exceeds 1e8");
  out.left = out.right.inverse();
  out.indices = std::move(indices);
  return out;
}

inline SystemSpectra diagonalize(const BlockSet& blocks) {
  SystemSpectra out;
  out.norm = blocks.norm;
  for (const auto& [d, m] : blocks.blocks)
    out.blocks[d] = diagonalize_block(m, block_indices().at(d));
  return out;
}

inline SystemSpectra diagonalize(const Superop& l) {
  return diagonalize(block_decompose(l));
}

// Mode weights of a state on one block: p = left * vec(rho) restricted to
// the block's indices.
inline Eigen::VectorXcd mode_weights(const BlockSpectrum& spec, const Matrix4& rho) {
  const Vector16 v = vectorize(rho);
  Eigen::VectorXcd restricted(spec.indices.size());
  for (std::size_t i = 0; i < spec.indices.size(); ++i)
    restricted(static_cast<int>(i)) = v(spec.indices[i]);
  return spec.left * restricted;
}

// Normal-mode propagation of a state: each block evolves independently.
inline Matrix4 evolve(const SystemSpectra& spectra, const Matrix4& rho0, double t) {
  Vector16 v = Vector16::Zero();
  const Vector16 v0 = vectorize(rho0);
  for (const auto& [d, spec] : spectra.blocks) {
    const int n = static_cast<int>(spec.indices.size());
    Eigen::VectorXcd restricted(n);
    for (int i = 0; i < n; ++i) restricted(i) = v0(spec.indices[i]);
    Eigen::VectorXcd weights = spec.left * restricted;
    for (int j = 0; j < n; ++j) weights(j) *= std::exp(spec.eigenvalues(j) * t);
    const Eigen::VectorXcd evolved = spec.right * weights;
    for (int i = 0; i < n; ++i) v(spec.indices[i]) += evolved(i);
  }
  return unvectorize(v);
}

// Full 16x16 propagator e^{L t}, assembled block by block from the spectra.
inline Superop propagator(const SystemSpectra& spectra, double t) {
  Superop e = Superop::Zero();
  for (const auto& [d, spec] : spectra.blocks) {
    const int n = static_cast<int>(spec.indices.size());
    Eigen::MatrixXcd block = spec.right *
        (spec.eigenvalues.array() * t).exp().matrix().asDiagonal() * spec.left;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) e(spec.indices[r], spec.indices[c]) = block(r, c);
  }
  return e;
}

// Propagator through scaling-and-squaring matrix exponential; reference
// route that does not require diagonalizability.
inline Superop propagator(const Superop& l, double t) {
  return (l * t).exp();
}

// Indices (within the sorted block spectrum) of steady modes.
inline std::vector<int> steady_modes(const SystemSpectra& spectra, const BlockSpectrum& spec) {
  std::vector<int> out;
  for (int j = 0; j < spec.eigenvalues.size(); ++j)
    if (std::abs(spec.eigenvalues(j)) < spectra.steady_tol()) out.push_back(j);
  return out;
}

// Greedy multiset matching distance between two equal-size eigenvalue sets:
// repeatedly pair the globally closest remaining values and report the
// largest paired distance. Exact for well-separated spectra and a tight
// upper bound in near-degenerate cases.
inline double spectrum_match_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("spectrum_match_distance: size mismatch");
  double worst = 0.0;
  while (!a.empty()) {
    std::size_t bi = 0, bj = 0;
    double best = kInf;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    worst = std::max(worst, best);
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(bi));
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return worst;
}

// Convenience: all 16 eigenvalues of a block set as one flat vector.
inline std::vector<Complex> flat_spectrum(const SystemSpectra& spectra) {
  std::vector<Complex> out;
  for (const auto& [d, spec] : spectra.blocks)
    for (int j = 0; j < spec.eigenvalues.size(); ++j)
      out.push_back(spec.eigenvalues(j));
  return out;
}

} // namespace qsync
