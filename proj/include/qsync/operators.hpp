#pragma once

// Fixed operator algebra on the two-qubit space and the vectorization
// helpers used to build superoperators. Single-qubit basis order is (e, g).

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qsync/types.hpp"

namespace qsync {

inline Matrix2 sigma_minus() {
  Matrix2 m = Matrix2::Zero();
  m(1, 0) = 1.0; // |g><e|
  return m;
}

inline Matrix2 sigma_plus() {
  Matrix2 m = Matrix2::Zero();
  m(0, 1) = 1.0; // |e><g|
  return m;
}

inline Matrix2 sigma_z() {
  Matrix2 m = Matrix2::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

inline Matrix2 sigma_x() {
  Matrix2 m = Matrix2::Zero();
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

// Embed a single-qubit operator on qubit 1 or 2 (1-based index).
inline Matrix4 embed(const Matrix2& op, int qubit) {
  const Matrix2 id = Matrix2::Identity();
  if (qubit == 1) return Eigen::kroneckerProduct(op, id);
  if (qubit == 2) return Eigen::kroneckerProduct(id, op);
  throw std::invalid_argument("embed: qubit index must be 1 or 2");
}

inline Matrix4 lowering(int qubit) { return embed(sigma_minus(), qubit); }
inline Matrix4 raising(int qubit) { return embed(sigma_plus(), qubit); }

// Row-major vectorization: vec(|a><b|) lives at flat index 4a+b.
template <class Derived>
Vector16 vectorize(const Eigen::MatrixBase<Derived>& rho) {
  Vector16 v;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) v(4 * a + b) = rho(a, b);
  return v;
}

template <class Derived>
Matrix4 unvectorize(const Eigen::MatrixBase<Derived>& v) {
  Matrix4 m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = v(4 * a + b);
  return m;
}

// Superoperator factories for row-major vec: vec(A rho B) = A (x) B^T vec(rho).
inline Superop left_mul(const Matrix4& a) {
  return Eigen::kroneckerProduct(a, Matrix4::Identity());
}

inline Superop right_mul(const Matrix4& b) {
  return Eigen::kroneckerProduct(Matrix4::Identity(), b.transpose().eval());
}

inline Superop sandwich(const Matrix4& a, const Matrix4& b) {
  return Eigen::kroneckerProduct(a, b.transpose().eval());
}

// Dissipator superoperator for jump operator L with unit rate:
//   D[L] rho = L rho L^+ - 1/2 {L^+ L, rho}.
// The general two-operator form D(A, B) rho = A rho B^+ - 1/2 {B^+ A, rho}
// covers the cross terms of a correlated-rate matrix.
inline Superop dissipator(const Matrix4& a, const Matrix4& b) {
  const Matrix4 ba = b.adjoint() * a;
  return sandwich(a, b.adjoint()) - 0.5 * (left_mul(ba) + right_mul(ba));
}

// Commutator superoperator -i [H, .].
inline Superop hamiltonian_part(const Matrix4& h) {
  return Complex(0.0, -1.0) * (left_mul(h) - right_mul(h));
}

// Permutation implementing partial transposition on qubit 2 at the
// superoperator level: (T2 rho) entries are rho with the second-qubit bra
// and ket labels exchanged. Conjugating a superoperator by this matrix
// yields T2 o L o T2. The permutation is involutive and symmetric.
inline Superop t2_permutation() {
  Superop p = Superop::Zero();
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) {
          const int row = (2 * a1 + a2) * 4 + (2 * b1 + b2);
          const int col = (2 * a1 + b2) * 4 + (2 * b1 + a2);
          p(row, col) = 1.0;
        }
  return p;
}

// Partial transpose of a 4x4 two-qubit operator on the second qubit.
template <class Derived>
Matrix4 partial_transpose_2(const Eigen::MatrixBase<Derived>& rho) {
  Matrix4 out;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
          out(2 * a1 + b2, 2 * b1 + a2) = rho(2 * a1 + a2, 2 * b1 + b2);
  return out;
}

} // namespace qsync
