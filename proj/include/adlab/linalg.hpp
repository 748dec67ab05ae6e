#pragma once

#include <Eigen/Dense>
#include <complex>

namespace adlab {

using Eigen::Matrix2cd;
using Eigen::Vector2cd;
using Eigen::Vector3d;

inline Matrix2cd pauli_x() {
  Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix2cd pauli_y() {
  Matrix2cd m;
  m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  return m;
}

inline Matrix2cd pauli_z() {
  Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

// Eigendecomposition of a 2x2 Hermitian matrix, ordered e0 <= e1.
// Eigenvectors are unit norm, mutually orthogonal, with a deterministic
// gauge: the component of largest modulus is real and positive.
struct Eigensystem2 {
  double e0 = 0;
  double e1 = 0;
  Vector2cd v0 = Vector2cd::Zero();
  Vector2cd v1 = Vector2cd::Zero();

  double gap() const { return e1 - e0; }
};

bool is_hermitian(const Matrix2cd& h, double tol = 1e-12);

// H = c (n_x sigma_x + n_y sigma_y + n_z sigma_z). Hermitian by construction.
// Throws std::invalid_argument on non-finite input.
Matrix2cd from_pauli(double c, const Vector3d& n);

// Closed-form (quadratic formula) eigensolve. Degenerate input (gap below
// ~1e-13) returns the canonical basis; callers needing a gap must check it.
Eigensystem2 eig2(const Matrix2cd& h);

}  // namespace adlab
