#include "adlab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace adlab {

bool is_hermitian(const Matrix2cd& h, double tol) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Matrix2cd from_pauli(double c, const Vector3d& n) {
  if (!std::isfinite(c) || !n.allFinite()) {
    throw std::invalid_argument("from_pauli: non-finite input");
  }
  Matrix2cd h;
  h(0, 0) = c * n.z();
  h(1, 1) = -c * n.z();
  h(0, 1) = c * std::complex<double>(n.x(), -n.y());
  h(1, 0) = c * std::complex<double>(n.x(), n.y());
  return h;
}

namespace {

// Phase convention: largest-modulus component real positive; ties prefer
// the first component.
void fix_gauge(Vector2cd& v) {
  const int i = std::norm(v(0)) >= std::norm(v(1)) ? 0 : 1;
  const double m = std::abs(v(i));
  if (m > 0) v *= std::conj(v(i)) / m;
}

}  // namespace

Eigensystem2 eig2(const Matrix2cd& h) {
  if (!is_hermitian(h)) {
    throw std::invalid_argument("eig2: matrix is not Hermitian");
  }
  const double a = h(0, 0).real();
  const double b = h(1, 1).real();
  const std::complex<double> c = 0.5 * (h(0, 1) + std::conj(h(1, 0)));

  const double mean = 0.5 * (a + b);
  const double r = std::hypot(0.5 * (a - b), c.real(), c.imag());

  Eigensystem2 es;
  es.e0 = mean - r;
  es.e1 = mean + r;

  if (r <= 1e-13 * std::max(1.0, std::abs(mean))) {
    es.v0 = Vector2cd(1, 0);
    es.v1 = Vector2cd(0, 1);
    return es;
  }

  // (c, e-a) and (e-b, conj c) both solve (H - e) v = 0; pick the better
  // conditioned one for the ground state.
  const Vector2cd cand1(c, std::complex<double>(es.e0 - a, 0));
  const Vector2cd cand2(std::complex<double>(es.e0 - b, 0), std::conj(c));
  Vector2cd v = cand1.squaredNorm() >= cand2.squaredNorm() ? cand1 : cand2;
  v.normalize();
  fix_gauge(v);
  es.v0 = v;

  // Orthogonal complement of v0 is exactly the other eigenspace.
  es.v1 = Vector2cd(-std::conj(v(1)), std::conj(v(0)));
  fix_gauge(es.v1);
  return es;
}

}  // namespace adlab
