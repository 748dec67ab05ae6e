#include <doctest.h>

#include <cmath>
#include <random>

#include "adlab/linalg.hpp"

using namespace adlab;

namespace {

Matrix2cd random_hermitian(std::mt19937& rng) {
  std::normal_distribution<double> g;
  Matrix2cd h;
  h(0, 0) = g(rng);
  h(1, 1) = g(rng);
  const std::complex<double> c(g(rng), g(rng));
  h(0, 1) = c;
  h(1, 0) = std::conj(c);
  return h;
}

double residual(const Matrix2cd& h, double e, const Vector2cd& v) {
  return (h * v - e * v).norm();
}

}  // namespace

TEST_CASE("from_pauli reproduces the Pauli matrices") {
  const Matrix2cd hz = from_pauli(1.0, Vector3d(0, 0, 1));
  CHECK(hz(0, 0).real() == doctest::Approx(1.0));
  CHECK(hz(1, 1).real() == doctest::Approx(-1.0));
  CHECK(std::abs(hz(0, 1)) == doctest::Approx(0.0));

  // field along z with c = -omega0/2
  const Matrix2cd h = from_pauli(-0.5, Vector3d(std::sin(0.0), 0, std::cos(0.0)));
  CHECK(h(0, 0).real() == doctest::Approx(-0.5));
  CHECK(h(1, 1).real() == doctest::Approx(0.5));

  const Matrix2cd hx = from_pauli(1.0, Vector3d(1, 0, 0));
  CHECK(hx(0, 0).real() == doctest::Approx(0.0));
  CHECK(hx(0, 1).real() == doctest::Approx(1.0));
  CHECK(hx(1, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("from_pauli rejects non-finite input") {
  CHECK_THROWS_AS(from_pauli(std::nan(""), Vector3d(1, 0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(from_pauli(1.0, Vector3d(1, 0, std::numeric_limits<double>::infinity())),
                  std::invalid_argument);
}

TEST_CASE("eig2 on a diagonal matrix") {
  Matrix2cd h = Matrix2cd::Zero();
  h(0, 0) = -0.5;
  h(1, 1) = 0.5;
  const Eigensystem2 es = eig2(h);
  CHECK(es.e0 == doctest::Approx(-0.5));
  CHECK(es.e1 == doctest::Approx(0.5));
  CHECK(std::abs(es.v0(0) - 1.0) < 1e-14);
  CHECK(std::abs(es.v0(1)) < 1e-14);
  CHECK(std::abs(es.v1(1) - 1.0) < 1e-14);
}

TEST_CASE("eig2 on sigma_x") {
  const Eigensystem2 es = eig2(from_pauli(1.0, Vector3d(1, 0, 0)));
  CHECK(es.e0 == doctest::Approx(-1.0));
  CHECK(es.e1 == doctest::Approx(1.0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(es.v0(0)) - s) < 1e-14);
  CHECK(std::abs(std::abs(es.v0(1)) - s) < 1e-14);
  // up to gauge: components have opposite sign for the ground state
  CHECK(std::abs(es.v0(0) + es.v0(1)) < 1e-14);
  CHECK(std::abs(es.v1(0) - es.v1(1)) < 1e-14);
}

TEST_CASE("eig2 gauge: largest component real positive") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Eigensystem2 es = eig2(random_hermitian(rng));
    for (const Vector2cd& v : {es.v0, es.v1}) {
      const int idx = std::norm(v(0)) >= std::norm(v(1)) ? 0 : 1;
      CHECK(v(idx).imag() == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(v(idx).real() > 0);
    }
  }
}

TEST_CASE("eig2 residuals, orthogonality, trace and determinant on random input") {
  std::mt19937 rng(42);
  double max_resid = 0, max_ortho = 0;
  for (int i = 0; i < 1000; ++i) {
    const Matrix2cd h = random_hermitian(rng);
    const Eigensystem2 es = eig2(h);
    max_resid = std::max({max_resid, residual(h, es.e0, es.v0), residual(h, es.e1, es.v1)});
    max_ortho = std::max(max_ortho, std::abs(es.v0.dot(es.v1)));
    CHECK(std::abs(es.v0.norm() - 1.0) < 1e-13);
    CHECK(std::abs(es.v1.norm() - 1.0) < 1e-13);

    const double tr = (h(0, 0) + h(1, 1)).real();
    const double det = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
    const double scale = std::max(1.0, std::abs(tr));
    CHECK(std::abs(es.e0 + es.e1 - tr) < 1e-12 * scale);
    CHECK(std::abs(es.e0 * es.e1 - det) < 1e-12 * std::max(1.0, std::abs(det)));
  }
  CHECK(max_resid <= 1e-12);
  CHECK(max_ortho <= 1e-12);
}

TEST_CASE("from_pauli then eig2 gives +-|c| |n|") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    const double c = g(rng);
    const Vector3d n(g(rng), g(rng), g(rng));
    const Eigensystem2 es = eig2(from_pauli(c, n));
    const double expect = std::abs(c) * n.norm();
    CHECK(std::abs(es.e1 - expect) <= 1e-13 * std::max(1.0, expect));
    CHECK(std::abs(es.e0 + expect) <= 1e-13 * std::max(1.0, expect));
  }
}

TEST_CASE("eig2 handles degenerate input") {
  const Matrix2cd h = 0.7 * Matrix2cd::Identity();
  const Eigensystem2 es = eig2(h);
  CHECK(es.e0 == doctest::Approx(0.7));
  CHECK(es.e1 == doctest::Approx(0.7));
  CHECK(std::abs(es.v0.dot(es.v1)) < 1e-14);
  CHECK(es.v0.norm() == doctest::Approx(1.0));
}

TEST_CASE("eig2 rejects a non-Hermitian matrix") {
  Matrix2cd h = Matrix2cd::Zero();
  h(0, 1) = 1.0;
  CHECK_THROWS_AS(eig2(h), std::invalid_argument);
}
