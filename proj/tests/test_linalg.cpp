#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "support/oracles.hpp"
#include "tngeo/linalg.hpp"
#include "tngeo/rng.hpp"

using namespace tngeo;

namespace {

Matrix random_hermitian(std::size_t n, std::uint64_t seed) {
  Matrix g = random_gaussian_matrix(n, n, seed);
  Matrix h = g + g.dagger();
  for (cplx& v : h.a) v *= 0.5;
  return h;
}

}  // namespace

TEST_CASE("hermitian_eig: identity") {
  const HermitianEig e = hermitian_eig(Matrix::identity(4));
  for (double v : e.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hermitian_eig: diagonal matrix") {
  Matrix m(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  m(2, 2) = -2.0;
  const HermitianEig e = hermitian_eig(m);
  CHECK(e.values[0] == doctest::Approx(3.0));
  CHECK(e.values[1] == doctest::Approx(1.0));
  CHECK(e.values[2] == doctest::Approx(-2.0));
  // standard basis vectors up to phase
  for (std::size_t k = 0; k < 3; ++k) {
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < 3; ++i)
      if (std::abs(e.vectors(i, k)) > 1e-12) ++nonzero;
    CHECK(nonzero == 1);
  }
}

TEST_CASE("hermitian_eig: reconstruction and orthonormality on random input") {
  const Matrix m = random_hermitian(6, 99);
  const HermitianEig e = hermitian_eig(m);
  // V diag(lambda) V† == m
  Matrix rec(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      cplx acc(0, 0);
      for (std::size_t k = 0; k < 6; ++k)
        acc += e.vectors(i, k) * e.values[k] * std::conj(e.vectors(j, k));
      rec(i, j) = acc;
    }
  CHECK((rec - m).max_abs() < 1e-9);
  const Matrix vv = e.vectors.dagger() * e.vectors;
  CHECK((vv - Matrix::identity(6)).max_abs() < 1e-10);
  // eigenvalue equation within 1e-9 * |m|
  const double scale = m.frobenius_norm();
  for (std::size_t k = 0; k < 6; ++k) {
    std::vector<cplx> v(6);
    for (std::size_t i = 0; i < 6; ++i) v[i] = e.vectors(i, k);
    const std::vector<cplx> mv = m.apply(v);
    double res = 0.0;
    for (std::size_t i = 0; i < 6; ++i) res += std::norm(mv[i] - e.values[k] * v[i]);
    CHECK(std::sqrt(res) < 1e-9 * scale);
  }
}

TEST_CASE("hermitian_eig: trace identity and non-Hermitian rejection") {
  const Matrix m = random_hermitian(7, 123);
  const HermitianEig e = hermitian_eig(m);
  double sum = 0.0;
  for (double v : e.values) sum += v;
  CHECK(sum == doctest::Approx(m.trace().real()).epsilon(1e-9));

  Matrix bad = random_gaussian_matrix(4, 4, 3);
  CHECK_THROWS_AS(hermitian_eig(bad), numeric_error);
}

TEST_CASE("dominant_eigs: diagonal and closed-form 2x2") {
  Matrix m(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = 0.5;
  auto eigs = dominant_eigs(m, 2);
  CHECK(std::abs(eigs[0].value - cplx(2, 0)) < 1e-10);
  CHECK(std::abs(eigs[1].value - cplx(0.5, 0)) < 1e-10);

  Matrix s(2, 2);  // symmetric stochastic-like: eigenvalues 1.0 and 0.8
  s(0, 0) = 0.9;
  s(0, 1) = 0.1;
  s(1, 0) = 0.1;
  s(1, 1) = 0.9;
  eigs = dominant_eigs(s, 2);
  CHECK(std::abs(eigs[0].value - cplx(1.0, 0)) < 1e-10);
  CHECK(std::abs(eigs[1].value - cplx(0.8, 0)) < 1e-10);
}

TEST_CASE("dominant_eigs: random 9x9 agrees with the full-spectrum oracle") {
  const Matrix m = random_gaussian_matrix(9, 9, 2024);
  const auto got = dominant_eigs(m, 9);
  const auto want = oracle::eigenvalues_bruteforce(m);
  REQUIRE(got.size() == 9);
  // moduli agree in order; values agree as multisets (conjugate pairs may
  // come out swapped)
  for (std::size_t k = 0; k < 9; ++k) {
    CHECK(std::abs(std::abs(got[k].value) - std::abs(want[k])) < 1e-7);
    double best = 1e300;
    for (const cplx& w : want) best = std::min(best, std::abs(got[k].value - w));
    CHECK(best < 1e-7);
  }
  // residual contract on the original matrix
  const double scale = m.frobenius_norm();
  for (const auto& e : got) {
    const std::vector<cplx> mv = m.apply(e.vector);
    double res = 0.0;
    for (std::size_t i = 0; i < 9; ++i) res += std::norm(mv[i] - e.value * e.vector[i]);
    CHECK(std::sqrt(res) < 1e-8 * scale);
  }
}

TEST_CASE("dominant_eigs: modulus ties are flagged") {
  Matrix m(2, 2);  // eigenvalues +1 and -1
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  const auto eigs = dominant_eigs(m, 2);
  CHECK(eigs[0].modulus_tie);
  CHECK(eigs[1].modulus_tie);
}

TEST_CASE("dominant_eigs: k out of range") {
  CHECK_THROWS_AS(dominant_eigs(Matrix::identity(3), 4), config_error);
  CHECK_THROWS_AS(dominant_eigs(Matrix::identity(3), 0), config_error);
}

TEST_CASE("random_isometry: square draw is unitary") {
  const Matrix w = random_isometry(4, 4, 7);
  CHECK((w.dagger() * w - Matrix::identity(4)).max_abs() < 1e-12);
  CHECK((w * w.dagger() - Matrix::identity(4)).max_abs() < 1e-12);
}

TEST_CASE("random_isometry: tall draw satisfies W†W = 1") {
  const Matrix w = random_isometry(4, 2, 7);
  CHECK((w.dagger() * w - Matrix::identity(2)).max_abs() < 1e-12);
}

TEST_CASE("random_isometry: deterministic per seed, norm preserving") {
  const Matrix a = random_isometry(6, 3, 42);
  const Matrix b = random_isometry(6, 3, 42);
  REQUIRE(a.a.size() == b.a.size());
  for (std::size_t i = 0; i < a.a.size(); ++i) CHECK(a.a[i] == b.a[i]);

  Rng rng(5);
  std::vector<cplx> v(3);
  for (cplx& x : v) x = rng.gaussian_complex();
  vec_scale(v, 1.0 / vec_norm(v));
  CHECK(vec_norm(a.apply(v)) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(random_isometry(2, 3, 1), config_error);
}

TEST_CASE("svd_thin: reconstruction and rank detection") {
  const Matrix m = random_gaussian_matrix(6, 4, 17);
  const Svd s = svd_thin(m);
  REQUIRE(s.sigma.size() == 4);
  Matrix rec(6, 4);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      cplx acc(0, 0);
      for (std::size_t k = 0; k < 4; ++k)
        acc += s.u(i, k) * s.sigma[k] * s.vdag(k, j);
      rec(i, j) = acc;
    }
  CHECK((rec - m).max_abs() < 1e-8);

  // rank-2 matrix from two outer products
  Matrix low(5, 5);
  const Matrix a = random_gaussian_matrix(5, 2, 31);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      low(i, j) = a(i, 0) * a(j, 0) + cplx(0.3, 0.1) * a(i, 1) * a(j, 1);
  const Svd ls = svd_thin(low, 1e-7);
  CHECK(ls.sigma.size() == 2);
}
