#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "eqtoeplitz/bergman.hpp"

using namespace eqt;
using namespace eqt::bergman;
using mobius::MobiusTransform;

TEST_CASE("basis norms") {
  for (double t : {1.5, 2.0, 6.0, 11.0}) CHECK(basis_norm_sq(0, t) == 1.0);
  CHECK(basis_norm_sq(1, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  // 10! Gamma(6) / Gamma(16) = 120 / (11 * 12 * 13 * 14 * 15) = 1/3003
  CHECK(basis_norm_sq(10, 6.0) == doctest::Approx(1.0 / 3003.0).epsilon(1e-14));
  CHECK(std::exp(log_basis_norm_sq(10, 6.0)) == doctest::Approx(1.0 / 3003.0).epsilon(1e-13));
  CHECK_THROWS(basis_norm_sq(3, 1.0));
  CHECK_THROWS(basis_norm_sq(-1, 2.0));
}

TEST_CASE("basis-norm recurrence holds to 1e-14") {
  double worst = 0.0;
  for (double t : {1.25, 2.0, 3.7, 6.0, 9.5})
    for (int n = 0; n < 2000; ++n) {
      const double r = basis_norm_sq(n + 1, t) / basis_norm_sq(n, t), e = (n + 1.0) / (n + t);
      worst = std::max(worst, std::abs(r - e) / e);
    }
  CHECK(worst < 1e-14);
  // Deep in the tail the table still agrees with log-Gamma.
  CHECK(log_basis_norm_sq(5000, 8.0) ==
        doctest::Approx(std::lgamma(5001.0) + std::lgamma(8.0) - std::lgamma(5008.0)).epsilon(1e-12));
}

TEST_CASE("kernel values, symmetry and reproduction") {
  CHECK(std::abs(kernel(0.0, {0.3, 0.4}, 3.5) - 1.0) < 1e-15);
  // 0.75^-4
  CHECK(std::abs(kernel(0.5, 0.5, 4.0) - 3.1604938271604937) < 1e-14);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(0.0, 0.5), a(0.0, 2 * pi);
  for (int k = 0; k < 20; ++k) {
    const cplx z = std::polar(r(rng), a(rng)), w = std::polar(r(rng), a(rng));
    for (double t : {2.0, 6.0}) {
      CHECK(std::abs(kernel(z, w, t) - std::conj(kernel(w, z, t))) < 1e-14);
      CHECK(kernel(z, z, t).real() > 0.0);
      cplx s = 0.0;
      for (int n = 0; n <= 60; ++n) s += basis_function(n, z, t) * std::conj(basis_function(n, w, t));
      CHECK(std::abs(s - kernel(z, w, t)) < 1e-8);
    }
  }
}

TEST_CASE("representation matrices") {
  const BasisSpec spec{6.0, 40};
  const auto id = representation_matrix(MobiusTransform::identity(), spec);
  CHECK((id.entries - Matrix::Identity(41, 41)).cwiseAbs().maxCoeff() < 1e-12);

  const double th = 0.7;
  const auto R = representation_matrix(MobiusTransform::rotation(th), spec).entries;
  for (int n = 0; n <= 40; ++n) {
    CHECK(std::abs(R(n, n) / R(0, 0) - std::polar(1.0, -n * th)) < 1e-12);
    CHECK(std::abs(std::abs(R(n, n)) - 1.0) < 1e-12);
  }
  CHECK((R - Matrix(R.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-12);

  const MobiusTransform hyp{std::cosh(0.5), std::sinh(0.5)};
  std::vector<std::string> warnings;
  const auto U = representation_matrix(hyp, spec, &warnings);
  // At N = 40 the defect is the truncated column mass, about 1.5e-5, not below 1e-6: it must equal the tail
  // of the same columns computed at a larger size. By N = 60 the block is unitary to 1e-6.
  const Matrix big = representation_block(hyp, 6.0, 160, 10);
  const Matrix G = big.topRows(41).adjoint() * big.topRows(41);
  CHECK(std::abs(unitarity_defect(U.entries, 10) - (G - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff()) < 1e-12);
  CHECK(unitarity_defect(U.entries, 10) > 1e-6);
  CHECK(warnings.size() == 1);
  std::vector<std::string> w60;
  CHECK(unitarity_defect(representation_matrix(hyp, {6.0, 60}, &w60).entries, 10) < 1e-6);
  CHECK(w60.empty());

  // Independent contour route agrees on the low block.
  const auto C = representation_matrix_contour(hyp, spec);
  const cplx phase = U.entries(0, 0) / C.entries(0, 0);
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-8);
  CHECK((U.entries.topLeftCorner(10, 10) - phase * C.entries.topLeftCorner(10, 10)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS(representation_matrix_contour(hyp, spec, 1.0));
}

TEST_CASE("projective cocycle on the low block") {
  const auto g = MobiusTransform::boost(0.6) * MobiusTransform::rotation(0.4);
  const auto h = MobiusTransform::rotation(-1.1) * MobiusTransform::boost(0.9);
  const int k = 10, P = 120;
  for (double t : {2.0, 6.0}) {
    const Matrix Ug = representation_block(g, t, P, P), Uh = representation_block(h, t, P, P);
    const Matrix Ugh = representation_block(g * h, t, k, k);
    const Matrix prod = (Ug * Uh).topLeftCorner(k, k);
    const cplx sigma = prod(0, 0) / Ugh(0, 0);
    CHECK(std::abs(std::abs(sigma) - 1.0) < 1e-6);
    CHECK((prod - sigma * Ugh).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("boost padding grows with the translation length") {
  CHECK(boost_padding(0.0, 2.0, 10) >= 10);
  CHECK(boost_padding(3.0, 6.0, 40) > boost_padding(1.0, 6.0, 40));
  CHECK(boost_padding(3.0, 6.0, 40) % 64 == 0);
}

TEST_CASE("dbar inverse") {
  const auto B2 = dbar_inverse({2.0, 20}).entries;
  CHECK(std::abs(B2(1, 0) - 0.70710678118654752) < 1e-15);
  const auto B6 = dbar_inverse({6.0, 20}).entries;
  // 1/sqrt(10 * 15)
  CHECK(std::abs(B6(10, 9) - 0.081649658092772603) < 1e-15);
  double hs = 0.0;
  for (int n = 0; n < 20; ++n) hs += 1.0 / ((n + 1.0) * (n + 6.0));
  CHECK(B6.squaredNorm() == doctest::Approx(hs).epsilon(1e-14));
  double prev = 0.0;
  for (int N : {50, 100, 200, 400}) {
    const double s = dbar_inverse({6.0, N}).entries.squaredNorm();
    CHECK(s > prev);
    CHECK(s < 1.0);
    prev = s;
  }
  const BasisSpec spec{3.0, 15};
  const Matrix DB = derivative_matrix(spec).entries * dbar_inverse(spec).entries;
  CHECK((DB.topLeftCorner(15, 15) - Matrix::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(DB(15, 15)) == 0.0);
}

TEST_CASE("corner trace") {
  CHECK(std::abs(corner_trace(Matrix::Identity(8, 8), 5) - 5.0) == 0.0);
  Matrix D = Matrix::Zero(5, 5);
  for (int n = 0; n < 5; ++n) D(n, n) = std::pow(0.5, n);
  CHECK(std::abs(corner_trace(D, 3) - 1.75) == 0.0);
  CHECK_THROWS(corner_trace(D, 6));
  const Matrix A = Matrix::Random(12, 12), Bm = Matrix::Random(12, 12);
  CHECK(std::abs(corner_trace(Matrix(A * Bm - Bm * A), 12)) < 1e-13);
}

TEST_CASE("leading compression and CSV export") {
  const auto U = representation_matrix(MobiusTransform::rotation(0.2), {2.0, 6});
  const auto L = U.leading(3);
  CHECK(L.entries.rows() == 4);
  CHECK(L.spec.N == 3);
  std::ostringstream os;
  write_csv(L, os);
  int lines = 0;
  for (char c : os.str()) lines += c == '\n';
  CHECK(lines == 4);
}
