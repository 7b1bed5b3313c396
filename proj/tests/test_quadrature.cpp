#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "eqtoeplitz/bergman.hpp"
#include "eqtoeplitz/equivariant.hpp"
#include "eqtoeplitz/quadrature.hpp"

using namespace eqt;
using namespace eqt::quadrature;
using symbols::Symbol;

namespace {

std::shared_ptr<const equivariant::FundamentalDomain> domain(double alpha = 0.3) {
  return std::make_shared<const equivariant::FundamentalDomain>(
      equivariant::build_domain(mobius::symmetric_pairings(2, alpha)));
}

/// Area of D cap disc(c, r), by the two-circle lens formula.
double lens_area(cplx c, double r) {
  const double d = std::abs(c);
  const double a1 = r * r * std::acos((d * d + r * r - 1.0) / (2 * d * r));
  const double a2 = std::acos((d * d + 1.0 - r * r) / (2 * d));
  const double k = std::sqrt((-d + r + 1) * (d + r - 1) * (d - r + 1) * (d + r + 1));
  return a1 + a2 - 0.5 * k;
}

}  // namespace

TEST_CASE("one-dimensional Gauss rules") {
  std::vector<double> x, w;
  gauss_legendre(8, -1.0, 2.0, x, w);
  for (int k = 0; k < 16; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
    const double exact = (std::pow(2.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-13));
  }
  for (double alpha : {0.0, 0.5, 4.0}) {
    gauss_jacobi(10, alpha, x, w);
    for (int k = 0; k < 20; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
      // int_0^1 u^k (1-u)^alpha du = B(k+1, alpha+1)
      const double exact = std::exp(std::lgamma(k + 1.0) + std::lgamma(alpha + 1.0) - std::lgamma(k + alpha + 2.0));
      CHECK(s == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("disc rules") {
  const auto r6 = disc_rule(Measure::mu_t, 32, 64, 6.0);
  CHECK(std::abs(integrate([](cplx) { return cplx(1.0); }, r6) - 1.0) < 1e-14);
  CHECK(std::abs(integrate([](cplx z) { return cplx(std::norm(z)); }, r6) - 1.0 / 6.0) < 1e-15);
  for (int j = 0; j < r6.order; ++j)
    CHECK(std::abs(integrate([j](cplx z) { return cplx(std::pow(std::norm(z), j)); }, r6) -
                   bergman::basis_norm_sq(j, 6.0)) < 1e-14);
  for (std::size_t i = 0; i < r6.nodes.size(); ++i) {
    CHECK(std::abs(r6.nodes[i]) < 1.0);
    CHECK(r6.weights[i] > 0.0);
  }
  CHECK(std::abs(integrate(Symbol::z(), r6)) < 1e-16);

  const auto m0 = disc_rule(Measure::mu_0, 16, 32, 2.0, 0.5);
  CHECK(std::abs(integrate([](cplx) { return cplx(1.0); }, m0) - 4.0 * pi / 3.0) < 1e-13);
  // Hyperbolic disc of radius 2: area 4 pi sinh(1)^2.
  const auto h = disc_rule(Measure::mu_0, 24, 32, 2.0, std::tanh(1.0));
  CHECK(std::abs(integrate([](cplx) { return cplx(1.0); }, h) - 4.0 * pi * std::pow(std::sinh(1.0), 2)) < 1e-12);

  const auto leb = disc_rule(Measure::lebesgue, 16, 32);
  CHECK(std::abs(integrate([](cplx z) { return cplx(std::norm(z)); }, leb) - pi / 2) < 1e-14);

  CHECK_THROWS(disc_rule(Measure::mu_t, 32, 64, 1.0));
  CHECK_THROWS(disc_rule(Measure::mu_t, 3, 64, 2.0));
  CHECK_THROWS(disc_rule(Measure::mu_0, 8, 16, 2.0, 1.0));
  std::ostringstream os;
  write_csv(disc_rule(Measure::mu_t, 4, 4, 3.0), os);
  CHECK(!os.str().empty());
}

TEST_CASE("inner delta integral") {
  for (cplx b : {cplx(0.0), cplx(0.5), cplx(-0.2, 0.65)})
    CHECK(std::abs(delta_inner_integral(b, 5.0) - pi) < 1e-6 * pi);
  // The integrand peaks in a window of width ~ 1 - |b0|, so base points near the circle need finer rules.
  CHECK(std::abs(delta_inner_integral(0.9, 5.0) - pi) > 1e-6 * pi);
  CHECK(std::abs(delta_inner_integral(0.9, 5.0, 256, 512) - pi) < 1e-6 * pi);
  for (double t : {3.0, 8.0}) CHECK(std::abs(delta_inner_integral({0.3, 0.6}, t) - 4 * pi / (t - 1)) < 1e-6);
}

TEST_CASE("pair integrals") {
  std::vector<std::string> warnings;
  const cplx v = delta_pair_integral([](cplx a, cplx b) { return cplx(std::norm(a - b)); }, 6.0, {}, &warnings);
  CHECK(std::abs(v - 1.0) < 1e-2);
  PairOptions prod;
  prod.scheme = PairScheme::product;
  prod.radial = 24;
  prod.angular = 48;
  const cplx anti = delta_pair_integral([](cplx a, cplx b) { return (a - b) * std::conj(a + b) + std::norm(a) - std::norm(b); },
                                        6.0, prod);
  CHECK(std::abs(anti) < 1e-12);
}

TEST_CASE("two-form integrals on the disc") {
  const Symbol z = Symbol::z(), zb = Symbol::zbar();
  CHECK(std::abs(two_form_integral(zb, z) - 1.0) < 1e-12);
  CHECK(std::abs(two_form_integral(z, z)) < 1e-15);
  // (1/2 pi i) int zbar^2 d(z^2) = (1/2 pi i) int 2 z^{-1} dz = 2
  CHECK(std::abs(two_form_integral(Symbol::monomial(2, 0), Symbol::monomial(0, 2)) - 2.0) < 1e-12);
  CHECK(std::abs(two_form_integral(Symbol::monomial(2, 0), Symbol::z())) < 1e-12);
  const Symbol f = zb + Symbol::monomial(1, 2, 0.5), g = z + Symbol::monomial(3, 0, I), h = Symbol::monomial(1, 1);
  const cplx fg = two_form_integral(f, g), gf = two_form_integral(g, f);
  CHECK(std::abs(fg + gf) < 1e-14);
  CHECK(std::abs(two_form_integral(f.shifted(4.0 - I), g) - fg) < 1e-13);
  CHECK(std::abs(two_form_integral(f.scaled(2.0) + h, g) - (2.0 * fg + two_form_integral(h, g))) < 1e-13);
}

TEST_CASE("boundary form integrals and Stokes") {
  const auto e = symbols::loop_data([](double th) { return std::polar(1.0, -th); }, 256);
  const auto e1 = symbols::loop_data([](double th) { return std::polar(1.0, th); }, 256);
  const auto c = symbols::loop_data([](double) { return cplx(3.0, 1.0); }, 256);
  CHECK(std::abs(boundary_form_integral(e, e1) - 1.0) < 1e-14);
  CHECK(std::abs(boundary_form_integral(e1, c)) < 1e-15);
  CHECK(std::abs(boundary_form_integral(c, e1)) < 1e-14);
  CHECK_THROWS(boundary_form_integral(e, symbols::loop_data([](double th) { return std::polar(1.0, th); }, 128)));
  const Symbol f = Symbol::zbar() + Symbol::monomial(0, 2), g = Symbol::z() + Symbol::monomial(3, 0);
  const auto fd = symbols::loop_data([&](double th) { return f.boundary_value(th); }, 1024);
  const auto gd = symbols::loop_data([&](double th) { return g.boundary_value(th); }, 1024);
  CHECK(std::abs(boundary_form_integral(fd, gd) - two_form_integral(f, g)) < 1e-8);
}

TEST_CASE("fundamental-domain integration") {
  const auto F = domain();
  double removed = 0.0;
  for (const auto& c : F->circles) removed += lens_area(c.center, c.radius);
  const cplx area = domain_integral([](cplx) { return cplx(1.0); }, *F);
  CHECK(std::abs(area - (pi - removed)) < 1e-12);
  const auto filt = filtered_domain_integral([](cplx) { return cplx(1.0); }, *F);
  CHECK(filt.cut_cells > 0);
  CHECK(std::abs(filt.value - (pi - removed)) < 1e-3);

  // Unfolding: for f = sum over the group of a bump h, int_F f dmu_0 = int_D h dmu_0 for either cut.
  const auto F2 = std::make_shared<const equivariant::FundamentalDomain>(equivariant::shifted_domain(*F, 0, 0.45));
  const auto& big = F2->shift->enlarged;
  const cplx c = big.center - big.radius * big.center / std::abs(big.center);
  const Symbol h = Symbol::bump(c, 0.12);
  const Symbol f = symbols::poincare_series(h, F, 2);
  auto mu0 = [&](cplx z) { return f(z) * 4.0 / std::pow(1.0 - std::norm(z), 2); };
  const double oracle = equivariant::tau_density_integral(h, 5.0) * 4.0 * pi / 4.0;
  // A radius-0.12 bump is steep at its edge: default panels resolve it to ~1e-6, finer ones to ~1e-9.
  CHECK(std::abs(domain_integral(mu0, *F) - oracle) < 5e-6 * oracle);
  CHECK(std::abs(domain_integral(mu0, *F2) - oracle) < 5e-6 * oracle);
  RegionOptions fine;
  fine.q = 24;
  fine.angular_panel = 0.01;
  CHECK(std::abs(domain_integral(mu0, *F, fine) - oracle) < 1e-8 * oracle);
  CHECK(std::abs(domain_integral(mu0, *F2, fine) - oracle) < 1e-8 * oracle);
  CHECK(domain_regions(*F2).size() == 2);

  const Symbol a = Symbol::bump({0.05, 0.0}, 0.3), b = Symbol::bump({0.0, 0.1}, 0.3, I) * Symbol::z();
  CHECK(two_form_abs_integral(a, b, *F) >= std::abs(two_form_integral(a, b, *F)));
}
