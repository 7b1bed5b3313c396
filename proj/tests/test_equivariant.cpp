#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "eqtoeplitz/equivariant.hpp"
#include "eqtoeplitz/quadrature.hpp"
#include "eqtoeplitz/toeplitz.hpp"

using namespace eqt;
using namespace eqt::equivariant;
using symbols::Symbol;

namespace {

std::shared_ptr<const FundamentalDomain> domain(int m = 2, double alpha = 0.3) {
  return std::make_shared<const FundamentalDomain>(build_domain(mobius::symmetric_pairings(m, alpha)));
}

std::vector<mobius::MobiusTransform> generators(double alpha) {
  std::vector<mobius::MobiusTransform> g;
  for (const auto& p : mobius::symmetric_pairings(2, alpha)) g.push_back(p.g);
  return g;
}

symbols::CollarPiece winding(int arc, int k) {
  symbols::CollarPiece p;
  p.arc = arc;
  p.kind = symbols::CollarPiece::Kind::winding;
  p.winding = k;
  return p;
}

symbols::CollarSpec collar(std::vector<symbols::CollarPiece> pieces) {
  symbols::CollarSpec s;
  s.pieces = std::move(pieces);
  return s;
}

double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("build_domain: components and arcs") {
  CHECK(domain(1)->components.size() == 2);
  CHECK(domain(2)->components.size() == 3);
  CHECK(domain(2)->arcs.size() == 4);
  CHECK(trivial_domain().components.size() == 1);
  // Tangent circles leave no room between sides.
  CHECK_THROWS(build_domain(mobius::symmetric_pairings(2, pi / 4)));
  const auto F = domain();
  int arcs = 0;
  for (const auto& c : F->components) arcs += static_cast<int>(c.arcs.size());
  CHECK(arcs == 4);
  for (const auto& a : F->arcs) CHECK(a.length() > 0.0);
}

TEST_CASE("fundamental domain has infinite hyperbolic area") {
  const auto F = domain();
  auto area = [&](double r) {
    quadrature::RegionOptions o;
    o.r_cap = r;
    return quadrature::domain_integral([](cplx z) { return cplx(4.0 / std::pow(1.0 - std::norm(z), 2)); }, *F, o)
        .real();
  };
  const double a1 = area(0.9), a2 = area(0.99), a3 = area(0.999);
  CHECK(a2 > 5.0 * a1);
  CHECK(a3 > 5.0 * a2);
}

TEST_CASE("orbit_representative") {
  const auto F = domain();
  SUBCASE("interior point is its own representative") {
    const auto r = orbit_representative(*F, 0.2 + 0.1 * I, 4);
    CHECK(r.word.length() == 0);
    CHECK(r.point == 0.2 + 0.1 * I);
  }
  SUBCASE("gamma(w) returns to w") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    const auto els = mobius::enumerate_group(F->generators, 3);
    int tested = 0;
    for (int k = 0; k < 200 && tested < 60; ++k) {
      const cplx w(u(rng), u(rng));
      if (!F->contains(w)) continue;
      const auto& el = els[k % els.size()];
      const cplx z = mobius::apply(el.g, w);
      const auto r = orbit_representative(*F, z, 8);
      CHECK(std::abs(r.point - w) < 1e-10);
      CHECK(std::abs(mobius::apply(mobius::evaluate_word(r.word, F->generators), z) - r.point) < 1e-10);
      ++tested;
    }
    CHECK(tested > 20);
  }
  SUBCASE("boundary points resolve deterministically") {
    const auto& C = F->circles[1];
    const cplx z = C.center - C.radius * C.center / std::abs(C.center);
    const auto a = orbit_representative(*F, z, 4), b = orbit_representative(*F, z, 4);
    CHECK(a.point == b.point);
    CHECK(a.word.str() == b.word.str());
    CHECK(F->in_base(a.point));
  }
  SUBCASE("horizon") {
    const auto els = mobius::enumerate_group(F->generators, 3);
    cplx z = 0.0;
    for (const auto& el : els)
      if (el.word.length() == 3) {
        z = mobius::apply(el.g, 0.05);
        break;
      }
    CHECK_THROWS_AS(orbit_representative(*F, z, 2), HorizonExceeded);
    CHECK_FALSE(try_orbit_representative(*F, z, 2).has_value());
    CHECK(try_orbit_representative(*F, z, 3).has_value());
  }
}

TEST_CASE("gamma_average") {
  const auto gens = generators(0.55);
  const bergman::BasisSpec out{6.0, 20};
  SUBCASE("L = 0 returns the leading block") {
    const Matrix A = toeplitz::toeplitz_block(Symbol::bump(0.1, 0.3), 6.0, 40);
    const auto E = gamma_average({{6.0, 39}, A}, gens, 0, out);
    CHECK(max_abs(E.entries - A.topLeftCorner(21, 21)) == 0.0);
  }
  SUBCASE("identity with L = 1 sums five unitaries") {
    const int P = 240;
    const auto E = gamma_average({{6.0, P - 1}, Matrix::Identity(P, P)}, gens, 1, {6.0, 8});
    CHECK(max_abs(E.entries - 5.0 * Matrix::Identity(9, 9)) < 1e-6);
  }
  SUBCASE("bump block matches the Poincare series capped at L = 2") {
    const auto F = std::make_shared<const FundamentalDomain>(build_domain(mobius::symmetric_pairings(2, 0.55)));
    const Symbol f0 = Symbol::bump(0.05, 0.2);
    const int P = 80;
    const Matrix A = toeplitz::toeplitz_block(f0, 6.0, P);
    std::vector<std::string> warn;
    const auto E = gamma_average({{6.0, P - 1}, A}, gens, 2, {6.0, 12}, {}, &warn);
    // Length-2 images are narrow near the circle; the default disc rule only resolves them to 3e-6.
    const Matrix T = toeplitz::quadrature_toeplitz(symbols::poincare_series(f0, F, 2, false), 6.0, 13, 512, 2048);
    CHECK(max_abs(E.entries - T) < 1e-6);
    CHECK(warn.empty());
  }
  SUBCASE("negating every generator leaves the average unchanged") {
    const Matrix A = toeplitz::toeplitz_block(Symbol::bump(0.1 * I, 0.25), 6.0, 60);
    std::vector<mobius::MobiusTransform> inv;
    for (const auto& g : gens) inv.push_back({-g.a, -g.b});
    const auto E1 = gamma_average({{6.0, 59}, A}, gens, 2, out);
    const auto E2 = gamma_average({{6.0, 59}, A}, inv, 2, out);
    CHECK(max_abs(E1.entries - E2.entries) < 1e-14 * std::max(1.0, max_abs(E1.entries)));
  }
  SUBCASE("rejections") {
    const Matrix A = Matrix::Identity(10, 10);
    CHECK_THROWS(gamma_average({{6.0, 9}, A}, gens, -1, {6.0, 5}));
    CHECK_THROWS(gamma_average({{6.0, 9}, A}, gens, 1, {6.0, 20}));
  }
}

TEST_CASE("tau_toeplitz") {
  const auto F = domain();
  const bergman::BasisSpec spec{6.0, 120};
  SUBCASE("zero symbol") {
    const auto e = tau_toeplitz(Symbol::constant(0.0), *F, spec);
    CHECK(e.value == cplx(0.0));
  }
  SUBCASE("radial bump against a one-dimensional rule") {
    // tau(T_f0) = ((t-1)/pi) int f0 dA/(1-|z|^2)^2 = (t-1) int_0^{u_max} phi(u) (1-u)^{-2} du.
    const double R = 0.4, t = 6.0;
    const auto prof = symbols::RadialProfile::bump(R);
    std::vector<double> x, w;
    double oracle = 0.0;
    const int panels = 64;
    quadrature::gauss_legendre(20, 0.0, 1.0, x, w);
    for (int p = 0; p < panels; ++p)
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = R * R * (p + x[i]) / panels;
        oracle += R * R / panels * w[i] * prof.value(u).real() / std::pow(1.0 - u, 2);
      }
    oracle *= t - 1.0;
    const auto e = tau_toeplitz(Symbol::radial(prof), *F, spec);
    CHECK(std::abs(e.value - oracle) < 1e-6 * oracle);
    CHECK(std::abs(e.oracle - oracle) < 1e-6 * oracle);
  }
  SUBCASE("off-centre bump: trace matches the density integral") {
    const auto e = tau_toeplitz(Symbol::bump(0.1 - 0.15 * I, 0.3), *F, spec);
    CHECK(std::abs(e.value - e.oracle) < 1e-6 * std::abs(e.oracle));
  }
  SUBCASE("rejections") {
    CHECK_THROWS(tau_toeplitz(Symbol::bump(0.0, 0.3), *F, {2.0, 40}));
    CHECK_THROWS(tau_toeplitz(Symbol::bump(0.0, 0.3), *F, {1.5, 40}));
    CHECK_THROWS(tau_toeplitz(Symbol::bump(0.0, 1.0), *F, spec));
    CHECK_THROWS(tau_toeplitz(Symbol::z(), *F, spec));
    CHECK_THROWS(tau_toeplitz(Symbol::bump(F->circles[0].center, 0.1), *F, spec));
  }
  SUBCASE("orbit translates carry the same trace") {
    // tau_toeplitz only accepts supports inside F, so the translates go through the trace and the density directly.
    const auto F5 = domain(2, 0.55);
    const Symbol f0 = Symbol::bump(0.05, 0.2);
    const double ref = tau_density_integral(f0, 6.0);
    CHECK(std::abs(tau_toeplitz(f0, *F5, {6.0, 120}).value - ref) < 1e-6 * ref);
    for (const auto& g : F5->generators)
      for (const auto& h : {f0.composed(g), f0.composed(g.inverse())}) {
        const Matrix T = toeplitz::quadrature_toeplitz(h, 6.0, 200, 1024, 4096);
        CHECK(std::abs(T.trace() - ref) < 1e-8 * ref);
        CHECK(std::abs(tau_density_integral(h, 6.0) - ref) < 1e-8 * ref);
      }
  }
}

TEST_CASE("tau_commutator") {
  const auto F = domain();
  const Symbol fc = Symbol::collar_seed(F, collar({winding(0, 1)}));
  CommutatorGrid g;
  g.Ns = {40};
  g.Ls = {0, 1};
  g.oracle = false;
  SUBCASE("f = g gives exactly zero") {
    const auto e = tau_commutator({fc}, {fc}, F, 6.0, g);
    for (const auto& r : e.rows) CHECK(r.value == cplx(0.0));
  }
  SUBCASE("swapping f and g flips the sign exactly") {
    const Symbol gc = Symbol::collar_seed(F, collar({winding(1, 1)}));
    const auto a = tau_commutator({fc}, {gc}, F, 6.0, g), b = tau_commutator({gc}, {fc}, F, 6.0, g);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].value == -b.rows[i].value);
  }
  SUBCASE("t <= 5 is rejected") {
    CHECK_THROWS(tau_commutator({fc}, {fc}, F, 5.0, g));
    CHECK_THROWS(tau_commutator({fc}, {fc}, F, 3.0, g));
  }
  SUBCASE("seeds that do not vanish at the cut points") {
    try {
      tau_commutator({Symbol::z()}, {fc}, F, 6.0, g);
      FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("no valid cut") != std::string::npos);
    }
    CHECK_NOTHROW(check_cut(fc, *F));
    CHECK_NOTHROW(check_cut(Symbol::bump(0.0, 0.3), *F));
  }
  SUBCASE("collar against its conjugate: oracle is minus the winding") {
    CommutatorGrid go;
    go.Ns = {20};
    go.Ls = {0};
    const auto e = tau_commutator({fc}, {fc.conj()}, F, 6.0, go);
    CHECK(std::abs(e.oracle - cplx(-1.0)) < 1e-3);
    // Boundary route: (1/2 pi i) int_{dM} f d(fbar), antisymmetrized.
    const Symbol f = Symbol::orbit_sum(fc, F, -1);
    const auto bd = symbols::boundary_restriction(f, *F, 4096);
    const auto bc = symbols::map_values(bd, [](cplx v) { return std::conj(v); });
    const cplx b = 0.5 * (quadrature::boundary_form_integral(bd, bc) - quadrature::boundary_form_integral(bc, bd));
    CHECK(std::abs(b - e.oracle) < 1e-3);
  }
}

TEST_CASE("gamma_index") {
  const auto F = domain();
  const auto T = std::make_shared<const FundamentalDomain>(trivial_domain());
  CHECK(gamma_index(Symbol::constant(1.0), *F).index == 0);
  CHECK(gamma_index(Symbol::blaschke(0.3 + 0.2 * I), *T).index == 1);
  CHECK(gamma_index(Symbol::z(), *T).index == 1);
  CHECK_THROWS_AS(gamma_index(Symbol::constant(0.0), *F), NotInvertible);

  const auto& comps = F->components;
  for (int k : {-2, 1, 3}) {
    const Symbol f = Symbol::collar_seed(F, collar({winding(comps[1].arcs.front(), k)})).shifted(1.0);
    const auto gi = gamma_index(f, *F);
    CHECK(gi.index == k);
    CHECK(gi.windings[1] == k);
    CHECK(gi.windings[0] == 0);
    CHECK(std::abs(gi.log_integral - cplx(k)) < 1e-6);
  }

  // Additivity under products.
  const Symbol a = Symbol::collar_seed(F, collar({winding(comps[0].arcs.front(), 1)})).shifted(1.0);
  const Symbol b = Symbol::collar_seed(F, collar({winding(comps[2].arcs.front(), 2)})).shifted(1.0);
  const auto ga = gamma_index(a, *F), gb = gamma_index(b, *F), gab = gamma_index(a * b, *F);
  CHECK(gab.index == ga.index + gb.index);
  for (std::size_t i = 0; i < gab.windings.size(); ++i) CHECK(gab.windings[i] == ga.windings[i] + gb.windings[i]);

  CHECK(homotopy_failures(a * b, *F, 50, 11) == 0);
}

TEST_CASE("extension_probe") {
  const auto w = extension_probe(domain());
  REQUIRE(w.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<int> e(3, 0);
    e[i] = 1;
    CHECK(w[i].windings == e);
    CHECK(w[i].index == 1);
  }
  const auto t = extension_probe(std::make_shared<const FundamentalDomain>(trivial_domain()));
  REQUIRE(t.size() == 1);
  CHECK(t[0].index == 1);
}
