#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "eqtoeplitz/symbols.hpp"
#include "eqtoeplitz/toeplitz.hpp"

using namespace eqt;
using namespace eqt::symbols;
using equivariant::FundamentalDomain;

namespace {

std::shared_ptr<const FundamentalDomain> domain(double alpha = 0.3) {
  return std::make_shared<const FundamentalDomain>(
      equivariant::build_domain(mobius::symmetric_pairings(2, alpha)));
}

std::shared_ptr<const FundamentalDomain> trivial() {
  return std::make_shared<const FundamentalDomain>(equivariant::trivial_domain());
}

/// Central differences for the Wirtinger derivatives.
Jet numeric_jet(const Symbol& f, cplx z, double h = 1e-6) {
  const cplx fx = (f(z + h) - f(z - h)) / (2 * h);
  const cplx fy = (f(z + I * h) - f(z - I * h)) / (2 * h);
  return {f(z), 0.5 * (fx - I * fy), 0.5 * (fx + I * fy)};
}

void check_jet(const Symbol& f, cplx z, double tol = 1e-6) {
  const Jet a = f.jet(z), b = numeric_jet(f, z);
  const double s = 1.0 + std::abs(b.dz) + std::abs(b.dzb);
  CHECK(std::abs(a.v - b.v) < 1e-14 * (1.0 + std::abs(b.v)));
  CHECK(std::abs(a.dz - b.dz) < tol * s);
  CHECK(std::abs(a.dzb - b.dzb) < tol * s);
}

}  // namespace

TEST_CASE("evaluation of elementary symbols") {
  CHECK(std::abs(Symbol::monomial(1, 1)(cplx(0.0, 0.5)) - 0.25) < 1e-16);
  CHECK(std::abs(Symbol::bump({0.1, 0.2}, 0.3)({0.1, 0.2}) - bump_profile(0.0)) == 0.0);
  CHECK(bump_profile(0.0) == 1.0);
  CHECK(std::abs(Symbol::bump({0.1, 0.2}, 0.3, 2.0 * I)({0.1, 0.2}) - 2.0 * I) < 1e-16);
  CHECK(Symbol::bump(0.0, 0.3)(0.31) == 0.0);
  CHECK(Symbol().is_zero());
  CHECK(std::abs(Symbol::blaschke(0.3)(0.3)) < 1e-16);
  CHECK(std::abs(std::abs(Symbol::blaschke({0.3, 0.2}).boundary_value(1.0)) - 1.0) < 1e-15);
  CHECK_THROWS(Symbol::bump(0.8, 0.3));
  CHECK_THROWS(Symbol::bump(0.0, 0.0));
  CHECK_THROWS_AS(Symbol::z()(1.0), DomainError);
}

TEST_CASE("composites and their analytic structure") {
  const Symbol f = Symbol::zbar() + Symbol::monomial(0, 2, 3.0);
  CHECK(f.as_laurent().has_value());
  CHECK(f.bandwidth() == 2);
  const Symbol r = Symbol::radial(RadialProfile::polynomial({1.0, 2.0}));
  CHECK(r.as_radial().has_value());
  CHECK(std::abs(r(0.5) - 1.5) < 1e-15);
  const cplx z{0.2, -0.3};
  CHECK(std::abs((f * r)(z) - f(z) * r(z)) < 1e-15);
  CHECK(std::abs(f.affine(2.0, I)(z) - (2.0 * f(z) + I)) < 1e-15);
  CHECK(std::abs(f.conj()(z) - std::conj(f(z))) < 1e-15);
  CHECK(std::abs(f.shifted(3.0).reciprocal()(z) - 1.0 / (f(z) + 3.0)) < 1e-15);
  const auto g = mobius::MobiusTransform::boost(0.7) * mobius::MobiusTransform::rotation(0.2);
  CHECK(std::abs(f.composed(g)(z) - f(mobius::apply(g, z))) < 1e-15);
}

TEST_CASE("jets match finite differences") {
  const auto F = domain();
  const cplx pts[] = {{0.1, 0.2}, {-0.35, 0.1}, {0.55, 0.6}, {0.1, -0.8}};
  const Symbol bump = Symbol::bump({0.1, 0.1}, 0.4, {1.0, -0.5});
  const Symbol collar = Symbol::collar_seed(F, {{{0, CollarPiece::Kind::winding, 2, 0.0, false}}});
  const std::vector<Symbol> cases{
      Symbol::zbar() * Symbol::monomial(0, 3) + Symbol::monomial(2, 1, I),
      Symbol::radial(RadialProfile::bump(0.7, 1.5)),
      bump,
      Symbol::blaschke({0.3, 0.2}),
      collar,
      Symbol::orbit_sum(collar, F, 2),
      (bump * Symbol::z()).shifted(2.0).reciprocal(),
      bump.conj() * Symbol::zbar(),
      bump.composed(mobius::MobiusTransform::boost(0.5)),
  };
  for (const auto& f : cases)
    for (cplx z : pts) check_jet(f, z);
}

TEST_CASE("Poincare series") {
  const auto F = domain();
  const Symbol f0 = Symbol::bump({0.1, 0.05}, 0.3);
  REQUIRE(F->contains(0.1 + 0.05 * I));
  const Symbol f = poincare_series(f0, F, 2);
  const Symbol f3 = poincare_series(f0, F, 3);
  const cplx c{0.1, 0.05};
  for (const auto& e : mobius::enumerate_group(F->generators, 1)) {
    const cplx w = mobius::apply(e.g.inverse(), c);
    CHECK(std::abs(f(w) - f(c)) < 1e-13);
  }
  // f on F equals f0 when the orbit of the support stays away from it.
  for (cplx z : {cplx(0.0), cplx(0.2, 0.1), cplx(-0.15, 0.2), cplx(0.35, 0.0)}) CHECK(std::abs(f(z) - f0(z)) < 1e-15);
  // Values on a fixed compact do not change once L exceeds the horizon.
  for (cplx z : {cplx(0.0), cplx(0.7, 0.1), cplx(-0.2, 0.75)}) CHECK(std::abs(f(z) - f3(z)) < 1e-12);
  CHECK(poincare_series(Symbol(), F, 2)(0.3).real() == 0.0);
  CHECK(std::abs(poincare_series(f0, F, 0)(c) - f0(c)) == 0.0);
  // Word length 3 lies beyond the L = 2 horizon.
  const auto els = mobius::enumerate_group(F->generators, 3);
  const cplx far = mobius::apply(els.back().g.inverse(), c);
  CHECK_THROWS_AS(f(far), HorizonExceeded);
  CHECK_NOTHROW(poincare_series(f0, F, 2, false)(far));
  CHECK_THROWS(poincare_series(Symbol::z(), F, 2));
}

TEST_CASE("winding numbers of loops") {
  auto loop = [](std::function<cplx(double)> f, int n = 256) { return loop_data(std::move(f), n); };
  CHECK(winding_number(loop([](double th) { return std::polar(1.0, th); })) == 1);
  CHECK(winding_number(loop([](double th) { return std::polar(1.0, -3 * th); })) == -3);
  CHECK(winding_number(loop([](double th) { return 2.0 + std::polar(1.0, th); })) == 0);
  CHECK_THROWS_AS(winding_number(loop([](double th) { return 1.0 + std::polar(1.0, th); }, 256)), NotInvertible);
  CHECK_THROWS_AS(winding_number(loop([](double th) { return std::polar(1.0, 120 * th); })), Undersampled);
  // Additivity and reparametrization.
  const auto a = loop([](double th) { return std::polar(1.0, 2 * th) * (1.5 + std::cos(th)); });
  const auto b = loop([](double th) { return std::polar(1.0, -5 * th) + 0.2; });
  CHECK(winding_number(pointwise(a, b, [](cplx x, cplx y) { return x * y; })) ==
        winding_number(a) + winding_number(b));
  for (int n : {64, 300, 1001, 4096})
    CHECK(winding_number(loop([](double th) { return std::polar(1.0, -5 * th) + 0.2; }, n)) == -5);
}

TEST_CASE("boundary restriction") {
  const auto D = trivial();
  const auto c = boundary_restriction(Symbol::constant(2.0 - I), *D, 128);
  REQUIRE(c.components.size() == 1);
  for (cplx v : c.components[0].values) CHECK(std::abs(v - (2.0 - I)) == 0.0);
  CHECK(winding_number(c) == 0);
  const auto z = boundary_restriction(Symbol::z(), *D, 256);
  for (std::size_t j = 0; j < z.components[0].values.size(); ++j)
    CHECK(std::abs(z.components[0].values[j] - std::polar(1.0, z.components[0].theta[j])) < 1e-15);
  CHECK(winding_number(z) == 1);

  const auto F = domain();
  const auto p = boundary_restriction(poincare_series(Symbol::bump(0.1, 0.3), F, 2), *F, 128);
  CHECK(p.components.size() == 3);
  for (const auto& comp : p.components)
    for (cplx v : comp.values) CHECK(v == cplx(0.0));
  CHECK_THROWS_AS(boundary_restriction(Symbol::z(), *F, 128), GluingError);
  CHECK_THROWS(boundary_restriction(Symbol::z(), *D, 32));

  const Symbol inv = Symbol::orbit_sum(Symbol::collar_seed(F, {{{1, CollarPiece::Kind::winding, 1, 0.0, false}}}), F, -1);
  const auto b = boundary_restriction(inv.shifted(1.0), *F, 512);
  const auto w = winding_numbers(b);
  int total = 0, nonzero = 0;
  for (int k : w) {
    total += k;
    nonzero += k != 0;
  }
  CHECK(total == 1);
  CHECK(nonzero == 1);
  std::ostringstream os;
  write_csv(b, os);
  CHECK(os.str().rfind("component,theta,re,im\n", 0) == 0);
}

TEST_CASE("truncated operator norm is bounded by the sup norm") {
  for (const auto& [f, sup] : std::vector<std::pair<Symbol, double>>{
           {Symbol::z(), 1.0}, {Symbol::radial(RadialProfile::polynomial({0.0, 1.0})), 1.0}}) {
    double prev = 0.0;
    for (int N : {10, 40, 160}) {
      const Matrix T = toeplitz::toeplitz_block(f, 3.0, N + 1);
      const double nrm = Eigen::JacobiSVD<Matrix>(T).singularValues()(0);
      CHECK(nrm <= sup + 1e-12);
      CHECK(nrm > prev);
      prev = nrm;
    }
    CHECK(prev > 0.95 * sup);
  }
}

TEST_CASE("symbol JSON specs") {
  const auto F = domain();
  const cplx z{0.2, 0.3};
  CHECK(std::abs(parse_symbol_json(R"({"type": "constant", "value": [1, 2]})")(z) - cplx(1, 2)) == 0.0);
  CHECK(std::abs(parse_symbol_json(R"({"type": "laurent", "terms": [{"j": 1, "k": 0, "c": 1}, {"j": 0, "k": 2, "c": [0, 1]}]})")(z) -
                 (std::conj(z) + I * z * z)) < 1e-15);
  CHECK(std::abs(parse_symbol_json(R"({"type": "bump", "center": [0.1, 0.2], "radius": 0.3})")(cplx(0.1, 0.2)) - 1.0) ==
        0.0);
  CHECK(parse_symbol_json(R"({"type": "radial_bump", "support_radius": 0.4})").as_radial().has_value());
  CHECK(std::abs(parse_symbol_json(R"({"type": "product", "terms": [{"type": "blaschke", "a": 0.3}, {"type": "conj", "of": {"type": "laurent", "terms": [{"j": 0, "k": 1, "c": 1}]}}]})")(z) -
                 Symbol::blaschke(0.3)(z) * std::conj(z)) < 1e-15);
  const auto c = parse_symbol_json(
      R"({"type": "orbit_sum", "seed": {"type": "collar", "pieces": [{"arc": 0, "winding": 1}, {"arc": 1, "bump": 0.5}]}})", F);
  CHECK(c.kind() == Symbol::Kind::orbit_sum);
  CHECK_THROWS_AS(parse_symbol_json(R"({"type": "collar", "pieces": []})"), ConfigError);
  CHECK_THROWS_AS(parse_symbol_json(R"({"type": "spline"})"), ConfigError);
  CHECK_THROWS_AS(parse_symbol_json(R"({"type": "bump"})"), ConfigError);
}
