#include "eqtoeplitz/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace eqt::symbols {

using equivariant::FundamentalDomain;
using DomainPtr = std::shared_ptr<const FundamentalDomain>;

struct Node {
  Symbol::Kind kind = Symbol::Kind::laurent;
  LaurentMap laurent;
  RadialProfile radial;
  cplx center{0.0};
  double radius = 0.0;
  cplx amp{1.0};
  cplx a{0.0};
  DomainPtr domain;
  CollarSpec collar;
  int L = -1;
  int horizon = 64;
  bool strict = true;
  int depth = 0;
  std::vector<mobius::GroupElement> elements;
  std::vector<Symbol> kids;
  cplx alpha{1.0}, beta{0.0};
  mobius::MobiusTransform g;
};

// ---------------------------------------------------------------- profiles

double smooth_step(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  const double p = std::exp(-1.0 / x), q = std::exp(-1.0 / (1.0 - x));
  return p / (p + q);
}

double smooth_step_derivative(double x) {
  if (x <= 0 || x >= 1) return 0.0;
  const double p = std::exp(-1.0 / x), q = std::exp(-1.0 / (1.0 - x));
  const double dp = p / (x * x), dq = -q / ((1.0 - x) * (1.0 - x));
  return (dp * q - p * dq) / ((p + q) * (p + q));
}

double bump_profile(double x) { return x < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x)) : 0.0; }

double bump_profile_derivative(double x) {
  if (x >= 1.0) return 0.0;
  return -bump_profile(x) / ((1.0 - x) * (1.0 - x));
}

RadialProfile RadialProfile::polynomial(std::vector<cplx> c) {
  RadialProfile p;
  p.kind = Kind::polynomial;
  p.coeffs = std::move(c);
  return p;
}

RadialProfile RadialProfile::bump(double support_radius, cplx amplitude) {
  require(support_radius > 0 && support_radius < 1, "radial bump support radius must lie in (0, 1)");
  RadialProfile p;
  p.kind = Kind::bump;
  p.u_max = support_radius * support_radius;
  p.amplitude = amplitude;
  return p;
}

cplx RadialProfile::value(double u) const {
  if (kind == Kind::bump) return amplitude * bump_profile(u / u_max);
  cplx s = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * u + *it;
  return s;
}

cplx RadialProfile::derivative(double u) const {
  if (kind == Kind::bump) return amplitude * bump_profile_derivative(u / u_max) / u_max;
  cplx s = 0.0;
  for (std::size_t j = coeffs.size(); j-- > 1;) s = s * u + static_cast<double>(j) * coeffs[j];
  return s;
}

// ---------------------------------------------------------------- construction

namespace {

std::shared_ptr<Node> make(Symbol::Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

double wrap_from(double theta, double base) {
  return base + std::fmod(std::fmod(theta - base, 2 * pi) + 2 * pi, 2 * pi);
}

}  // namespace

Symbol::Symbol() : Symbol(make(Kind::laurent)) {}

Symbol Symbol::constant(cplx c) { return monomial(0, 0, c); }

Symbol Symbol::laurent(LaurentMap coeffs) {
  auto n = make(Kind::laurent);
  for (auto& [jk, c] : coeffs) {
    require(jk.first >= 0 && jk.second >= 0, "Laurent exponents must be nonnegative");
    if (c != cplx(0.0)) n->laurent[jk] = c;
  }
  return Symbol(n);
}

Symbol Symbol::monomial(int j, int k, cplx c) { return laurent({{{j, k}, c}}); }

Symbol Symbol::radial(RadialProfile profile) {
  auto n = make(Kind::radial);
  n->radial = std::move(profile);
  return Symbol(n);
}

Symbol Symbol::bump(cplx center, double radius, cplx amplitude) {
  require(radius > 0, "bump radius must be positive");
  if (!(std::abs(center) + radius < 1.0))
    throw std::invalid_argument("bump support must stay a positive distance from the unit circle");
  auto n = make(Kind::bump);
  n->center = center;
  n->radius = radius;
  n->amp = amplitude;
  return Symbol(n);
}

Symbol Symbol::blaschke(cplx a) {
  require(std::abs(a) < 1.0, "Blaschke zero must lie in the open disc");
  auto n = make(Kind::blaschke);
  n->a = a;
  return Symbol(n);
}

Symbol Symbol::collar_seed(DomainPtr F, CollarSpec spec) {
  require(F != nullptr, "collar_seed needs a domain");
  require(0 < spec.r1 && spec.r1 < spec.r2 && spec.r2 < 1, "collar radii must satisfy 0 < r1 < r2 < 1");
  require(spec.margin > 0 && spec.margin < 0.5, "collar margin must lie in (0, 1/2)");
  for (const auto& p : spec.pieces) {
    require(p.arc >= 0 && p.arc < static_cast<int>(F->arcs.size()), "collar piece arc out of range");
    if (p.kind == CollarPiece::Kind::bump && p.reciprocal)
      require(std::abs(p.amplitude) < 1.0, "reciprocal bump piece needs |amplitude| < 1");
  }
  auto n = make(Kind::collar);
  n->domain = std::move(F);
  n->collar = std::move(spec);
  return Symbol(n);
}

Symbol Symbol::orbit_sum(Symbol seed, DomainPtr F, int L, int horizon) {
  require(F != nullptr, "orbit_sum needs a domain");
  auto n = make(Kind::orbit_sum);
  n->kids = {std::move(seed)};
  n->domain = std::move(F);
  n->L = L;
  n->horizon = L >= 0 ? L : horizon;
  return Symbol(n);
}

Symbol poincare_series(const Symbol& f0, DomainPtr F, int L, bool strict) {
  require(F != nullptr, "poincare_series needs a domain");
  require(L >= 0, "poincare_series: L >= 0");
  if (f0.is_zero()) return Symbol();
  const auto supp = f0.support();
  if (!supp || !(std::abs(supp->center) + supp->radius < 1.0))
    throw std::invalid_argument("poincare_series: seed support must be compact in the open disc");
  auto n = make(Symbol::Kind::poincare);
  n->kids = {f0};
  n->domain = F;
  n->L = L;
  n->strict = strict;
  n->elements = mobius::enumerate_group(F->generators, L);
  // Seeds straddling a side need one extra letter to complete the orbit sum.
  n->depth = 0;
  for (const auto& c : F->circles)
    if (std::abs(supp->center - c.center) < supp->radius + c.radius) n->depth = 1;
  return Symbol(n);
}

Symbol Symbol::operator+(const Symbol& o) const {
  auto n = make(Kind::sum);
  n->kids = {*this, o};
  return Symbol(n);
}

Symbol Symbol::operator-(const Symbol& o) const { return *this + o.scaled(-1.0); }

Symbol Symbol::operator*(const Symbol& o) const {
  auto n = make(Kind::product);
  n->kids = {*this, o};
  return Symbol(n);
}

Symbol Symbol::affine(cplx alpha, cplx beta) const {
  auto n = make(Kind::affine);
  n->kids = {*this};
  n->alpha = alpha;
  n->beta = beta;
  return Symbol(n);
}

Symbol Symbol::conj() const {
  auto n = make(Kind::conj);
  n->kids = {*this};
  return Symbol(n);
}

Symbol Symbol::reciprocal() const {
  auto n = make(Kind::reciprocal);
  n->kids = {*this};
  return Symbol(n);
}

Symbol Symbol::composed(const mobius::MobiusTransform& g) const {
  auto n = make(Kind::compose);
  n->kids = {*this};
  n->g = g;
  return Symbol(n);
}

Symbol::Kind Symbol::kind() const { return node_->kind; }

// ---------------------------------------------------------------- evaluation

namespace {

struct CollarEval {
  cplx value{0.0};
  cplx dr{0.0};
  cplx dtheta{0.0};
};

// h - 1 and dh/dtheta on one arc, or nothing if theta is outside the arc.
bool collar_profile(const CollarPiece& p, const equivariant::Arc& arc, double margin, double theta, cplx& hm1,
                    cplx& dh) {
  const double len = arc.length();
  const double x = (wrap_from(theta, arc.start) - arc.start) / len;
  if (!(x > 0.0 && x < 1.0)) return false;
  const double y = (x - margin) / (1.0 - 2.0 * margin);
  const double dydth = 1.0 / (len * (1.0 - 2.0 * margin));
  cplx h, hp;
  if (p.kind == CollarPiece::Kind::winding) {
    // Flat ends are exactly 1 so seeds vanish identically near the cut points.
    const bool in = y > 0.0 && y < 1.0;
    h = in ? std::exp(2.0 * pi * I * static_cast<double>(p.winding) * smooth_step(y)) : cplx(1.0);
    hp = in ? 2.0 * pi * I * static_cast<double>(p.winding) * smooth_step_derivative(y) * h * dydth : cplx(0.0);
  } else {
    const double w = (2.0 * y - 1.0) * (2.0 * y - 1.0);
    const bool in = y > 0.0 && y < 1.0;
    h = 1.0 + (in ? p.amplitude * bump_profile(w) : 0.0);
    hp = in ? p.amplitude * bump_profile_derivative(w) * 4.0 * (2.0 * y - 1.0) * dydth : 0.0;
  }
  if (p.reciprocal) {
    hp = -hp / (h * h);
    h = 1.0 / h;
  }
  hm1 = h - 1.0;
  dh = hp;
  return true;
}

CollarEval collar_polar(const Node& n, double r, double theta) {
  CollarEval e;
  const auto& cs = n.collar;
  if (r <= cs.r1) return e;
  const double x = (r - cs.r1) / (cs.r2 - cs.r1);
  const double chi = smooth_step(x), dchi = smooth_step_derivative(x) / (cs.r2 - cs.r1);
  for (const auto& p : cs.pieces) {
    cplx hm1, dh;
    if (!collar_profile(p, n.domain->arcs[p.arc], cs.margin, theta, hm1, dh)) continue;
    e.value += chi * hm1;
    e.dr += dchi * hm1;
    e.dtheta += chi * dh;
  }
  return e;
}

// Chain rule for f o g with g holomorphic.
Jet pullback(const Jet& j, cplx gp) { return {j.v, j.dz * gp, j.dzb * std::conj(gp)}; }

Jet jet_of(const Node& n, cplx z);

Jet laurent_jet(const LaurentMap& m, cplx z) {
  Jet r;
  const cplx zb = std::conj(z);
  for (const auto& [jk, c] : m) {
    const auto [j, k] = jk;
    const cplx zbj = ipow(zb, j), zk = ipow(z, k);
    r.v += c * zbj * zk;
    if (k > 0) r.dz += c * static_cast<double>(k) * zbj * ipow(z, k - 1);
    if (j > 0) r.dzb += c * static_cast<double>(j) * ipow(zb, j - 1) * zk;
  }
  return r;
}

Jet jet_of(const Node& n, cplx z) {
  using K = Symbol::Kind;
  switch (n.kind) {
    case K::laurent:
      return laurent_jet(n.laurent, z);
    case K::radial: {
      const double u = std::norm(z);
      const cplx d = n.radial.derivative(u);
      return {n.radial.value(u), d * std::conj(z), d * z};
    }
    case K::bump: {
      const cplx w = z - n.center;
      const double x = std::norm(w) / (n.radius * n.radius);
      if (x >= 1.0) return {};
      const cplx d = n.amp * bump_profile_derivative(x) / (n.radius * n.radius);
      return {n.amp * bump_profile(x), d * std::conj(w), d * w};
    }
    case K::blaschke: {
      const cplx den = 1.0 - std::conj(n.a) * z;
      return {(z - n.a) / den, (1.0 - std::norm(n.a)) / (den * den), 0.0};
    }
    case K::collar: {
      const double r = std::abs(z);
      if (r <= n.collar.r1) return {};
      const double th = std::arg(z);
      const auto e = collar_polar(n, r, th);
      const cplx em = std::polar(1.0, -th), ep = std::polar(1.0, th);
      return {e.value, 0.5 * em * (e.dr - I * e.dtheta / r), 0.5 * ep * (e.dr + I * e.dtheta / r)};
    }
    case K::orbit_sum: {
      const auto rep = equivariant::try_orbit_representative(*n.domain, z, n.horizon);
      if (!rep) {
        if (n.L >= 0) return {};
        throw HorizonExceeded("orbit_sum: point beyond the descent horizon");
      }
      if (rep->word.length() == 0) return jet_of(n.kids[0].node(), z);
      return pullback(jet_of(n.kids[0].node(), rep->point), mobius::derivative(rep->g, z));
    }
    case K::poincare: {
      if (n.strict) {
        const auto rep = equivariant::try_orbit_representative(*n.domain, z, n.L + 1);
        if (!rep || static_cast<int>(rep->word.length()) + n.depth > n.L)
          throw HorizonExceeded("poincare_series: orbit sum incomplete at this point for L = " + std::to_string(n.L));
      }
      Jet acc;
      const auto& base = n.kids[0];
      const auto supp = base.support();
      for (const auto& el : n.elements) {
        const cplx w = mobius::apply(el.g, z);
        if (supp && std::abs(w - supp->center) >= supp->radius) continue;
        const Jet j = pullback(jet_of(base.node(), w), mobius::derivative(el.g, z));
        acc.v += j.v;
        acc.dz += j.dz;
        acc.dzb += j.dzb;
      }
      return acc;
    }
    case K::sum: {
      const Jet a = jet_of(n.kids[0].node(), z), b = jet_of(n.kids[1].node(), z);
      return {a.v + b.v, a.dz + b.dz, a.dzb + b.dzb};
    }
    case K::product: {
      const Jet a = jet_of(n.kids[0].node(), z), b = jet_of(n.kids[1].node(), z);
      return {a.v * b.v, a.dz * b.v + a.v * b.dz, a.dzb * b.v + a.v * b.dzb};
    }
    case K::affine: {
      const Jet a = jet_of(n.kids[0].node(), z);
      return {n.alpha * a.v + n.beta, n.alpha * a.dz, n.alpha * a.dzb};
    }
    case K::conj: {
      const Jet a = jet_of(n.kids[0].node(), z);
      return {std::conj(a.v), std::conj(a.dzb), std::conj(a.dz)};
    }
    case K::reciprocal: {
      const Jet a = jet_of(n.kids[0].node(), z);
      if (a.v == cplx(0.0)) throw NotInvertible("reciprocal symbol: division by zero");
      const cplx inv = 1.0 / a.v;
      return {inv, -a.dz * inv * inv, -a.dzb * inv * inv};
    }
    case K::compose:
      return pullback(jet_of(n.kids[0].node(), mobius::apply(n.g, z)), mobius::derivative(n.g, z));
  }
  return {};
}

cplx boundary_of(const Node& n, double theta) {
  using K = Symbol::Kind;
  const cplx w = std::polar(1.0, theta);
  switch (n.kind) {
    case K::laurent: {
      cplx s = 0.0;
      for (const auto& [jk, c] : n.laurent) s += c * std::polar(1.0, (jk.second - jk.first) * theta);
      return s;
    }
    case K::radial:
      if (n.radial.kind == RadialProfile::Kind::bump) return 0.0;
      return n.radial.value(1.0);
    case K::bump:
      return 0.0;
    case K::blaschke:
      return (w - n.a) / (1.0 - std::conj(n.a) * w);
    case K::collar: {
      cplx s = 0.0;
      for (const auto& p : n.collar.pieces) {
        cplx hm1, dh;
        if (collar_profile(p, n.domain->arcs[p.arc], n.collar.margin, theta, hm1, dh)) s += hm1;
      }
      return s;
    }
    case K::orbit_sum: {
      const auto rep = equivariant::try_orbit_representative(*n.domain, w, n.horizon);
      if (!rep) {
        if (n.L >= 0) return 0.0;
        throw HorizonExceeded("orbit_sum: boundary point beyond the descent horizon");
      }
      return boundary_of(n.kids[0].node(), std::arg(rep->point));
    }
    case K::poincare:
      return 0.0;  // seeds are compactly supported in the open disc
    case K::sum:
      return boundary_of(n.kids[0].node(), theta) + boundary_of(n.kids[1].node(), theta);
    case K::product:
      return boundary_of(n.kids[0].node(), theta) * boundary_of(n.kids[1].node(), theta);
    case K::affine:
      return n.alpha * boundary_of(n.kids[0].node(), theta) + n.beta;
    case K::conj:
      return std::conj(boundary_of(n.kids[0].node(), theta));
    case K::reciprocal: {
      const cplx v = boundary_of(n.kids[0].node(), theta);
      if (v == cplx(0.0)) throw NotInvertible("reciprocal symbol vanishes on the boundary");
      return 1.0 / v;
    }
    case K::compose:
      return boundary_of(n.kids[0].node(), std::arg(mobius::apply_closed(n.g, w)));
  }
  return 0.0;
}

}  // namespace

Jet Symbol::jet(cplx z) const {
  if (!(std::abs(z) < 1.0)) throw DomainError("symbol evaluation: |z| >= 1");
  return jet_of(*node_, z);
}

cplx Symbol::boundary_value(double theta) const { return boundary_of(*node_, theta); }

// ---------------------------------------------------------------- structure queries

std::optional<LaurentMap> Symbol::as_laurent() const {
  using K = Kind;
  const Node& n = *node_;
  switch (n.kind) {
    case K::laurent:
      return n.laurent;
    case K::radial: {
      if (n.radial.kind != RadialProfile::Kind::polynomial) return std::nullopt;
      LaurentMap m;
      for (std::size_t j = 0; j < n.radial.coeffs.size(); ++j)
        if (n.radial.coeffs[j] != cplx(0.0)) m[{static_cast<int>(j), static_cast<int>(j)}] = n.radial.coeffs[j];
      return m;
    }
    case K::sum: {
      auto a = n.kids[0].as_laurent(), b = n.kids[1].as_laurent();
      if (!a || !b) return std::nullopt;
      for (const auto& [jk, c] : *b) (*a)[jk] += c;
      return a;
    }
    case K::product: {
      auto a = n.kids[0].as_laurent(), b = n.kids[1].as_laurent();
      if (!a || !b) return std::nullopt;
      LaurentMap m;
      for (const auto& [p, c] : *a)
        for (const auto& [q, d] : *b) m[{p.first + q.first, p.second + q.second}] += c * d;
      return m;
    }
    case K::affine: {
      auto a = n.kids[0].as_laurent();
      if (!a) return std::nullopt;
      for (auto& [jk, c] : *a) c *= n.alpha;
      (*a)[{0, 0}] += n.beta;
      return a;
    }
    case K::conj: {
      auto a = n.kids[0].as_laurent();
      if (!a) return std::nullopt;
      LaurentMap m;
      for (const auto& [jk, c] : *a) m[{jk.second, jk.first}] = std::conj(c);
      return m;
    }
    default:
      return std::nullopt;
  }
}

std::optional<RadialProfile> Symbol::as_radial() const {
  const Node& n = *node_;
  if (n.kind == Kind::radial) return n.radial;
  if (n.kind == Kind::affine && n.beta == cplx(0.0)) {
    auto p = n.kids[0].as_radial();
    if (!p) return std::nullopt;
    p->amplitude *= n.alpha;
    for (auto& c : p->coeffs) c *= n.alpha;
    return p;
  }
  if (auto m = as_laurent()) {
    std::vector<cplx> coeffs;
    for (const auto& [jk, c] : *m) {
      if (jk.first != jk.second) return std::nullopt;
      if (static_cast<int>(coeffs.size()) <= jk.first) coeffs.resize(jk.first + 1, 0.0);
      coeffs[jk.first] += c;
    }
    return RadialProfile::polynomial(coeffs);
  }
  return std::nullopt;
}

int Symbol::bandwidth() const {
  const auto m = as_laurent();
  require(m.has_value(), "bandwidth is defined for Laurent polynomials only");
  int bw = 0;
  for (const auto& [jk, c] : *m)
    if (c != cplx(0.0)) bw = std::max(bw, std::abs(jk.second - jk.first));
  return bw;
}

bool Symbol::is_zero() const {
  const auto m = as_laurent();
  if (!m) return false;
  return std::all_of(m->begin(), m->end(), [](const auto& kv) { return kv.second == cplx(0.0); });
}

std::optional<SupportDisc> Symbol::support() const {
  using K = Kind;
  const Node& n = *node_;
  switch (n.kind) {
    case K::bump:
      return SupportDisc{n.center, n.radius};
    case K::radial:
      if (n.radial.kind == RadialProfile::Kind::bump) return SupportDisc{0.0, std::sqrt(n.radial.u_max)};
      return std::nullopt;
    case K::affine:
      if (n.beta != cplx(0.0)) return std::nullopt;
      return n.kids[0].support();
    case K::conj:
      return n.kids[0].support();
    case K::product: {
      auto a = n.kids[0].support(), b = n.kids[1].support();
      if (a && b) return a->radius <= b->radius ? a : b;
      return a ? a : b;
    }
    case K::compose: {
      const auto a = n.kids[0].support();
      if (!a) return std::nullopt;
      // Preimage of a disc under g: a disc through the preimages of three boundary points.
      const auto h = n.g.inverse();
      cplx p[3];
      for (int i = 0; i < 3; ++i) p[i] = mobius::apply_closed(h, a->center + a->radius * std::polar(1.0, 2 * pi * i / 3));
      const cplx ab = p[1] - p[0], ac = p[2] - p[0];
      const double den = 2.0 * (ab.real() * ac.imag() - ab.imag() * ac.real());
      const cplx c = p[0] + cplx(ac.imag() * std::norm(ab) - ab.imag() * std::norm(ac),
                                 ab.real() * std::norm(ac) - ac.real() * std::norm(ab)) /
                                den;
      return SupportDisc{c, std::abs(p[0] - c)};
    }
    case K::sum: {
      auto a = n.kids[0].support(), b = n.kids[1].support();
      if (!a || !b) return std::nullopt;
      const double d = std::abs(a->center - b->center);
      if (d + b->radius <= a->radius) return a;
      if (d + a->radius <= b->radius) return b;
      const double R = 0.5 * (d + a->radius + b->radius);
      const cplx c = a->center + (b->center - a->center) / d * (R - a->radius);
      return SupportDisc{c, R};
    }
    default:
      if (is_zero()) return SupportDisc{0.0, 0.0};
      return std::nullopt;
  }
}

// ---------------------------------------------------------------- JSON

namespace {

cplx cplx_of(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Symbol parse_node(const nlohmann::json& j, const DomainPtr& F) {
  const auto type = j.at("type").get<std::string>();
  if (type == "constant") return Symbol::constant(cplx_of(j.at("value")));
  if (type == "laurent") {
    LaurentMap m;
    for (const auto& t : j.at("terms")) m[{t.at("j").get<int>(), t.at("k").get<int>()}] += cplx_of(t.at("c"));
    return Symbol::laurent(m);
  }
  if (type == "radial_bump")
    return Symbol::radial(RadialProfile::bump(j.at("support_radius").get<double>(), cplx_of(j.value("amplitude", nlohmann::json(1.0)))));
  if (type == "radial_polynomial") {
    std::vector<cplx> c;
    for (const auto& x : j.at("coeffs")) c.push_back(cplx_of(x));
    return Symbol::radial(RadialProfile::polynomial(c));
  }
  if (type == "bump")
    return Symbol::bump(cplx_of(j.at("center")), j.at("radius").get<double>(), cplx_of(j.value("amplitude", nlohmann::json(1.0))));
  if (type == "blaschke") return Symbol::blaschke(cplx_of(j.at("a")));
  if (type == "sum" || type == "product") {
    const auto& items = j.at("terms");
    require(!items.empty(), "empty " + type);
    Symbol acc = parse_node(items.at(0), F);
    for (std::size_t i = 1; i < items.size(); ++i)
      acc = type == "sum" ? acc + parse_node(items[i], F) : acc * parse_node(items[i], F);
    return acc;
  }
  if (type == "affine")
    return parse_node(j.at("of"), F).affine(cplx_of(j.value("alpha", nlohmann::json(1.0))), cplx_of(j.value("beta", nlohmann::json(0.0))));
  if (type == "conj") return parse_node(j.at("of"), F).conj();
  if (type == "reciprocal") return parse_node(j.at("of"), F).reciprocal();
  if (type == "collar") {
    if (!F) throw ConfigError("collar symbol needs a group/domain");
    CollarSpec cs;
    cs.r1 = j.value("r1", cs.r1);
    cs.r2 = j.value("r2", cs.r2);
    cs.margin = j.value("margin", cs.margin);
    for (const auto& p : j.at("pieces")) {
      CollarPiece piece;
      piece.arc = p.at("arc").get<int>();
      if (p.contains("winding")) {
        piece.kind = CollarPiece::Kind::winding;
        piece.winding = p.at("winding").get<int>();
      } else {
        piece.kind = CollarPiece::Kind::bump;
        piece.amplitude = cplx_of(p.at("bump"));
      }
      piece.reciprocal = p.value("reciprocal", false);
      cs.pieces.push_back(piece);
    }
    return Symbol::collar_seed(F, cs);
  }
  if (type == "orbit_sum") {
    if (!F) throw ConfigError("orbit_sum symbol needs a group/domain");
    return Symbol::orbit_sum(parse_node(j.at("seed"), F), F, j.value("L", -1));
  }
  if (type == "poincare") {
    if (!F) throw ConfigError("poincare symbol needs a group/domain");
    return poincare_series(parse_node(j.at("base"), F), F, j.at("L").get<int>(), j.value("strict", true));
  }
  throw ConfigError("unknown symbol type '" + type + "'");
}

}  // namespace

Symbol parse_symbol_json(const std::string& text, DomainPtr F) {
  try {
    return parse_node(nlohmann::json::parse(text), F);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("symbol spec: ") + e.what());
  }
}

// ---------------------------------------------------------------- boundary data

BoundaryData boundary_restriction(const Symbol& f, const FundamentalDomain& F, int samples) {
  require(samples >= 64, "boundary_restriction: at least 64 samples per component");
  for (const auto& link : F.gluing) {
    const cplx a = f.boundary_value(F.arcs[link.from].end);
    const cplx b = f.boundary_value(F.arcs[link.to].start);
    if (std::abs(a - b) > 1e-8)
      throw GluingError("boundary_restriction: symbol is discontinuous across the gluing of arc " +
                        std::to_string(link.from) + " to arc " + std::to_string(link.to));
  }
  BoundaryData out;
  for (const auto& comp : F.components) {
    ComponentSamples cs;
    cs.id = comp.id;
    double total = 0.0;
    for (int a : comp.arcs) total += F.arcs[a].length();
    std::size_t ai = 0;
    double offset = 0.0;
    for (int j = 0; j < samples; ++j) {
      const double s = total * j / samples;
      while (ai + 1 < comp.arcs.size() && s >= offset + F.arcs[comp.arcs[ai]].length()) {
        offset += F.arcs[comp.arcs[ai]].length();
        ++ai;
      }
      const double th = F.arcs[comp.arcs[ai]].start + (s - offset);
      cs.theta.push_back(th);
      cs.values.push_back(f.boundary_value(th));
    }
    out.components.push_back(std::move(cs));
  }
  return out;
}

BoundaryData loop_data(const std::function<cplx(double)>& f, int samples) {
  require(samples >= 64, "loop_data: at least 64 samples");
  ComponentSamples cs;
  for (int j = 0; j < samples; ++j) {
    const double th = 2 * pi * j / samples;
    cs.theta.push_back(th);
    cs.values.push_back(f(th));
  }
  return {{cs}};
}

BoundaryData pointwise(const BoundaryData& a, const BoundaryData& b, const std::function<cplx(cplx, cplx)>& op) {
  require(a.components.size() == b.components.size(), "boundary data: component count mismatch");
  BoundaryData out = a;
  for (std::size_t c = 0; c < a.components.size(); ++c) {
    require(a.components[c].values.size() == b.components[c].values.size(), "boundary data: grid mismatch");
    for (std::size_t j = 0; j < a.components[c].values.size(); ++j)
      out.components[c].values[j] = op(a.components[c].values[j], b.components[c].values[j]);
  }
  return out;
}

BoundaryData map_values(const BoundaryData& a, const std::function<cplx(cplx)>& op) {
  BoundaryData out = a;
  for (auto& c : out.components)
    for (auto& v : c.values) v = op(v);
  return out;
}

std::vector<int> winding_numbers(const BoundaryData& b, double tol) {
  std::vector<int> out;
  for (const auto& c : b.components) {
    const std::size_t n = c.values.size();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const cplx v = c.values[j], w = c.values[(j + 1) % n];
      if (std::abs(v) < tol) throw NotInvertible("winding_number: symbol not invertible on the boundary");
      const double step = std::arg(w / v);
      // Principal increments are only trustworthy well inside (-pi, pi).
      if (std::abs(step) > 0.9 * pi) throw Undersampled("winding_number: argument jump too large between samples");
      total += step;
    }
    out.push_back(static_cast<int>(std::lround(total / (2 * pi))));
  }
  return out;
}

int winding_number(const BoundaryData& b, double tol) {
  int s = 0;
  for (int w : winding_numbers(b, tol)) s += w;
  return s;
}

void write_csv(const BoundaryData& b, std::ostream& os) {
  os.precision(17);
  os << "component,theta,re,im\n";
  for (const auto& c : b.components)
    for (std::size_t j = 0; j < c.values.size(); ++j)
      os << c.id << ',' << c.theta[j] << ',' << c.values[j].real() << ',' << c.values[j].imag() << '\n';
}

}  // namespace eqt::symbols
