#include "eqtoeplitz/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eqt::equivariant {

namespace {

constexpr double kEdgeTol = 1e-13;
constexpr double kMatchTol = 1e-9;

double wrap_from(double theta, double base) {
  // Representative of theta in [base, base + 2 pi).
  return base + std::fmod(std::fmod(theta - base, 2 * pi) + 2 * pi, 2 * pi);
}

void glue(FundamentalDomain& F) {
  F.gluing.clear();
  F.components.clear();
  const int na = static_cast<int>(F.arcs.size());
  if (F.trivial()) {
    F.gluing.push_back({0, 0, mobius::MobiusTransform::identity()});
    F.components.push_back({0, {0}, {std::polar(1.0, F.arcs[0].end)}});
    return;
  }
  std::vector<mobius::MobiusTransform> letters;
  for (const auto& g : F.generators) {
    letters.push_back(g);
    letters.push_back(g.inverse());
  }
  std::vector<int> next(na, -1);
  for (int i = 0; i < na; ++i) {
    const cplx p = std::polar(1.0, F.arcs[i].end);
    for (const auto& g : letters) {
      const cplx q = mobius::apply_closed(g, p);
      for (int k = 0; k < na; ++k) {
        if (std::abs(q - std::polar(1.0, F.arcs[k].start)) < kMatchTol) {
          next[i] = k;
          F.gluing.push_back({i, k, g});
        }
      }
      if (next[i] >= 0) break;
    }
    if (next[i] < 0) throw GluingError("build_domain: arc end " + std::to_string(i) + " has no glued partner");
  }
  std::vector<bool> seen(na, false);
  for (int i = 0; i < na; ++i) {
    if (seen[i]) continue;
    BoundaryComponent c;
    c.id = static_cast<int>(F.components.size());
    for (int k = i; !seen[k]; k = next[k]) {
      seen[k] = true;
      c.arcs.push_back(k);
      c.cut_points.push_back(std::polar(1.0, F.arcs[k].end));
    }
    F.components.push_back(std::move(c));
  }
}

}  // namespace

bool Arc::contains_angle(double theta) const {
  const double th = wrap_from(theta, start);
  return th >= start && th <= end;
}

bool FundamentalDomain::in_base(cplx z) const {
  for (std::size_t j = 0; j < pairings.size(); ++j) {
    const auto& a = circles[2 * j];
    const auto& b = circles[2 * j + 1];
    if (std::abs(z - a.center) < a.radius - kEdgeTol) return false;
    if (std::abs(z - b.center) <= b.radius + kEdgeTol) return false;
  }
  return true;
}

bool FundamentalDomain::contains(cplx z) const {
  if (!shift) return in_base(z);
  const auto& sh = *shift;
  if (in_base(z) && !sh.enlarged.strictly_inside(z)) return true;
  const cplx w = mobius::apply_closed(generators[sh.pairing].inverse(), z);
  return in_base(w) && sh.enlarged.strictly_inside(w);
}

int FundamentalDomain::arc_of_angle(double theta) const {
  for (std::size_t k = 0; k < arcs.size(); ++k)
    if (arcs[k].contains_angle(theta)) return static_cast<int>(k);
  return -1;
}

FundamentalDomain trivial_domain() {
  FundamentalDomain F;
  F.arcs.push_back({0.0, 2 * pi});
  F.icc = false;
  glue(F);
  return F;
}

FundamentalDomain build_domain(const std::vector<mobius::Pairing>& pairings) {
  if (pairings.empty()) return trivial_domain();
  const auto rep = mobius::verify_schottky(pairings);
  if (!rep.ok) {
    std::string msg = "build_domain: Schottky check failed";
    for (const auto& d : rep.diagnostics) msg += "; " + d;
    throw std::invalid_argument(msg);
  }
  FundamentalDomain F;
  F.pairings = pairings;
  F.icc = rep.icc;
  for (const auto& p : pairings) {
    F.generators.push_back(p.g);
    F.circles.push_back(p.from);
    F.circles.push_back(p.to);
  }
  std::vector<int> order(F.circles.size());
  std::iota(order.begin(), order.end(), 0);
  auto ang = [&](int k) { return wrap_from(F.circles[k].angle(), 0.0); };
  std::sort(order.begin(), order.end(), [&](int x, int y) { return ang(x) < ang(y); });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& c0 = F.circles[order[i]];
    const auto& c1 = F.circles[order[(i + 1) % order.size()]];
    const double s = ang(order[i]) + c0.half_angle();
    double e = wrap_from(F.circles[order[(i + 1) % order.size()]].angle(), 0.0) - c1.half_angle();
    e = wrap_from(e, s);
    F.arcs.push_back({s, e});
  }
  glue(F);
  return F;
}

FundamentalDomain shifted_domain(const FundamentalDomain& F, int pairing, double enlarged_half_angle) {
  require(!F.trivial() && !F.shift, "shifted_domain needs an unshifted Schottky domain");
  require(pairing >= 0 && pairing < static_cast<int>(F.pairings.size()), "shifted_domain: pairing out of range");
  const auto& from = F.circles[2 * pairing];
  require(enlarged_half_angle > from.half_angle(), "shifted_domain: enlarged circle must contain the pairing circle");
  const auto big = mobius::GeodesicCircle::from_arc(from.angle(), enlarged_half_angle);
  for (std::size_t k = 0; k < F.circles.size(); ++k) {
    if (static_cast<int>(k) == 2 * pairing) continue;
    const double sep = std::abs(std::remainder(big.angle() - F.circles[k].angle(), 2 * pi));
    require(sep > enlarged_half_angle + F.circles[k].half_angle(), "shifted_domain: enlarged circle meets another side");
  }
  FundamentalDomain out = F;
  out.shift = CutShift{pairing, big};
  const auto& g = F.generators[pairing];
  const double th = from.angle();
  const double widen = enlarged_half_angle - from.half_angle();
  const cplx old_left = std::polar(1.0, th - from.half_angle());
  const cplx old_right = std::polar(1.0, th + from.half_angle());
  // g maps the removed boundary pieces next to the `from` circle onto pieces next to the `to` circle.
  const cplx to_right = mobius::apply_closed(g, old_left);
  const cplx to_left = mobius::apply_closed(g, old_right);
  const cplx img_left = mobius::apply_closed(g, std::polar(1.0, th - enlarged_half_angle));
  const cplx img_right = mobius::apply_closed(g, std::polar(1.0, th + enlarged_half_angle));
  for (std::size_t k = 0; k < out.arcs.size(); ++k) {
    const Arc a0 = F.arcs[k];
    Arc& a = out.arcs[k];
    const cplx s0 = std::polar(1.0, a0.start), e0 = std::polar(1.0, a0.end);
    if (std::abs(e0 - old_left) < kMatchTol) a.end -= widen;
    if (std::abs(s0 - old_right) < kMatchTol) a.start += widen;
    if (std::abs(s0 - to_right) < kMatchTol) a.start += std::remainder(std::arg(img_left) - a0.start, 2 * pi);
    if (std::abs(e0 - to_left) < kMatchTol) a.end += std::remainder(std::arg(img_right) - a0.end, 2 * pi);
  }
  for (const auto& a : out.arcs) require(a.end > a.start, "shifted_domain: degenerate arc");
  glue(out);
  return out;
}

OrbitRepresentative orbit_representative(const FundamentalDomain& F, cplx z, int Lmax) {
  auto rep = try_orbit_representative(F, z, Lmax);
  if (!rep) throw HorizonExceeded("orbit_representative: no representative within word length " + std::to_string(Lmax));
  return *rep;
}

std::optional<OrbitRepresentative> try_orbit_representative(const FundamentalDomain& F, cplx z, int Lmax) {
  require(std::abs(z) <= 1.0, "orbit_representative: point outside the closed disc");
  OrbitRepresentative rep{z, {}, mobius::MobiusTransform::identity()};
  auto step = [&](int j, int e) {
    const auto& g = e > 0 ? F.generators[j] : F.generators[j].inverse();
    rep.point = mobius::apply_closed(g, rep.point);
    rep.g = g * rep.g;
    rep.word.letters.insert(rep.word.letters.begin(), mobius::Letter{j, e});
  };
  const int m = static_cast<int>(F.pairings.size());
  for (;;) {
    bool moved = false;
    for (int j = 0; j < m && !moved; ++j) {
      const auto& a = F.circles[2 * j];
      const auto& b = F.circles[2 * j + 1];
      if (std::abs(rep.point - a.center) < a.radius - kEdgeTol) {
        step(j, +1);
        moved = true;
      } else if (std::abs(rep.point - b.center) <= b.radius + kEdgeTol) {
        step(j, -1);
        moved = true;
      }
    }
    if (!moved) break;
    if (static_cast<int>(rep.word.length()) > Lmax) return std::nullopt;
  }
  if (F.shift && F.shift->enlarged.strictly_inside(rep.point)) step(F.shift->pairing, +1);
  return rep;
}

}  // namespace eqt::equivariant
