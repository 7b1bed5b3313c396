#include "eqtoeplitz/mobius.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace eqt::mobius {

MobiusTransform MobiusTransform::rotation(double theta) {
  return {std::polar(1.0, theta / 2), 0.0};
}

MobiusTransform MobiusTransform::boost(double s) {
  return {std::cosh(s / 2), std::sinh(s / 2)};
}

MobiusTransform MobiusTransform::renormalized() const {
  const double det = determinant();
  if (!(det > 0)) throw std::runtime_error("mobius: |a|^2 - |b|^2 lost positivity");
  const double s = 1.0 / std::sqrt(det);
  return {a * s, b * s};
}

double MobiusTransform::translation_length() const {
  return 2.0 * std::acosh(std::max(1.0, std::abs(a)));
}

MobiusTransform operator*(const MobiusTransform& g, const MobiusTransform& h) {
  MobiusTransform r{g.a * h.a + g.b * std::conj(h.b), g.a * h.b + g.b * std::conj(h.a)};
  return r.renormalized();
}

cplx apply_closed(const MobiusTransform& g, cplx z) {
  return (g.a * z + g.b) / (std::conj(g.b) * z + std::conj(g.a));
}

cplx apply(const MobiusTransform& g, cplx z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("mobius::apply: |z| >= 1");
  return apply_closed(g, z);
}

cplx derivative(const MobiusTransform& g, cplx z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("mobius::derivative: |z| >= 1");
  const cplx d = std::conj(g.b) * z + std::conj(g.a);
  return 1.0 / (d * d);
}

double delta(cplx p, cplx q) {
  return (1.0 - std::norm(p)) * (1.0 - std::norm(q)) / std::norm(1.0 - p * std::conj(q));
}

double projective_distance(const MobiusTransform& g, const MobiusTransform& h) {
  const double plus = std::abs(g.a - h.a) + std::abs(g.b - h.b);
  const double minus = std::abs(g.a + h.a) + std::abs(g.b + h.b);
  return std::min(plus, minus);
}

bool GroupWord::reduced() const {
  for (std::size_t i = 1; i < letters.size(); ++i)
    if (letters[i].index == letters[i - 1].index && letters[i].exponent == -letters[i - 1].exponent)
      return false;
  return true;
}

GroupWord GroupWord::inverse() const {
  GroupWord w;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back({it->index, -it->exponent});
  return w;
}

std::string GroupWord::str() const {
  if (letters.empty()) return "e";
  std::string s;
  for (const auto& l : letters) {
    const char c = static_cast<char>('a' + l.index);
    s.push_back(l.exponent > 0 ? c : static_cast<char>(std::toupper(c)));
  }
  return s;
}

MobiusTransform evaluate_word(const GroupWord& w, const std::vector<MobiusTransform>& gens) {
  MobiusTransform g;
  for (const auto& l : w.letters) {
    require(l.index >= 0 && l.index < static_cast<int>(gens.size()), "word letter out of range");
    g = g * (l.exponent > 0 ? gens[l.index] : gens[l.index].inverse());
  }
  return g;
}

std::size_t free_group_count(int m, int L) {
  std::size_t total = 1, layer = 2 * static_cast<std::size_t>(m);
  for (int k = 1; k <= L; ++k) {
    total += layer;
    layer *= 2 * static_cast<std::size_t>(m) - 1;
  }
  return m == 0 ? 1 : total;
}

std::vector<GroupElement> enumerate_group(const std::vector<MobiusTransform>& generators, int L) {
  if (L < 0) throw std::invalid_argument("enumerate_group: L < 0");
  const int m = static_cast<int>(generators.size());
  std::vector<Letter> alphabet;
  for (int i = 0; i < m; ++i) {
    alphabet.push_back({i, 1});
    alphabet.push_back({i, -1});
  }
  std::vector<GroupElement> out{{GroupWord{}, MobiusTransform::identity()}};
  std::size_t layer_begin = 0, layer_end = 1;
  for (int k = 1; k <= L; ++k) {
    for (std::size_t e = layer_begin; e < layer_end; ++e) {
      for (const auto& l : alphabet) {
        const auto& w = out[e].word.letters;
        if (!w.empty() && w.back().index == l.index && w.back().exponent == -l.exponent) continue;
        GroupElement next{out[e].word, {}};
        next.word.letters.push_back(l);
        next.g = out[e].g * (l.exponent > 0 ? generators[l.index] : generators[l.index].inverse());
        out.push_back(std::move(next));
      }
    }
    layer_begin = layer_end;
    layer_end = out.size();
  }
  return out;
}

GeodesicCircle GeodesicCircle::from_arc(double theta, double alpha) {
  require(alpha > 0 && alpha < pi / 2, "geodesic circle half-angle must lie in (0, pi/2)");
  return {std::polar(1.0 / std::cos(alpha), theta), std::tan(alpha)};
}

namespace {

// Point where the geodesic crosses the ray through its centre.
double crossing_radius(double alpha) { return (1.0 - std::sin(alpha)) / std::cos(alpha); }

}  // namespace

Pairing make_pairing(const GeodesicCircle& from, const GeodesicCircle& to) {
  const double s = 2.0 * std::atanh(crossing_radius(from.half_angle())) +
                   2.0 * std::atanh(crossing_radius(to.half_angle()));
  const auto g = MobiusTransform::rotation(to.angle()) * MobiusTransform::boost(s) *
                 MobiusTransform::rotation(pi - from.angle());
  return {from, to, g};
}

Pairing pairing_from_generator(const MobiusTransform& g0) {
  const auto g = g0.renormalized();
  require(std::abs(g.b) > 1e-12, "generator must be hyperbolic (b != 0)");
  // |conj(b) z + conj(a)| = 1 is the isometric circle of g, mapped by g onto that of g^{-1}.
  const double r = 1.0 / std::abs(g.b);
  GeodesicCircle from{-std::conj(g.a) / std::conj(g.b), r};
  GeodesicCircle to{g.a / std::conj(g.b), r};
  return {from, to, g};
}

namespace {

bool circles_disjoint(const GeodesicCircle& c1, const GeodesicCircle& c2) {
  // Disjoint in the closed disc <=> the arcs on the unit circle do not overlap.
  const double sep = std::abs(std::remainder(c1.angle() - c2.angle(), 2 * pi));
  return sep > c1.half_angle() + c2.half_angle() + 1e-12;
}

}  // namespace

SchottkyReport verify_schottky(const std::vector<Pairing>& pairings) {
  SchottkyReport rep;
  std::vector<GeodesicCircle> circles;
  for (const auto& p : pairings) {
    circles.push_back(p.from);
    circles.push_back(p.to);
  }
  for (std::size_t i = 0; i < circles.size(); ++i) {
    if (circles[i].orthogonality_defect() > 1e-9) {
      rep.ok = false;
      rep.diagnostics.push_back("circle " + std::to_string(i) + " is not orthogonal to the unit circle");
    }
  }
  for (std::size_t i = 0; i < circles.size() && rep.ok; ++i)
    for (std::size_t j = i + 1; j < circles.size(); ++j)
      if (!circles_disjoint(circles[i], circles[j])) {
        rep.ok = false;
        rep.offending = std::pair<int, int>(static_cast<int>(i), static_cast<int>(j));
        rep.diagnostics.push_back("circles " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
        break;
      }
  for (std::size_t k = 0; k < pairings.size() && rep.ok; ++k) {
    // g must carry the exterior of `from` onto the interior of `to`.
    const auto& p = pairings[k];
    const cplx img = apply(p.g, 0.0);
    double worst = 0.0;
    for (int s = 0; s < 8; ++s) {
      const cplx w = p.from.center + std::polar(p.from.radius, p.from.angle() + pi + (s - 3.5) * 0.2 * (pi / 2 - p.from.half_angle()));
      if (std::abs(w) < 1.0) worst = std::max(worst, std::abs(std::abs(apply(p.g, w) - p.to.center) - p.to.radius));
    }
    if (!p.to.strictly_inside(img) || worst > 1e-8) {
      rep.ok = false;
      rep.diagnostics.push_back("pairing " + std::to_string(k) + " does not map its circles as declared");
    }
  }
  if (pairings.size() < 2) {
    rep.icc = false;
    rep.diagnostics.push_back("elementary (cyclic) group: not icc");
  }
  return rep;
}

std::vector<Pairing> symmetric_pairings(int m, double half_angle) {
  require(m >= 1, "symmetric_pairings: m >= 1");
  std::vector<Pairing> out;
  const double step = pi / m;
  for (int j = 0; j < m; ++j)
    out.push_back(make_pairing(GeodesicCircle::from_arc(2 * j * step, half_angle),
                               GeodesicCircle::from_arc((2 * j + 1) * step, half_angle)));
  return out;
}

namespace {

GeodesicCircle circle_from_json(const nlohmann::json& j) {
  const auto& c = j.at("center");
  return {cplx(c.at(0).get<double>(), c.at(1).get<double>()), j.at("radius").get<double>()};
}

}  // namespace

std::vector<Pairing> parse_group_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<Pairing> out;
  if (j.contains("pairings")) {
    for (const auto& p : j.at("pairings"))
      out.push_back(make_pairing(circle_from_json(p.at("circle1")), circle_from_json(p.at("circle2"))));
  } else if (j.contains("generators")) {
    for (const auto& g : j.at("generators"))
      out.push_back(pairing_from_generator({cplx(g.at("a_re").get<double>(), g.at("a_im").get<double>()),
                                            cplx(g.at("b_re").get<double>(), g.at("b_im").get<double>())}));
  } else if (j.contains("symmetric")) {
    const auto& s = j.at("symmetric");
    out = symmetric_pairings(s.at("m").get<int>(), s.at("half_angle").get<double>());
  } else {
    throw ConfigError("group spec needs 'pairings', 'generators' or 'symmetric'");
  }
  return out;
}

std::string group_to_json(const std::vector<Pairing>& pairings) {
  nlohmann::json arr = nlohmann::json::array();
  auto circ = [](const GeodesicCircle& c) {
    return nlohmann::json{{"center", {c.center.real(), c.center.imag()}}, {"radius", c.radius}};
  };
  for (const auto& p : pairings) arr.push_back({{"circle1", circ(p.from)}, {"circle2", circ(p.to)}});
  return nlohmann::json{{"pairings", arr}}.dump(2);
}

}  // namespace eqt::mobius
