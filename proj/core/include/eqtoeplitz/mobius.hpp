#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqtoeplitz/common.hpp"

namespace eqt::mobius {

/// SU(1,1) element [[a, b], [conj b, conj a]] acting by z -> (az + b)/(conj(b) z + conj(a)).
struct MobiusTransform {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};

  static MobiusTransform identity() { return {}; }
  /// z -> e^{i theta} z
  static MobiusTransform rotation(double theta);
  /// Hyperbolic translation by distance s along the real diameter towards +1.
  static MobiusTransform boost(double s);

  MobiusTransform inverse() const { return {std::conj(a), -b}; }
  MobiusTransform renormalized() const;
  double determinant() const { return std::norm(a) - std::norm(b); }
  /// Translation length 2 acosh|a|.
  double translation_length() const;
};

/// Composition g * h = g o h, renormalized.
MobiusTransform operator*(const MobiusTransform& g, const MobiusTransform& h);

cplx apply(const MobiusTransform& g, cplx z);
/// Same map on the closed disc; used for boundary points.
cplx apply_closed(const MobiusTransform& g, cplx z);
cplx derivative(const MobiusTransform& g, cplx z);
double delta(cplx p, cplx q);
/// Distance in PSU(1,1): min over the sign ambiguity.
double projective_distance(const MobiusTransform& g, const MobiusTransform& h);

struct Letter {
  int index = 0;
  int exponent = 1;  // +1 or -1
  bool operator==(const Letter&) const = default;
};

struct GroupWord {
  std::vector<Letter> letters;

  std::size_t length() const { return letters.size(); }
  bool reduced() const;
  GroupWord inverse() const;
  /// Generator 0 prints as a/A, generator 1 as b/B, and so on; identity is "e".
  std::string str() const;
  bool operator==(const GroupWord&) const = default;
};

/// Evaluates the word as the composition of generator transforms, left to right.
MobiusTransform evaluate_word(const GroupWord& w, const std::vector<MobiusTransform>& gens);

struct GroupElement {
  GroupWord word;
  MobiusTransform g;
};

/// Freely reduced words of length <= L ordered by length then letter order.
std::vector<GroupElement> enumerate_group(const std::vector<MobiusTransform>& generators, int L);
std::size_t free_group_count(int m, int L);

/// Circle orthogonal to the unit circle.
struct GeodesicCircle {
  cplx center;
  double radius = 0.0;

  /// Circle whose arc on the unit circle is centred at angle theta with half-angle alpha.
  static GeodesicCircle from_arc(double theta, double alpha);
  double angle() const { return std::arg(center); }
  double half_angle() const { return std::atan(radius); }
  bool strictly_inside(cplx z) const { return std::abs(z - center) < radius; }
  double orthogonality_defect() const { return std::abs(std::norm(center) - 1.0 - radius * radius); }
};

/// g carries the exterior of `from` onto the interior of `to`.
struct Pairing {
  GeodesicCircle from;
  GeodesicCircle to;
  MobiusTransform g;
};

Pairing make_pairing(const GeodesicCircle& from, const GeodesicCircle& to);
/// Pairing read from a generator: isometric circles of g and g^{-1}.
Pairing pairing_from_generator(const MobiusTransform& g);

struct SchottkyReport {
  bool ok = true;
  bool icc = true;
  std::optional<std::pair<int, int>> offending;  // circle indices (2j = from, 2j+1 = to)
  std::vector<std::string> diagnostics;
};

SchottkyReport verify_schottky(const std::vector<Pairing>& pairings);

/// Symmetric test groups: 2m circles equally spaced, circle 2j paired with 2j+1.
std::vector<Pairing> symmetric_pairings(int m, double half_angle);

/// JSON: {"pairings": [{"circle1": {"center": [re, im], "radius": r}, "circle2": {...}}, ...]}
/// or {"generators": [{"a_re":..,"a_im":..,"b_re":..,"b_im":..}, ...]}.
std::vector<Pairing> parse_group_json(const std::string& text);
std::string group_to_json(const std::vector<Pairing>& pairings);

}  // namespace eqt::mobius
