#pragma once

#include <optional>
#include <vector>

#include "eqtoeplitz/common.hpp"
#include "eqtoeplitz/mobius.hpp"

namespace eqt::equivariant {

/// Counterclockwise arc of the unit circle, start < end (angles in radians, not reduced).
struct Arc {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
  bool contains_angle(double theta) const;
};

/// The end of arc `from` is identified with the start of arc `to` by `g`.
struct GlueLink {
  int from = 0;
  int to = 0;
  mobius::MobiusTransform g;
};

struct BoundaryComponent {
  int id = 0;
  std::vector<int> arcs;          // in loop order
  std::vector<cplx> cut_points;   // arc end points along the loop
};

/// Moves F cap int(C~) across pairing `pairing`, where C~ is an enlarged circle around its `from` circle.
struct CutShift {
  int pairing = 0;
  mobius::GeodesicCircle enlarged;
};

/// Schottky fundamental domain: exterior of the 2m pairing circles, with the induced boundary gluing.
struct FundamentalDomain {
  std::vector<mobius::Pairing> pairings;
  std::vector<mobius::MobiusTransform> generators;
  std::vector<mobius::GeodesicCircle> circles;  // 2j = from, 2j+1 = to
  std::vector<Arc> arcs;
  std::vector<GlueLink> gluing;
  std::vector<BoundaryComponent> components;
  std::optional<CutShift> shift;
  bool icc = false;

  bool trivial() const { return pairings.empty(); }
  /// Closed Schottky exterior, with points on the `to` circles assigned to their `from` partners.
  bool in_base(cplx z) const;
  bool contains(cplx z) const;
  /// Index of the arc containing angle theta, or -1.
  int arc_of_angle(double theta) const;
};

FundamentalDomain build_domain(const std::vector<mobius::Pairing>& pairings);
FundamentalDomain trivial_domain();
/// Second cut of the same quotient: F' = (F \ U) u g_j(U), U = F cap int(C~).
FundamentalDomain shifted_domain(const FundamentalDomain& F, int pairing, double enlarged_half_angle);

struct OrbitRepresentative {
  cplx point;
  mobius::GroupWord word;        // evaluate_word(word) maps the input to `point`
  mobius::MobiusTransform g;
};

/// Descent by the pairing maps until the point lands in F. Works on the closed disc away from the limit set.
OrbitRepresentative orbit_representative(const FundamentalDomain& F, cplx z, int Lmax);
/// Same, returning nothing instead of throwing when the word would exceed Lmax.
std::optional<OrbitRepresentative> try_orbit_representative(const FundamentalDomain& F, cplx z, int Lmax);

}  // namespace eqt::equivariant
