#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqtoeplitz/common.hpp"
#include "eqtoeplitz/domain.hpp"

namespace eqt::symbols {

/// Value and Wirtinger derivatives d/dz, d/dzbar.
struct Jet {
  cplx v{0.0};
  cplx dz{0.0};
  cplx dzb{0.0};
};

/// Coefficient c_{j,k} of zbar^j z^k.
using LaurentMap = std::map<std::pair<int, int>, cplx>;

/// phi(u) with u = |z|^2: a polynomial in u, or amplitude * exp(1 - 1/(1 - u/u_max)) on u < u_max.
struct RadialProfile {
  enum class Kind { polynomial, bump };
  Kind kind = Kind::polynomial;
  std::vector<cplx> coeffs;
  double u_max = 1.0;
  cplx amplitude{1.0};

  static RadialProfile polynomial(std::vector<cplx> c);
  static RadialProfile bump(double support_radius, cplx amplitude = 1.0);
  cplx value(double u) const;
  cplx derivative(double u) const;
};

/// Boundary profile on one arc of a fundamental domain: winding exp(2 pi i k S) or 1 + amplitude * bump.
struct CollarPiece {
  enum class Kind { winding, bump };
  int arc = 0;
  Kind kind = Kind::winding;
  int winding = 1;
  cplx amplitude{0.0};
  bool reciprocal = false;  // use 1/h instead of h
};

struct CollarSpec {
  std::vector<CollarPiece> pieces;
  double r1 = 0.5;      // radial cutoff rises from 0 at r1 ...
  double r2 = 0.9;      // ... to 1 at r2
  double margin = 0.1;  // fraction of each arc kept flat at both ends
};

/// Euclidean disc known to contain the support.
struct SupportDisc {
  cplx center;
  double radius = 0.0;
};

struct Node;

/// Immutable symbol on the disc; copies share structure.
class Symbol {
 public:
  enum class Kind {
    laurent, radial, bump, blaschke, collar, orbit_sum, poincare, sum, product, affine, conj, reciprocal, compose
  };

  Symbol();  // zero
  static Symbol constant(cplx c);
  static Symbol laurent(LaurentMap coeffs);
  static Symbol monomial(int j, int k, cplx c = 1.0);  // c zbar^j z^k
  static Symbol z() { return monomial(0, 1); }
  static Symbol zbar() { return monomial(1, 0); }
  static Symbol radial(RadialProfile profile);
  static Symbol bump(cplx center, double radius, cplx amplitude = 1.0);
  static Symbol blaschke(cplx a);
  /// chi(r) (h(theta) - 1) on the sectors of the listed arcs of F; zero elsewhere.
  static Symbol collar_seed(std::shared_ptr<const equivariant::FundamentalDomain> F, CollarSpec spec);
  /// z -> seed(rho(z)) where rho is the orbit representative; zero when its word is longer than L (L < 0: no cap).
  static Symbol orbit_sum(Symbol seed, std::shared_ptr<const equivariant::FundamentalDomain> F, int L,
                          int horizon = 64);

  Symbol operator+(const Symbol& o) const;
  Symbol operator-(const Symbol& o) const;
  Symbol operator*(const Symbol& o) const;
  /// alpha f + beta
  Symbol affine(cplx alpha, cplx beta) const;
  Symbol scaled(cplx alpha) const { return affine(alpha, 0.0); }
  Symbol shifted(cplx beta) const { return affine(1.0, beta); }
  Symbol conj() const;
  Symbol reciprocal() const;
  /// z -> f(g(z)).
  Symbol composed(const mobius::MobiusTransform& g) const;

  Kind kind() const;
  cplx operator()(cplx z) const { return jet(z).v; }
  Jet jet(cplx z) const;
  /// Limit value at e^{i theta}; throws when the symbol has no boundary extension.
  cplx boundary_value(double theta) const;

  std::optional<LaurentMap> as_laurent() const;
  std::optional<RadialProfile> as_radial() const;
  /// Max |k - j| over Laurent terms.
  int bandwidth() const;
  std::optional<SupportDisc> support() const;
  bool is_zero() const;

  const Node& node() const { return *node_; }

 private:
  explicit Symbol(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend Symbol poincare_series(const Symbol&, std::shared_ptr<const equivariant::FundamentalDomain>, int, bool);
};

/// f(z) = sum over |gamma| <= L of f0(gamma z), by explicit enumeration of the group.
/// With strict = true, evaluation throws HorizonExceeded where the sum is not yet complete.
Symbol poincare_series(const Symbol& f0, std::shared_ptr<const equivariant::FundamentalDomain> F, int L,
                       bool strict = true);

/// Parses {"type": ..., ...}; collar and series types need the domain.
Symbol parse_symbol_json(const std::string& text,
                         std::shared_ptr<const equivariant::FundamentalDomain> F = nullptr);

/// Smooth step: 0 for x <= 0, 1 for x >= 1, C-infinity in between.
double smooth_step(double x);
double smooth_step_derivative(double x);
/// exp(1 - 1/(1 - x)) for x < 1, else 0; equals 1 at x = 0.
double bump_profile(double x);
double bump_profile_derivative(double x);

struct ComponentSamples {
  int id = 0;
  std::vector<double> theta;
  std::vector<cplx> values;
};

/// Samples of a symbol on each quotient boundary component, glued into closed loops.
struct BoundaryData {
  std::vector<ComponentSamples> components;
};

BoundaryData boundary_restriction(const Symbol& f, const equivariant::FundamentalDomain& F, int samples);
/// Single closed loop sampled uniformly in theta.
BoundaryData loop_data(const std::function<cplx(double)>& f, int samples);
BoundaryData pointwise(const BoundaryData& a, const BoundaryData& b, const std::function<cplx(cplx, cplx)>& op);
BoundaryData map_values(const BoundaryData& a, const std::function<cplx(cplx)>& op);

std::vector<int> winding_numbers(const BoundaryData& b, double tol = 1e-10);
int winding_number(const BoundaryData& b, double tol = 1e-10);

void write_csv(const BoundaryData& b, std::ostream& os);

}  // namespace eqt::symbols
