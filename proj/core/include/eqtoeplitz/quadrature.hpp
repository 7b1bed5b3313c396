#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eqtoeplitz/common.hpp"
#include "eqtoeplitz/domain.hpp"
#include "eqtoeplitz/symbols.hpp"

namespace eqt::quadrature {

enum class Measure { mu_t, mu_0, lebesgue };

struct QuadratureRule {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  Measure measure = Measure::lebesgue;
  double t = 2.0;     // only meaningful for mu_t
  double rho = 1.0;   // outer radius of the rule
  int order = 0;      // exact on |z|^{2j} for j < order
};

/// Gauss rule for the weight (1-u)^alpha on [0, 1] (Golub-Welsch); weights sum to 1/(alpha+1).
void gauss_jacobi(int n, double alpha, std::vector<double>& nodes, std::vector<double>& weights);
/// Gauss-Legendre on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

/// Tensor rule: Gauss in u = |z|^2, trapezoid in angle. mu_0 rules stop at radius rho < 1.
QuadratureRule disc_rule(Measure m, int radial, int angular, double t = 2.0, double rho = 1.0);

cplx integrate(const std::function<cplx(cplx)>& f, const QuadratureRule& rule);
cplx integrate(const symbols::Symbol& f, const QuadratureRule& rule);

/// int delta(a, b0)^t dmu_0(a), computed as (4 pi/(t-1)) int (1-|b0|^2)^t |1 - a conj(b0)|^{-2t} dmu_t(a).
double delta_inner_integral(cplx b0, double t, int radial = 64, int angular = 128);

enum class PairScheme { recentred, product };

struct PairOptions {
  int radial = 48;
  int angular = 96;
  PairScheme scheme = PairScheme::recentred;
  /// Restricts b to this domain (indicator-filtered outer nodes).
  const equivariant::FundamentalDomain* restrict_b = nullptr;
  double tail_tolerance = 1e-3;
};

/// c_t^2 iint f2(a, b) delta(a, b)^t dmu_0(a) dmu_0(b) with c_t = (t-1)/(4 pi).
cplx delta_pair_integral(const std::function<cplx(cplx, cplx)>& f2, double t, const PairOptions& opt = {},
                         std::vector<std::string>* warnings = nullptr);

/// Region {z in D : z outside every `excluded` half-disc, and inside `inside` when given}.
struct Region {
  std::optional<mobius::GeodesicCircle> inside;
  std::vector<mobius::GeodesicCircle> excluded;
};

/// Pieces whose union is F (one piece, or two for a shifted cut).
std::vector<Region> domain_regions(const equivariant::FundamentalDomain& F);

struct RegionOptions {
  int q = 12;            // Gauss nodes per panel side
  int radial_panels = 12;
  double angular_panel = 0.05;  // target angular panel width (radians)
  double r_cap = 1.0;
};

/// Lebesgue integral over the region in polar coordinates, with endpoint-clustered angular panels at
/// every place a side meets the unit circle.
cplx region_integral(const std::function<cplx(cplx)>& f, const Region& R, const RegionOptions& opt = {});
cplx domain_integral(const std::function<cplx(cplx)>& f, const equivariant::FundamentalDomain& F,
                     const RegionOptions& opt = {});

struct FilteredResult {
  cplx value{0.0};
  int cut_cells = 0;
};
/// Indicator-filtered polar panel rule with one level of refinement at cells the boundary of F cuts.
FilteredResult filtered_domain_integral(const std::function<cplx(cplx)>& f, const equivariant::FundamentalDomain& F,
                                        int panels_r = 32, int panels_theta = 128, int q = 6);

/// The 2-form density -(1/pi)(f_z g_zbar - f_zbar g_z), whose Lebesgue integral is (1/2 pi i) int df ^ dg.
cplx two_form_density(const symbols::Jet& f, const symbols::Jet& g);

/// (1/2 pi i) int_D df ^ dg.
cplx two_form_integral(const symbols::Symbol& f, const symbols::Symbol& g, int radial = 64, int angular = 128);
/// (1/2 pi i) int_F df ^ dg.
cplx two_form_integral(const symbols::Symbol& f, const symbols::Symbol& g, const equivariant::FundamentalDomain& F,
                       const RegionOptions& opt = {});
/// (1/2 pi) int_F |df ^ dg|, the natural scale of the previous quantity.
double two_form_abs_integral(const symbols::Symbol& f, const symbols::Symbol& g,
                             const equivariant::FundamentalDomain& F, const RegionOptions& opt = {});

/// (1/2 pi i) sum over components of the loop integral of f dg; spectral derivative of g.
cplx boundary_form_integral(const symbols::BoundaryData& f, const symbols::BoundaryData& g);

void write_csv(const QuadratureRule& rule, std::ostream& os);

}  // namespace eqt::quadrature
