#include "eqtoeplitz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "eqtoeplitz/parallel.hpp"

namespace eqt::quadrature {

using equivariant::FundamentalDomain;
using mobius::GeodesicCircle;

void gauss_jacobi(int n, double alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  require(n >= 1, "gauss_jacobi: n >= 1");
  require(alpha > -1.0, "gauss_jacobi: alpha > -1");
  // Monic Jacobi recurrence on [-1, 1] for (1-x)^alpha, beta = 0.
  const double b = 0.0;
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + alpha + b;
    diag(k) = k == 0 ? (b - alpha) / (alpha + b + 2.0) : (b * b - alpha * alpha) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + alpha + b;
    sub(k - 1) = std::sqrt(4.0 * k * (k + alpha) * (k + b) * (k + alpha + b) / (s * s * (s + 1.0) * (s - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi: eigensolver failed");
  nodes.resize(n);
  weights.resize(n);
  const double mass = 1.0 / (alpha + 1.0);
  for (int i = 0; i < n; ++i) {
    nodes[i] = 0.5 * (1.0 + es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    weights[i] = mass * v * v;
  }
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  gauss_jacobi(n, 0.0, nodes, weights);
  for (int i = 0; i < n; ++i) {
    nodes[i] = a + (b - a) * nodes[i];
    weights[i] *= (b - a);
  }
}

QuadratureRule disc_rule(Measure m, int radial, int angular, double t, double rho) {
  require(radial >= 4 && angular >= 4, "disc_rule: radialNodes, angularNodes >= 4");
  QuadratureRule R;
  R.measure = m;
  R.t = t;
  R.order = radial;
  std::vector<double> u, wu;
  double scale = 2.0 * pi / angular;
  if (m == Measure::mu_t) {
    if (!(t > 1.0)) throw std::invalid_argument("disc_rule: mu_t needs t > 1");
    require(rho == 1.0, "disc_rule: mu_t rules cover the whole disc");
    gauss_jacobi(radial, t - 2.0, u, wu);
    scale = (t - 1.0) / angular;
    R.rho = 1.0;
  } else {
    require(rho > 0.0 && rho <= 1.0, "disc_rule: rho in (0, 1]");
    if (m == Measure::mu_0) require(rho < 1.0, "disc_rule: mu_0 has infinite mass; use rho < 1");
    gauss_legendre(radial, 0.0, rho * rho, u, wu);
    R.rho = rho;
  }
  for (int i = 0; i < radial; ++i) {
    // dA = du dtheta / 2 and dmu_0 = 2 du dtheta / (1-u)^2.
    double w = wu[i] * scale;
    if (m == Measure::lebesgue) w *= 0.5;
    if (m == Measure::mu_0) w *= 2.0 / ((1.0 - u[i]) * (1.0 - u[i]));
    const double r = std::sqrt(u[i]);
    for (int k = 0; k < angular; ++k) {
      R.nodes.push_back(std::polar(r, 2.0 * pi * k / angular));
      R.weights.push_back(w);
    }
  }
  return R;
}

cplx integrate(const std::function<cplx(cplx)>& f, const QuadratureRule& rule) {
  std::vector<cplx> terms(rule.nodes.size());
  parallel_for(terms.size(), [&](std::size_t i) { terms[i] = rule.weights[i] * f(rule.nodes[i]); });
  return pairwise_sum(terms);
}

cplx integrate(const symbols::Symbol& f, const QuadratureRule& rule) {
  return integrate([&](cplx z) { return f(z); }, rule);
}

double delta_inner_integral(cplx b0, double t, int radial, int angular) {
  require(std::abs(b0) < 1.0, "delta_inner_integral: |b0| < 1");
  const auto rule = disc_rule(Measure::mu_t, radial, angular, t);
  const double nb = std::pow(1.0 - std::norm(b0), t);
  const cplx s = integrate([&](cplx a) { return nb * std::pow(std::norm(1.0 - a * std::conj(b0)), -t); }, rule);
  return 4.0 * pi / (t - 1.0) * s.real();
}

cplx delta_pair_integral(const std::function<cplx(cplx, cplx)>& f2, double t, const PairOptions& opt,
                         std::vector<std::string>* warnings) {
  if (!(t > 1.0)) throw std::invalid_argument("delta_pair_integral: t > 1");
  const double ct = (t - 1.0) / (4.0 * pi);
  const auto inner = disc_rule(Measure::mu_t, opt.radial, opt.angular, t);
  auto keep = [&](cplx b) { return opt.restrict_b == nullptr || opt.restrict_b->contains(b); };

  if (opt.scheme == PairScheme::product) {
    // c_t^2 delta^t dmu_0 dmu_0 = |K(a, b)|^2 dmu_t dmu_t.
    std::vector<cplx> rows(inner.nodes.size());
    parallel_for(rows.size(), [&](std::size_t j) {
      const cplx b = inner.nodes[j];
      if (!keep(b)) return;
      std::vector<cplx> terms(inner.nodes.size());
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const cplx a = inner.nodes[i];
        terms[i] = inner.weights[i] * f2(a, b) * std::pow(std::norm(1.0 - a * std::conj(b)), -t);
      }
      rows[j] = inner.weights[j] * pairwise_sum(terms);
    });
    return pairwise_sum(rows);
  }

  // Recentred: a = phi_b(w) turns c_t delta(a, b)^t dmu_0(a) into dmu_t(w).
  const auto outer = disc_rule(Measure::lebesgue, opt.radial, opt.angular);
  std::vector<cplx> rows(outer.nodes.size());
  parallel_for(rows.size(), [&](std::size_t j) {
    const cplx b = outer.nodes[j];
    if (!keep(b)) return;
    std::vector<cplx> terms(inner.nodes.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const cplx w = inner.nodes[i];
      const cplx a = (w + b) / (1.0 + std::conj(b) * w);
      terms[i] = inner.weights[i] * f2(a, b);
    }
    rows[j] = outer.weights[j] * 4.0 / std::pow(1.0 - std::norm(b), 2) * pairwise_sum(terms);
  });
  const cplx total = ct * pairwise_sum(rows);
  if (warnings) {
    const std::size_t ring = static_cast<std::size_t>(opt.angular);
    const cplx last = ct * pairwise_sum(std::span<const cplx>(rows).subspan(rows.size() - ring));
    if (std::abs(last) > opt.tail_tolerance * std::max(std::abs(total), 1e-300))
      warnings->push_back("delta_pair_integral: outermost ring carries relative weight " +
                          std::to_string(std::abs(last) / std::max(std::abs(total), 1e-300)));
  }
  return total;
}

// ---------------------------------------------------------------- regions

namespace {

double wrap_from(double theta, double base) {
  return base + std::fmod(std::fmod(theta - base, 2 * pi) + 2 * pi, 2 * pi);
}

/// Radius where the ray at angle theta enters the half-disc of C, or nothing outside its wedge.
std::optional<double> entry_radius(const GeodesicCircle& C, double theta) {
  const double d = std::abs(C.center);
  const double phi = std::remainder(theta - C.angle(), 2 * pi);
  const double p = d * std::cos(phi);
  if (p < 1.0) return std::nullopt;
  return p - std::sqrt(std::max(p * p - 1.0, 0.0));
}

GeodesicCircle image_circle(const mobius::MobiusTransform& g, const GeodesicCircle& C) {
  const double th = C.angle(), a = C.half_angle();
  const cplx p = mobius::apply_closed(g, std::polar(1.0, th - a));
  const cplx q = mobius::apply_closed(g, std::polar(1.0, th + a));
  const double half = 0.5 * std::abs(std::remainder(std::arg(q) - std::arg(p), 2 * pi));
  return GeodesicCircle::from_arc(std::arg(p + q), half);
}

}  // namespace

std::vector<Region> domain_regions(const FundamentalDomain& F) {
  if (F.trivial()) return {Region{}};
  Region base;
  base.excluded = F.circles;
  if (!F.shift) return {base};
  const int j = F.shift->pairing;
  base.excluded[2 * j] = F.shift->enlarged;
  Region moved;
  moved.inside = F.circles[2 * j + 1];
  moved.excluded = {image_circle(F.generators[j], F.shift->enlarged)};
  return {base, moved};
}

cplx region_integral(const std::function<cplx(cplx)>& f, const Region& R, const RegionOptions& opt) {
  require(opt.q >= 2 && opt.radial_panels >= 1 && opt.angular_panel > 0, "region_integral: bad options");
  // Angular breakpoints: every place a side meets the unit circle.
  double lo = 0.0, hi = 2 * pi;
  if (R.inside) {
    lo = R.inside->angle() - R.inside->half_angle();
    hi = R.inside->angle() + R.inside->half_angle();
  }
  std::vector<double> cuts{lo, hi};
  for (const auto& C : R.excluded)
    for (double e : {C.angle() - C.half_angle(), C.angle() + C.half_angle()}) {
      const double w = wrap_from(e, lo);
      if (w > lo && w < hi) cuts.push_back(w);
    }
  std::sort(cuts.begin(), cuts.end());

  std::vector<double> sg, sw, rg, rw;
  gauss_legendre(opt.q, 0.0, 1.0, sg, sw);
  gauss_legendre(opt.q, 0.0, 1.0, rg, rw);

  struct ThetaNode {
    double theta, weight;
  };
  std::vector<ThetaNode> thetas;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], b = cuts[c + 1];
    if (b - a < 1e-15) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / opt.angular_panel)));
    for (int p = 0; p < panels; ++p)
      for (int i = 0; i < opt.q; ++i) {
        // theta = a + (b - a)(1 - cos(pi s))/2 clusters nodes at both ends of the interval.
        const double s = (p + sg[i]) / panels;
        const double th = a + (b - a) * 0.5 * (1.0 - std::cos(pi * s));
        const double dth = (b - a) * 0.5 * pi * std::sin(pi * s) * sw[i] / panels;
        thetas.push_back({th, dth});
      }
  }

  std::vector<cplx> rows(thetas.size());
  parallel_for(thetas.size(), [&](std::size_t k) {
    const double th = thetas[k].theta;
    double r0 = 0.0, r1 = opt.r_cap;
    if (R.inside) {
      const auto e = entry_radius(*R.inside, th);
      if (!e) return;
      r0 = *e;
    }
    for (const auto& C : R.excluded)
      if (const auto e = entry_radius(C, th)) r1 = std::min(r1, *e);
    if (r1 <= r0) return;
    const cplx dir = std::polar(1.0, th);
    std::vector<cplx> terms;
    terms.reserve(static_cast<std::size_t>(opt.q * opt.radial_panels));
    const double h = (r1 - r0) / opt.radial_panels;
    for (int p = 0; p < opt.radial_panels; ++p)
      for (int i = 0; i < opt.q; ++i) {
        const double r = r0 + h * (p + rg[i]);
        terms.push_back(h * rw[i] * r * f(r * dir));
      }
    rows[k] = thetas[k].weight * pairwise_sum(terms);
  });
  return pairwise_sum(rows);
}

cplx domain_integral(const std::function<cplx(cplx)>& f, const FundamentalDomain& F, const RegionOptions& opt) {
  cplx s = 0.0;
  for (const auto& R : domain_regions(F)) s += region_integral(f, R, opt);
  return s;
}

FilteredResult filtered_domain_integral(const std::function<cplx(cplx)>& f, const FundamentalDomain& F, int panels_r,
                                        int panels_theta, int q) {
  require(panels_r >= 1 && panels_theta >= 1 && q >= 2, "filtered_domain_integral: bad resolution");
  std::vector<double> g, w;
  gauss_legendre(q, 0.0, 1.0, g, w);
  const double hr = 1.0 / panels_r, ht = 2 * pi / panels_theta;
  auto cell = [&](double r0, double t0, double dr, double dt, bool& mixed) {
    std::vector<cplx> terms;
    int in = 0;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        const double r = r0 + dr * g[i], th = t0 + dt * g[j];
        const cplx z = std::polar(r, th);
        if (!F.contains(z)) continue;
        ++in;
        terms.push_back(dr * dt * w[i] * w[j] * r * f(z));
      }
    mixed = in > 0 && in < q * q;
    return pairwise_sum(terms);
  };
  std::vector<cplx> vals(static_cast<std::size_t>(panels_r * panels_theta));
  std::vector<int> cut(vals.size(), 0);
  parallel_for(vals.size(), [&](std::size_t k) {
    const int ir = static_cast<int>(k) / panels_theta, it = static_cast<int>(k) % panels_theta;
    bool mixed = false;
    const cplx v = cell(ir * hr, it * ht, hr, ht, mixed);
    if (!mixed) {
      vals[k] = v;
      return;
    }
    cut[k] = 1;
    std::vector<cplx> sub;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        bool m2 = false;
        sub.push_back(cell(ir * hr + a * hr / 2, it * ht + b * ht / 2, hr / 2, ht / 2, m2));
      }
    vals[k] = pairwise_sum(sub);
  });
  FilteredResult out;
  out.value = pairwise_sum(vals);
  for (int c : cut) out.cut_cells += c;
  return out;
}

// ---------------------------------------------------------------- 2-forms

cplx two_form_density(const symbols::Jet& f, const symbols::Jet& g) {
  // dz ^ dzbar = -2i dA.
  return -(f.dz * g.dzb - f.dzb * g.dz) / pi;
}

cplx two_form_integral(const symbols::Symbol& f, const symbols::Symbol& g, int radial, int angular) {
  const auto rule = disc_rule(Measure::lebesgue, radial, angular);
  return integrate([&](cplx z) { return two_form_density(f.jet(z), g.jet(z)); }, rule);
}

cplx two_form_integral(const symbols::Symbol& f, const symbols::Symbol& g, const FundamentalDomain& F,
                       const RegionOptions& opt) {
  return domain_integral([&](cplx z) { return two_form_density(f.jet(z), g.jet(z)); }, F, opt);
}

double two_form_abs_integral(const symbols::Symbol& f, const symbols::Symbol& g, const FundamentalDomain& F,
                             const RegionOptions& opt) {
  // |dz ^ dzbar| = 2 dA, so (1/2 pi)|df ^ dg| is |density| dA.
  const cplx s = domain_integral(
      [&](cplx z) { return cplx(std::abs(two_form_density(f.jet(z), g.jet(z))), 0.0); }, F, opt);
  return s.real();
}

cplx boundary_form_integral(const symbols::BoundaryData& f, const symbols::BoundaryData& g) {
  require(f.components.size() == g.components.size(), "boundary_form_integral: component count mismatch");
  Eigen::FFT<double> fft;
  std::vector<cplx> parts;
  for (std::size_t c = 0; c < f.components.size(); ++c) {
    const auto& fc = f.components[c];
    const auto& gc = g.components[c];
    const std::size_t n = fc.values.size();
    require(n == gc.values.size() && fc.theta == gc.theta, "boundary_form_integral: mismatched sample grids");
    require(n >= 4, "boundary_form_integral: too few samples");
    std::vector<cplx> G, dG(n), dg;
    fft.fwd(G, gc.values);
    for (std::size_t k = 0; k < n; ++k) {
      const long kk = k <= n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
      dG[k] = (n % 2 == 0 && k == n / 2) ? cplx(0.0) : I * static_cast<double>(kk) * G[k];
    }
    fft.inv(dg, dG);
    std::vector<cplx> terms(n);
    for (std::size_t j = 0; j < n; ++j) terms[j] = fc.values[j] * dg[j] * (2 * pi / n);
    parts.push_back(pairwise_sum(terms));
  }
  return pairwise_sum(parts) / (2.0 * pi * I);
}

void write_csv(const QuadratureRule& rule, std::ostream& os) {
  os.precision(17);
  os << "re,im,weight\n";
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    os << rule.nodes[i].real() << ',' << rule.nodes[i].imag() << ',' << rule.weights[i] << '\n';
}

}  // namespace eqt::quadrature
