#include "eqtoeplitz/equivariant.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "eqtoeplitz/parallel.hpp"
#include "eqtoeplitz/quadrature.hpp"
#include "eqtoeplitz/toeplitz.hpp"

namespace eqt::equivariant {

TruncatedOperator gamma_average(const TruncatedOperator& A, const std::vector<mobius::MobiusTransform>& generators,
                                int L, const BasisSpec& out, const AverageOptions& opt,
                                std::vector<std::string>* warnings) {
  require(L >= 0, "gamma_average: L >= 0");
  out.validate();
  const int Pa = static_cast<int>(A.entries.rows());
  require(A.entries.cols() == Pa, "gamma_average: A must be square");
  const int k = out.dim();
  require(k <= Pa, "gamma_average: output block larger than the input");
  const double t = A.spec.t;
  int Pw = opt.work;
  if (Pw <= 0) {
    // One letter moves the leading k modes about as far as the boost padding of its translation length.
    double smax = 0.0;
    for (const auto& g : generators) smax = std::max(smax, 2.0 * std::acosh(std::max(1.0, std::abs(g.a))));
    Pw = std::max(Pa, bergman::boost_padding(smax, t, k));
  }
  require(Pw >= Pa, "gamma_average: work size below the input size");

  const auto elements = mobius::enumerate_group(generators, L);
  // Letter blocks pi_t(g_j^{+-1}) restricted to Pw x Pw.
  std::map<std::pair<int, int>, Matrix> letter;
  auto block = [&](const mobius::Letter& l) -> const Matrix& {
    const auto key = std::make_pair(l.index, l.exponent);
    auto it = letter.find(key);
    if (it == letter.end()) {
      const auto& g = generators[l.index];
      it = letter.emplace(key, bergman::representation_block(l.exponent > 0 ? g : g.inverse(), t, Pw, Pw)).first;
    }
    return it->second;
  };

  std::map<std::string, Matrix> memo;  // word -> pi_t(word) restricted to Pw x Pa
  memo.emplace(mobius::GroupWord{}.str(), Matrix::Identity(Pw, Pa));
  std::vector<Matrix> by_length(L + 1, Matrix::Zero(k, k));
  for (const auto& el : elements) {
    const auto& letters = el.word.letters;
    const std::string key = el.word.str();
    if (!memo.count(key)) {
      mobius::GroupWord suffix;
      suffix.letters.assign(letters.begin() + 1, letters.end());
      const auto sit = memo.find(suffix.str());
      if (sit == memo.end()) throw std::logic_error("gamma_average: suffix missing from enumeration");
      memo.emplace(key, block(letters.front()) * sit->second);
    }
    const Matrix U = memo.at(key).topRows(k);
    by_length[el.word.length()] += U * A.entries * U.adjoint();
  }
  TruncatedOperator E{out, Matrix::Zero(k, k)};
  for (const auto& M : by_length) E.entries += M;
  if (warnings && L >= 1) {
    const double last = by_length[L].norm(), prev = by_length[L - 1].norm();
    if (last > prev)
      warnings->push_back("gamma_average: increment at L = " + std::to_string(L) + " (" + std::to_string(last) +
                          ") exceeds the one at L - 1 (" + std::to_string(prev) + "); N too small for the orbit spread");
  }
  return E;
}

double tau_density_integral(const Symbol& f0, double t) {
  const auto supp = f0.support();
  if (!supp || !(std::abs(supp->center) + supp->radius < 1.0))
    throw std::invalid_argument("tau: f0 must be compactly supported in the open disc");
  if (supp->radius == 0.0) return 0.0;
  constexpr int panels = 16, q = 16, K = 256;
  std::vector<double> g, w;
  quadrature::gauss_legendre(q, 0.0, 1.0, g, w);
  const double h = supp->radius / panels;
  std::vector<cplx> terms;
  for (int p = 0; p < panels; ++p)
    for (int i = 0; i < q; ++i) {
      const double rho = h * (p + g[i]);
      for (int j = 0; j < K; ++j) {
        const cplx z = supp->center + std::polar(rho, 2 * pi * j / K);
        terms.push_back(h * w[i] * rho * (2 * pi / K) * f0(z) / std::pow(1.0 - std::norm(z), 2));
      }
    }
  return ((t - 1.0) / pi * pairwise_sum(terms)).real();
}

EquivariantTraceEstimate tau_toeplitz(const Symbol& f0, const FundamentalDomain& F, const BasisSpec& spec) {
  spec.validate();
  if (!(spec.t > 2.0)) throw std::invalid_argument("tau_toeplitz: t > 2");
  EquivariantTraceEstimate est;
  est.N = spec.N;
  if (f0.is_zero()) return est;
  const auto supp = f0.support();
  if (!supp || !(std::abs(supp->center) + supp->radius < 1.0))
    throw std::invalid_argument("tau_toeplitz: support touches the unit circle");
  if (!F.contains(supp->center)) throw std::invalid_argument("tau_toeplitz: support not inside F");
  for (const auto& C : F.circles)
    if (std::abs(supp->center - C.center) < C.radius + supp->radius)
      throw std::invalid_argument("tau_toeplitz: support meets a side of F");
  const Matrix T = toeplitz::toeplitz_block(f0, spec.t, spec.dim());
  std::vector<cplx> diag(spec.dim());
  for (int n = 0; n < spec.dim(); ++n) diag[n] = T(n, n);
  est.value = pairwise_sum(diag);
  est.tail_N = std::abs(diag.back());
  est.rows.push_back({spec.N, 0, est.value});
  const double ref = tau_density_integral(f0, spec.t);
  est.oracle = ref;
  est.scale = std::abs(ref);
  return est;
}

void check_cut(const Symbol& seed, const FundamentalDomain& F, double eps) {
  for (std::size_t a = 0; a < F.arcs.size(); ++a) {
    for (double end : {F.arcs[a].start, F.arcs[a].end}) {
      for (int i = -4; i <= 4; ++i) {
        const double th = end + eps * i / 4.0;
        bool bad = std::abs(seed.boundary_value(th)) > 0.0;
        for (double r : {0.99, 0.999}) {
          try {
            bad = bad || std::abs(seed(std::polar(r, th))) > 0.0;
          } catch (const HorizonExceeded&) {
            bad = true;
          }
        }
        if (bad)
          throw std::invalid_argument("no valid cut: seed does not vanish near the cut point at angle " +
                                      std::to_string(end));
      }
    }
  }
}

EquivariantTraceEstimate tau_commutator(const std::vector<Symbol>& f_seeds, const std::vector<Symbol>& g_seeds,
                                        const std::shared_ptr<const FundamentalDomain>& F, double t,
                                        const CommutatorGrid& grid) {
  require(F != nullptr, "tau_commutator: domain required");
  if (!(t > 5.0)) throw std::invalid_argument("tau_commutator: t > 5 required");
  require(!grid.Ns.empty() && !grid.Ls.empty(), "tau_commutator: empty grid");
  for (const auto& s : f_seeds) check_cut(s, *F);
  for (const auto& s : g_seeds) check_cut(s, *F);
  // The estimate is bilinear in the seeds, so the (k, s) sum collapses onto the summed seeds.
  Symbol f0, g0;
  for (const auto& s : f_seeds) f0 = f0 + s;
  for (const auto& s : g_seeds) g0 = g0 + s;

  auto pad = [&](int N) { return grid.padding < 0 ? std::max(1, N / 4) : grid.padding; };
  int Pmax = 0;
  for (int N : grid.Ns) {
    require(N >= 1, "tau_commutator: N >= 1");
    Pmax = std::max(Pmax, N + 1 + pad(N));
  }
  const Matrix Tf0 = toeplitz::toeplitz_block(f0, t, Pmax);
  const Matrix Tg0 = toeplitz::toeplitz_block(g0, t, Pmax);

  EquivariantTraceEstimate est;
  for (int L : grid.Ls) {
    require(L >= 0, "tau_commutator: L >= 0");
    const Matrix TfL = toeplitz::toeplitz_block(Symbol::orbit_sum(f0, F, L), t, Pmax);
    const Matrix TgL = toeplitz::toeplitz_block(Symbol::orbit_sum(g0, F, L), t, Pmax);
    for (int N : grid.Ns) {
      const int P = N + 1 + pad(N);
      const cplx a = toeplitz::corner_commutator_trace(Tf0.topLeftCorner(P, P), TgL.topLeftCorner(P, P), N + 1);
      const cplx b = toeplitz::corner_commutator_trace(Tg0.topLeftCorner(P, P), TfL.topLeftCorner(P, P), N + 1);
      est.rows.push_back({N, L, 0.5 * (a - b)});
    }
  }
  auto at = [&](int N, int L) {
    for (const auto& r : est.rows)
      if (r.N == N && r.L == L) return r.value;
    return cplx(0.0);
  };
  const int Nl = grid.Ns.back(), Ll = grid.Ls.back();
  est.N = Nl;
  est.L = Ll;
  est.padding = pad(Nl);
  est.value = at(Nl, Ll);
  if (grid.Ns.size() >= 2) est.tail_N = std::abs(est.value - at(grid.Ns[grid.Ns.size() - 2], Ll));
  if (grid.Ls.size() >= 2) est.tail_L = std::abs(est.value - at(Nl, grid.Ls[grid.Ls.size() - 2]));
  if (grid.oracle) {
    const Symbol f = Symbol::orbit_sum(f0, F, -1), g = Symbol::orbit_sum(g0, F, -1);
    est.oracle = quadrature::two_form_integral(f, g, *F);
    est.scale = quadrature::two_form_abs_integral(f, g, *F);
  }
  return est;
}

GammaIndex gamma_index(const Symbol& f, const FundamentalDomain& F, int samples, double tol) {
  const auto bd = symbols::boundary_restriction(f, F, samples);
  GammaIndex out;
  out.min_abs = INFINITY;
  for (const auto& c : bd.components)
    for (const auto& v : c.values) out.min_abs = std::min(out.min_abs, std::abs(v));
  if (!(out.min_abs > tol)) throw NotInvertible("gamma_index: symbol not invertible on the boundary");
  out.windings = symbols::winding_numbers(bd, tol);
  for (int w : out.windings) out.index += w;
  out.log_integral = quadrature::boundary_form_integral(symbols::map_values(bd, [](cplx v) { return 1.0 / v; }), bd);
  return out;
}

EquivariantTraceEstimate tau_index_estimate(const symbols::CollarSpec& spec,
                                            const std::shared_ptr<const FundamentalDomain>& F, double t,
                                            const CommutatorGrid& grid) {
  auto rspec = spec;
  for (auto& p : rspec.pieces) p.reciprocal = !p.reciprocal;
  const Symbol f0 = Symbol::collar_seed(F, spec);
  const Symbol r0 = Symbol::collar_seed(F, rspec);
  auto est = tau_commutator({f0}, {r0}, F, t, grid);
  est.warnings.push_back("EXPERIMENTAL: tau([T_f, T_R]) estimate; compared against -gamma_index, not asserted");
  return est;
}

int homotopy_failures(const Symbol& f, const FundamentalDomain& F, int trials, std::uint64_t seed, int samples) {
  const auto bd = symbols::boundary_restriction(f, F, samples);
  const auto base = symbols::winding_numbers(bd);
  double m = INFINITY;
  for (const auto& c : bd.components)
    for (const auto& v : c.values) m = std::min(m, std::abs(v));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.0, 0.5 * m * (1.0 - 1e-9)), ang(0.0, 2 * pi);
  int failures = 0;
  for (int k = 0; k < trials; ++k) {
    auto p = bd;
    for (auto& c : p.components)
      for (auto& v : c.values) {
        const double r = mag(rng);
        v += std::polar(r, ang(rng));
      }
    try {
      if (symbols::winding_numbers(p) != base) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  return failures;
}

std::vector<Witness> extension_probe(const std::shared_ptr<const FundamentalDomain>& F, int samples) {
  require(F != nullptr, "extension_probe: domain required");
  std::vector<Witness> out;
  for (const auto& comp : F->components) {
    symbols::CollarSpec cs;
    symbols::CollarPiece piece;
    piece.arc = comp.arcs.front();
    piece.kind = symbols::CollarPiece::Kind::winding;
    piece.winding = 1;
    cs.pieces.push_back(piece);
    const Symbol f = Symbol::collar_seed(F, cs).shifted(1.0);
    const auto gi = gamma_index(f, *F, samples);
    out.push_back({comp.id, piece.arc, gi.windings, gi.index});
  }
  return out;
}

}  // namespace eqt::equivariant
