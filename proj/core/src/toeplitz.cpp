#include "eqtoeplitz/toeplitz.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include <unsupported/Eigen/FFT>

#include "eqtoeplitz/parallel.hpp"
#include "eqtoeplitz/quadrature.hpp"

namespace eqt::toeplitz {

using bergman::log_basis_norm_sq;
using symbols::LaurentMap;

cplx laurent_entry(const LaurentMap& f, double t, int m, int n) {
  cplx s = 0.0;
  for (const auto& [jk, c] : f) {
    const auto [j, k] = jk;
    if (m != n + k - j) continue;
    s += c * std::exp(log_basis_norm_sq(n + k, t) - 0.5 * log_basis_norm_sq(n, t) - 0.5 * log_basis_norm_sq(m, t));
  }
  return s;
}

Matrix laurent_toeplitz(const LaurentMap& f, double t, int size) {
  require(size >= 1, "laurent_toeplitz: size >= 1");
  Matrix T = Matrix::Zero(size, size);
  for (const auto& [jk, c] : f) {
    const auto [j, k] = jk;
    for (int n = 0; n < size; ++n) {
      const int m = n + k - j;
      if (m < 0 || m >= size) continue;
      T(m, n) +=
          c * std::exp(log_basis_norm_sq(n + k, t) - 0.5 * log_basis_norm_sq(n, t) - 0.5 * log_basis_norm_sq(m, t));
    }
  }
  return T;
}

Matrix radial_toeplitz(const symbols::RadialProfile& phi, double t, int size) {
  require(size >= 1, "radial_toeplitz: size >= 1");
  if (phi.kind == symbols::RadialProfile::Kind::polynomial) {
    LaurentMap m;
    for (std::size_t j = 0; j < phi.coeffs.size(); ++j) m[{static_cast<int>(j), static_cast<int>(j)}] += phi.coeffs[j];
    return laurent_toeplitz(m, t, size);
  }
  // Composite Gauss-Legendre on [0, u_max]; the bump vanishes to all orders at u_max.
  constexpr int panels = 32, q = 16;
  std::vector<double> g, w;
  quadrature::gauss_legendre(q, 0.0, 1.0, g, w);
  std::vector<double> u, wu;
  std::vector<cplx> val;
  const double h = phi.u_max / panels;
  for (int p = 0; p < panels; ++p)
    for (int i = 0; i < q; ++i) {
      const double x = h * (p + g[i]);
      u.push_back(x);
      wu.push_back(h * w[i] * (t - 1.0) * std::pow(1.0 - x, t - 2.0));
      val.push_back(phi.value(x));
    }
  Matrix T = Matrix::Zero(size, size);
  for (int n = 0; n < size; ++n) {
    const double ln = log_basis_norm_sq(n, t);
    std::vector<cplx> terms(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) terms[i] = wu[i] * val[i] * std::exp(n * std::log(u[i]) - ln);
    T(n, n) = pairwise_sum(terms);
  }
  return T;
}

Matrix quadrature_toeplitz(const Symbol& f, double t, int size, int radial, int angular) {
  require(size >= 1, "quadrature_toeplitz: size >= 1");
  // Floors resolve compactly supported symbols whose features are much finer than the block size.
  if (radial <= 0) radial = std::max(128, 2 * size);
  if (angular <= 0) angular = std::max(512, 4 * size);
  std::vector<double> u, wu;
  quadrature::gauss_jacobi(radial, t - 2.0, u, wu);
  // Fhat(i, k) = (1/K) sum_j f(r_i e^{i theta_j}) e^{-i k theta_j}
  std::vector<std::vector<cplx>> Fhat(radial);
  parallel_for(static_cast<std::size_t>(radial), [&](std::size_t i) {
    const double r = std::sqrt(u[i]);
    std::vector<cplx> vals(angular);
    for (int j = 0; j < angular; ++j) {
      vals[j] = f(std::polar(r, 2.0 * pi * j / angular));
      if (!std::isfinite(vals[j].real()) || !std::isfinite(vals[j].imag()))
        throw std::invalid_argument("toeplitz_matrix: unbounded symbol");
    }
    Eigen::FFT<double> fft;
    fft.fwd(Fhat[i], vals);
    for (auto& v : Fhat[i]) v /= static_cast<double>(angular);
  });
  // a(i, n) = r_i^n / ||z^n||
  Eigen::MatrixXd a(radial, size);
  for (int i = 0; i < radial; ++i)
    for (int n = 0; n < size; ++n) a(i, n) = std::exp(0.5 * (n * std::log(u[i]) - log_basis_norm_sq(n, t)));
  Matrix T(size, size);
  parallel_for(static_cast<std::size_t>(size), [&](std::size_t col) {
    const int n = static_cast<int>(col);
    std::vector<cplx> terms(radial);
    for (int m = 0; m < size; ++m) {
      const int k = ((m - n) % angular + angular) % angular;
      for (int i = 0; i < radial; ++i) terms[i] = (t - 1.0) * wu[i] * a(i, m) * a(i, n) * Fhat[i][k];
      T(m, n) = pairwise_sum(terms);
    }
  });
  return T;
}

Matrix toeplitz_block(const Symbol& f, double t, int size) {
  require(t > 1.0, "toeplitz: t > 1");
  if (const auto m = f.as_laurent()) return laurent_toeplitz(*m, t, size);
  if (const auto r = f.as_radial()) return radial_toeplitz(*r, t, size);
  return quadrature_toeplitz(f, t, size);
}

TruncatedOperator toeplitz_matrix(const Symbol& f, const BasisSpec& spec) {
  spec.validate();
  return {spec, toeplitz_block(f, spec.t, spec.dim())};
}

int default_padding(const Symbol& f, const Symbol& g, int N) {
  if (f.as_laurent() && g.as_laurent()) return f.bandwidth() + g.bandwidth();
  return std::max(1, N / 4);
}

cplx corner_commutator_trace(const Matrix& A, const Matrix& B, int k) {
  require(A.rows() == A.cols() && B.rows() == A.rows() && B.cols() == A.cols(), "corner trace: shape mismatch");
  require(k >= 0 && k <= A.rows(), "corner trace: k exceeds the matrix size");
  std::vector<cplx> terms(k);
  for (int i = 0; i < k; ++i) terms[i] = A.row(i).transpose().cwiseProduct(B.col(i)).sum() - B.row(i).transpose().cwiseProduct(A.col(i)).sum();
  return pairwise_sum(terms);
}

namespace {

int checked_padding(const Symbol& f, const Symbol& g, const BasisSpec& spec, int padding) {
  spec.validate();
  const int d = padding < 0 ? default_padding(f, g, spec.N) : padding;
  if (f.as_laurent() && g.as_laurent() && d < f.bandwidth() + g.bandwidth())
    throw std::invalid_argument("padding " + std::to_string(d) + " below bandwidth(f) + bandwidth(g) = " +
                                std::to_string(f.bandwidth() + g.bandwidth()));
  return d;
}

}  // namespace

cplx commutator_trace(const Symbol& f, const Symbol& g, const BasisSpec& spec, int padding) {
  const int d = checked_padding(f, g, spec, padding);
  const int P = spec.dim() + d;
  const Matrix Tf = toeplitz_block(f, spec.t, P);
  const Matrix Tg = toeplitz_block(g, spec.t, P);
  return corner_commutator_trace(Tf, Tg, spec.dim());
}

cplx semicommutator_trace(const Symbol& f, const Symbol& g, const BasisSpec& spec, int padding) {
  const int d = checked_padding(f, g, spec, padding);
  const int P = spec.dim() + d;
  const Matrix Tf = toeplitz_block(f, spec.t, P);
  const Matrix Tg = toeplitz_block(g, spec.t, P);
  const Matrix Tfg = toeplitz_block(f * g, spec.t, P);
  std::vector<cplx> terms(spec.dim());
  for (int i = 0; i < spec.dim(); ++i) terms[i] = Tfg(i, i) - Tf.row(i).transpose().cwiseProduct(Tg.col(i)).sum();
  return pairwise_sum(terms);
}

Matrix hankel_gram(const LaurentMap& f, const LaurentMap& g, double t, int size) {
  using Mono = std::pair<int, int>;  // zbar^a z^b
  using Comb = std::vector<std::pair<Mono, double>>;
  auto lnu = [&](int n) { return log_basis_norm_sq(n, t); };
  auto off = [&](int a, int b) {
    // (1 - P)(zbar^a z^b); P(zbar^a z^b) = (||z^b||^2/||z^{b-a}||^2) z^{b-a} when b >= a.
    Comb c{{{a, b}, 1.0}};
    if (b >= a) c.push_back({{0, b - a}, -std::exp(lnu(b) - lnu(b - a))});
    return c;
  };
  auto inner = [&](const Comb& x, const Comb& y) {
    double s = 0.0;
    for (const auto& [p, cp] : x)
      for (const auto& [q, cq] : y)
        if (p.second + q.first == p.first + q.second) s += cp * cq * std::exp(lnu(p.second + q.first));
    return s;
  };
  Matrix G = Matrix::Zero(size, size);
  for (int m = 0; m < size; ++m)
    for (int n = 0; n < size; ++n) {
      cplx s = 0.0;
      for (const auto& [jk, c] : g)
        for (const auto& [jk2, dcoef] : f) {
          // g e_n ~ zbar^j z^{k+n}; fbar e_m ~ conj(d) zbar^{k'} z^{j'+m}.
          const double v = inner(off(jk.first, jk.second + n), off(jk2.second, jk2.first + m));
          if (v != 0.0) s += c * dcoef * v;
        }
      G(m, n) = s * std::exp(-0.5 * lnu(n) - 0.5 * lnu(m));
    }
  return G;
}

HankelS2 hankel_s2_norm_sq(const Symbol& f, const BasisSpec& spec, double tol, int padding) {
  spec.validate();
  const int N = spec.N;
  const double t = spec.t;
  HankelS2 out;
  std::vector<double> terms(N + 1);
  const Symbol abs2 = f * f.conj();
  if (const auto lf = f.as_laurent()) {
    const auto la = abs2.as_laurent();
    const auto lc = f.conj().as_laurent();
    auto column_sq = [&](const LaurentMap& m, int n) {
      std::set<int> rows;
      for (const auto& [jk, c] : m)
        if (n + jk.second - jk.first >= 0) rows.insert(n + jk.second - jk.first);
      double s = 0.0;
      for (int r : rows) s += std::norm(laurent_entry(m, t, r, n));
      return s;
    };
    for (int n = 0; n <= N; ++n) {
      const double d = laurent_entry(*la, t, n, n).real();
      terms[n] = (d - column_sq(*lf, n)) + (d - column_sq(*lc, n));
    }
  } else {
    const int d = padding < 0 ? std::max(1, N / 4) : padding;
    const int P = N + 1 + d;
    const Matrix Tf = toeplitz_block(f, t, P);
    const Matrix Ta = toeplitz_block(abs2, t, P);
    for (int n = 0; n <= N; ++n)
      terms[n] = 2.0 * Ta(n, n).real() - Tf.col(n).squaredNorm() - Tf.row(n).squaredNorm();
  }
  out.partial.resize(N + 1);
  double s = 0.0;
  for (int n = 0; n <= N; ++n) out.partial[n] = (s += terms[n]);
  out.raw = out.partial[N];
  out.half = out.partial[N / 2];
  out.value = 2.0 * out.raw - out.half;
  out.last_term = std::abs(terms[N]);
  if (out.last_term > tol)
    out.warnings.push_back("hankel_s2_norm_sq: last term " + std::to_string(out.last_term) + " exceeds tolerance");
  return out;
}

// ---------------------------------------------------------------- Carey-Pincus

NCPoly parse_ncpoly(const std::string& text) {
  NCPoly P;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  while (i < text.size()) {
    double sign = 1.0;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1.0 : 1.0;
      ++i;
      skip();
    }
    double coeff = 1.0;
    if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
      std::size_t used = 0;
      coeff = std::stod(text.substr(i), &used);
      i += used;
      skip();
      if (i < text.size() && text[i] == '*') ++i;
      skip();
    }
    std::string word;
    while (i < text.size() && (text[i] == 'x' || text[i] == 'y')) word += text[i++];
    skip();
    if (i < text.size() && text[i] != '+' && text[i] != '-')
      throw std::invalid_argument("parse_ncpoly: unexpected '" + std::string(1, text[i]) + "' in \"" + text + "\"");
    P.emplace_back(word, sign * coeff);
  }
  require(!P.empty(), "parse_ncpoly: empty polynomial");
  return P;
}

int degree(const NCPoly& P) {
  int d = 0;
  for (const auto& [w, c] : P) d = std::max(d, static_cast<int>(w.size()));
  return d;
}

CareyPincus carey_pincus_check(const NCPoly& P, const NCPoly& Q, const Symbol& f, const BasisSpec& spec, int padding,
                               int samples) {
  spec.validate();
  const auto lf = f.as_laurent();
  const int need = lf ? (degree(P) + degree(Q)) * f.bandwidth() : 0;
  const int d = padding < 0 ? (lf ? need : std::max(1, spec.N / 4)) : padding;
  if (d < need)
    throw std::invalid_argument("carey_pincus_check: padding " + std::to_string(d) + " below degree x bandwidth = " +
                                std::to_string(need));
  const int size = spec.dim() + d;
  const Matrix T = toeplitz_block(f, spec.t, size);
  const Matrix Ts = T.adjoint();
  auto eval = [&](const NCPoly& poly) {
    Matrix S = Matrix::Zero(size, size);
    for (const auto& [w, c] : poly) {
      Matrix W = Matrix::Identity(size, size);
      for (char l : w) W = W * (l == 'x' ? T : Ts);
      S += c * W;
    }
    return S;
  };
  auto scalar = [](const NCPoly& poly, cplx x) {
    cplx s = 0.0;
    for (const auto& [w, c] : poly) {
      cplx v = c;
      for (char l : w) v *= l == 'x' ? x : std::conj(x);
      s += v;
    }
    return s;
  };
  CareyPincus out;
  out.lhs = corner_commutator_trace(eval(P), eval(Q), spec.dim());
  const auto pd = symbols::loop_data([&](double th) { return scalar(P, f.boundary_value(th)); }, samples);
  const auto qd = symbols::loop_data([&](double th) { return scalar(Q, f.boundary_value(th)); }, samples);
  out.rhs = quadrature::boundary_form_integral(pd, qd);
  return out;
}

}  // namespace eqt::toeplitz
