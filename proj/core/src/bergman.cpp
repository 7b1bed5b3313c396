#include "eqtoeplitz/bergman.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <lapacke.h>
#include <unsupported/Eigen/FFT>

namespace eqt::bergman {

void BasisSpec::validate() const {
  if (!(t > 1.0)) throw std::invalid_argument("BasisSpec: t must exceed 1");
  if (N < 0) throw std::invalid_argument("BasisSpec: N must be nonnegative");
}

TruncatedOperator TruncatedOperator::leading(int Nprime) const {
  require(Nprime >= 0 && Nprime <= spec.N, "leading: block larger than operator");
  return {{spec.t, Nprime}, entries.topLeftCorner(Nprime + 1, Nprime + 1)};
}

namespace {

// ||z^n||^2 by the recurrence ||z^{n+1}||^2 = ||z^n||^2 (n+1)/(n+t), one table per thread and weight.
const std::vector<double>& norm_table(int n, double t) {
  thread_local double table_t = -1.0;
  thread_local std::vector<double> v;
  if (table_t != t) {
    table_t = t;
    v.assign(1, 1.0);
  }
  while (static_cast<int>(v.size()) <= n) {
    const double k = static_cast<double>(v.size() - 1);
    v.push_back(v.back() * ((k + 1.0) / (k + t)));
  }
  return v;
}

void check_norm_args(int n, double t) {
  if (!(t > 1.0)) throw std::invalid_argument("basis_norm: t must exceed 1");
  require(n >= 0, "basis_norm: n >= 0");
}

}  // namespace

double log_basis_norm_sq(int n, double t) {
  check_norm_args(n, t);
  const double v = norm_table(n, t)[n];
  if (v > 1e-290) return std::log(v);
  return std::lgamma(n + 1.0) + std::lgamma(t) - std::lgamma(n + t);
}

double basis_norm_sq(int n, double t) {
  check_norm_args(n, t);
  const double v = norm_table(n, t)[n];
  return v > 1e-290 ? v : std::exp(log_basis_norm_sq(n, t));
}
double basis_norm(int n, double t) { return std::exp(0.5 * log_basis_norm_sq(n, t)); }

cplx kernel(cplx z, cplx w, double t) {
  if (!(std::abs(z) < 1.0 && std::abs(w) < 1.0)) throw DomainError("kernel: points must lie in the open disc");
  return std::pow(1.0 - z * std::conj(w), -t);
}

cplx basis_function(int n, cplx z, double t) {
  if (n == 0) return 1.0;
  return std::exp(static_cast<double>(n) * std::log(z) - 0.5 * log_basis_norm_sq(n, t));
}

namespace {

// Spectral data of the symmetric tridiagonal S with off-diagonal beta_n = sqrt((n+1)(n+t))/2.
struct BoostSpectrum {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd Q;
};

std::shared_ptr<const BoostSpectrum> boost_spectrum(double t, int size) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::shared_ptr<const BoostSpectrum>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(t, size);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  // MRRR (LAPACK dstemr) is O(size^2); Eigen's tridiagonal QR is O(size^3) and dominates at size > 1000.
  std::vector<double> diag(size, 0.0), off(size, 0.0);
  for (int n = 0; n + 1 < size; ++n) off[n] = 0.5 * std::sqrt((n + 1.0) * (n + t));
  Eigen::VectorXd lambda(size);
  Eigen::MatrixXd Q(size, size);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(size));
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  const lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', size, diag.data(), off.data(), 0.0, 0.0, 0, 0,
                                         &found, lambda.data(), Q.data(), size, size, isuppz.data(), &tryrac);
  if (info != 0 || found != size)
    throw std::runtime_error("boost spectrum: dstemr failed (info " + std::to_string(info) + ")");
  auto spec = std::make_shared<BoostSpectrum>(BoostSpectrum{std::move(lambda), std::move(Q)});
  if (cache.size() > 16) cache.clear();
  cache.emplace(key, spec);
  return spec;
}

cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace

int boost_padding(double s, double t, int k) {
  if (s < 1e-14) return k;
  // Calibrated against a 4000-mode reference: the boost spreads degree k to roughly (k + 2t) e^{s/2}.
  const double need = k + 1.6 * (k + 2.0 * t) * std::exp(s / 2) + 64.0;
  return ((static_cast<int>(std::ceil(need)) + 63) / 64) * 64;
}

Matrix representation_block(const mobius::MobiusTransform& g, double t, int rows, int cols) {
  require(t > 1.0, "representation: t must exceed 1");
  require(rows >= 1 && cols >= 1, "representation: empty block");
  // pi_t(g) = V_k with k = g^{-1} = Rot(phi1) T_s Rot(phi2); V_k = V_Rot(phi2) V_Ts V_Rot(phi1).
  const auto k = g.inverse().renormalized();
  const double ca = std::abs(k.a);
  const double s = 2.0 * std::acosh(std::max(1.0, ca));
  const double alpha = std::arg(k.a);
  const double beta = std::abs(k.b) > 0 ? std::arg(k.b) : 0.0;
  const double phi1 = alpha + beta, phi2 = alpha - beta;

  Matrix V(rows, cols);
  if (s < 1e-14) {
    V.setZero();
  } else {
    const int size = boost_padding(s, t, std::max(rows, cols));
    if (size > 12000)
      throw std::runtime_error("representation: translation length too large for a direct boost; compose words instead");
    const auto spec = boost_spectrum(t, size);
    const Eigen::VectorXcd ph = (I * s * spec->lambda.cast<cplx>()).array().exp();
    const Matrix left = spec->Q.topRows(rows).cast<cplx>() * ph.asDiagonal();
    const Matrix E = left * spec->Q.topRows(cols).transpose().cast<cplx>();
    for (int m = 0; m < rows; ++m)
      for (int n = 0; n < cols; ++n) V(m, n) = ipow(m - n) * E(m, n);
  }
  const int diag = std::min(rows, cols);
  if (s < 1e-14)
    for (int n = 0; n < diag; ++n) V(n, n) = 1.0;
  for (int m = 0; m < rows; ++m)
    for (int n = 0; n < cols; ++n) V(m, n) *= std::polar(1.0, phi2 * m + phi1 * n);
  // Phase pin: entry (0,0) equals (k'(0))^{t/2} on the principal branch.
  const cplx kp0 = 1.0 / (std::conj(k.a) * std::conj(k.a));
  const cplx target = std::exp(0.5 * t * std::log(kp0));
  // Before pinning, V(0,0) = (V_Ts)(0,0) = cosh(s/2)^{-t} is real and positive.
  V *= target / std::abs(target);
  return V;
}

TruncatedOperator representation_matrix(const mobius::MobiusTransform& g, const BasisSpec& spec,
                                        std::vector<std::string>* warnings) {
  spec.validate();
  TruncatedOperator U{spec, representation_block(g, spec.t, spec.dim(), spec.dim())};
  if (warnings) {
    const int k = std::max(1, spec.dim() / 4);
    const double d = unitarity_defect(U.entries, k);
    if (d > 1e-6)
      warnings->push_back("representation_matrix: unitarity defect " + std::to_string(d) + " on leading " +
                          std::to_string(k) + "x" + std::to_string(k) + " block");
  }
  return U;
}

TruncatedOperator representation_matrix_contour(const mobius::MobiusTransform& g, const BasisSpec& spec, double r) {
  spec.validate();
  if (!(r > 0 && r < 1)) throw std::invalid_argument("contour radius must lie in (0, 1)");
  const int P = spec.dim();
  const int M = 4 * P;
  const double t = spec.t;
  const auto k = g.inverse().renormalized();
  const cplx ca = std::conj(k.a), cb = std::conj(k.b);
  // (k')^{t/2} = conj(a)^{-t} (1 + (conj b / conj a) z)^{-t}; the base stays in the right half-plane.
  const cplx kp0 = 1.0 / (ca * ca);
  const cplx lead = std::exp(0.5 * t * std::log(kp0));
  Eigen::FFT<double> fft;
  std::vector<cplx> samples(M), coeffs;
  Matrix U(P, P);
  std::vector<cplx> zs(M), fac(M), kz(M);
  for (int j = 0; j < M; ++j) {
    zs[j] = std::polar(r, 2 * pi * j / M);
    fac[j] = lead * std::exp(-t * std::log(1.0 + (cb / ca) * zs[j]));
    kz[j] = mobius::apply(k, zs[j]);
  }
  for (int n = 0; n < P; ++n) {
    for (int j = 0; j < M; ++j) samples[j] = basis_function(n, kz[j], t) * fac[j];
    fft.fwd(coeffs, samples);
    for (int m = 0; m < P; ++m)
      U(m, n) = coeffs[m] / static_cast<double>(M) * std::exp(-m * std::log(r) + 0.5 * log_basis_norm_sq(m, t));
  }
  return {spec, U};
}

double unitarity_defect(const Matrix& U, int k) {
  require(k <= U.cols(), "unitarity_defect: block too large");
  const Matrix G = U.leftCols(k).adjoint() * U.leftCols(k);
  return (G - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
}

TruncatedOperator dbar_inverse(const BasisSpec& spec) {
  spec.validate();
  require(spec.N >= 1, "dbar_inverse: N >= 1");
  Matrix D = Matrix::Zero(spec.dim(), spec.dim());
  for (int n = 0; n < spec.N; ++n) D(n + 1, n) = 1.0 / std::sqrt((n + 1.0) * (n + spec.t));
  return {spec, D};
}

TruncatedOperator derivative_matrix(const BasisSpec& spec) {
  spec.validate();
  Matrix D = Matrix::Zero(spec.dim(), spec.dim());
  for (int n = 0; n < spec.N; ++n) D(n, n + 1) = std::sqrt((n + 1.0) * (n + spec.t));
  return {spec, D};
}

cplx corner_trace(const Matrix& A, int k) {
  if (k > A.rows() || k > A.cols() || k < 0) throw std::invalid_argument("corner_trace: k exceeds matrix size");
  cplx s = 0.0;
  for (int i = 0; i < k; ++i) s += A(i, i);
  return s;
}

cplx corner_trace(const TruncatedOperator& A, int k) { return corner_trace(A.entries, k); }

void write_csv(const TruncatedOperator& A, std::ostream& os) {
  os.precision(17);
  for (Eigen::Index m = 0; m < A.entries.rows(); ++m) {
    for (Eigen::Index n = 0; n < A.entries.cols(); ++n) {
      if (n) os << ',';
      os << A.entries(m, n).real() << ',' << A.entries(m, n).imag();
    }
    os << '\n';
  }
}

}  // namespace eqt::bergman
