#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eqtoeplitz/common.hpp"
#include "eqtoeplitz/mobius.hpp"

namespace eqt::bergman {

/// Weight t > 1 and truncation degree N: operators act on span{e_0..e_N}.
struct BasisSpec {
  double t = 2.0;
  int N = 0;

  int dim() const { return N + 1; }
  void validate() const;
};

/// Matrix of an operator in the orthonormal basis e_n = z^n/||z^n||; entry (m,n) = <A e_n, e_m>.
struct TruncatedOperator {
  BasisSpec spec;
  Matrix entries;

  TruncatedOperator adjoint() const { return {spec, entries.adjoint()}; }
  /// Leading (N'+1)x(N'+1) compression.
  TruncatedOperator leading(int Nprime) const;
};

double log_basis_norm_sq(int n, double t);
/// ||z^n||^2 = n! Gamma(t) / Gamma(n + t).
double basis_norm_sq(int n, double t);
double basis_norm(int n, double t);

cplx kernel(cplx z, cplx w, double t);
/// e_n(z) = z^n / ||z^n||.
cplx basis_function(int n, cplx z, double t);

/// pi_t(g) = V_{g^{-1}} where (V_k h)(z) = h(k(z)) k'(z)^{t/2}; principal-branch phase pinned by k'(0).
/// Warnings about the unitarity defect on the leading block are appended when a sink is given.
TruncatedOperator representation_matrix(const mobius::MobiusTransform& g, const BasisSpec& spec,
                                        std::vector<std::string>* warnings = nullptr);

/// Rows x cols block of pi_t(g) without the phase pin; exact up to truncation of the padded generator.
Matrix representation_block(const mobius::MobiusTransform& g, double t, int rows, int cols);

/// Contour-quadrature route (radius r, 4(N+1) nodes). Kept as an independent check on low rows.
TruncatedOperator representation_matrix_contour(const mobius::MobiusTransform& g, const BasisSpec& spec,
                                                double r = 0.75);

/// Padded size needed so that exp(sX) is exact to double precision on a block of size k.
int boost_padding(double s, double t, int k);

double unitarity_defect(const Matrix& U, int k);

TruncatedOperator dbar_inverse(const BasisSpec& spec);
/// Forward derivative z^{n+1} -> (n+1) z^n in the orthonormal basis.
TruncatedOperator derivative_matrix(const BasisSpec& spec);

cplx corner_trace(const Matrix& A, int k);
cplx corner_trace(const TruncatedOperator& A, int k);

/// Row-major "re,im" pairs, one matrix row per line.
void write_csv(const TruncatedOperator& A, std::ostream& os);

}  // namespace eqt::bergman
