#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eqtoeplitz/bergman.hpp"
#include "eqtoeplitz/common.hpp"
#include "eqtoeplitz/symbols.hpp"

namespace eqt::toeplitz {

using bergman::BasisSpec;
using bergman::TruncatedOperator;
using symbols::Symbol;

/// <zbar^j z^k e_n, e_m> summed over the Laurent terms.
cplx laurent_entry(const symbols::LaurentMap& f, double t, int m, int n);

/// Leading size x size block of T_f (entries do not depend on the truncation).
Matrix laurent_toeplitz(const symbols::LaurentMap& f, double t, int size);
/// Diagonal entries (t-1) int phi(u) u^n (1-u)^{t-2} du / ||z^n||^2.
Matrix radial_toeplitz(const symbols::RadialProfile& phi, double t, int size);
/// Disc quadrature: Gauss-Jacobi in u (max(128, 2 size) nodes by default), FFT in angle (max(512, 4 size)).
Matrix quadrature_toeplitz(const Symbol& f, double t, int size, int radial = 0, int angular = 0);

/// Picks the closed form when one exists, quadrature otherwise.
Matrix toeplitz_block(const Symbol& f, double t, int size);
TruncatedOperator toeplitz_matrix(const Symbol& f, const BasisSpec& spec);

/// Laurent symbols: bandwidth(f) + bandwidth(g); otherwise N/4.
int default_padding(const Symbol& f, const Symbol& g, int N);

/// Trace of the leading k x k block of AB - BA without forming the products.
cplx corner_commutator_trace(const Matrix& A, const Matrix& B, int k);

cplx commutator_trace(const Symbol& f, const Symbol& g, const BasisSpec& spec, int padding = -1);
/// Corner trace of T_{fg} - T_f T_g.
cplx semicommutator_trace(const Symbol& f, const Symbol& g, const BasisSpec& spec, int padding = -1);

/// H_{fbar}^* H_g for Laurent f, g, from the moments of (1-P)(zbar^a z^b); never touches T_f.
Matrix hankel_gram(const symbols::LaurentMap& f, const symbols::LaurentMap& g, double t, int size);

struct HankelS2 {
  double value = 0.0;      // Richardson estimate 2 S(N) - S(N/2)
  double raw = 0.0;        // S(N)
  double half = 0.0;       // S(N/2)
  double last_term = 0.0;  // tail indicator
  std::vector<double> partial;  // S(0..N)
  std::vector<std::string> warnings;
};

/// Sum over n <= N of ||H_f e_n||^2 + ||H_fbar e_n||^2, computed from ||f e_n||^2 - ||P f e_n||^2.
HankelS2 hankel_s2_norm_sq(const Symbol& f, const BasisSpec& spec, double tol = 1e-3, int padding = -1);

/// Noncommutative polynomial in 'x' = T_f and 'y' = T_f^*; each word is read left to right as a matrix product.
using NCPoly = std::vector<std::pair<std::string, cplx>>;
NCPoly parse_ncpoly(const std::string& text);
int degree(const NCPoly& P);

struct CareyPincus {
  cplx lhs{0.0};
  cplx rhs{0.0};
};

/// lhs = corner trace of [P(T_f^*, T_f), Q(T_f^*, T_f)], rhs = (1/2 pi i) loop integral of P(fbar, f) dQ(fbar, f).
CareyPincus carey_pincus_check(const NCPoly& P, const NCPoly& Q, const Symbol& f, const BasisSpec& spec,
                               int padding = -1, int samples = 2048);

}  // namespace eqt::toeplitz
