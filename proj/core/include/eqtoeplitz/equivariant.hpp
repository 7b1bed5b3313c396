#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eqtoeplitz/bergman.hpp"
#include "eqtoeplitz/domain.hpp"
#include "eqtoeplitz/symbols.hpp"

namespace eqt::equivariant {

using bergman::BasisSpec;
using bergman::TruncatedOperator;
using symbols::Symbol;

struct EstimateRow {
  int N = 0;
  int L = 0;
  cplx value{0.0};
};

struct EquivariantTraceEstimate {
  cplx value{0.0};
  int N = 0;
  int L = 0;
  int padding = 0;
  double tail_N = 0.0;  // |value(N_max) - value(N_prev)| at L_max
  double tail_L = 0.0;  // |value(L_max) - value(L_prev)| at N_max
  std::vector<EstimateRow> rows;
  cplx oracle{0.0};     // quadrature comparator
  double scale = 0.0;   // natural magnitude of the comparator integrand
  std::vector<std::string> warnings;
};

struct AverageOptions {
  int work = 0;  // rows/cols kept in intermediate word products; 0 picks the boost padding of the longest generator
};

/// E_L(A) = sum over |gamma| <= L of pi_t(gamma) A pi_t(gamma)^*, leading out.dim() block.
/// Each pi_t(gamma) is a product of per-letter blocks, memoized by word suffix.
TruncatedOperator gamma_average(const TruncatedOperator& A, const std::vector<mobius::MobiusTransform>& generators,
                                int L, const BasisSpec& out, const AverageOptions& opt = {},
                                std::vector<std::string>* warnings = nullptr);

/// ((t-1)/pi) int f0 dA / (1-|z|^2)^2 over the support disc of f0.
double tau_density_integral(const Symbol& f0, double t);

/// Tr(T_{f0}) over the N+1 modes; oracle is tau_density_integral.
EquivariantTraceEstimate tau_toeplitz(const Symbol& f0, const FundamentalDomain& F, const BasisSpec& spec);

struct CommutatorGrid {
  std::vector<int> Ns{40, 80, 120};
  std::vector<int> Ls{0, 1, 2, 3};
  int padding = -1;     // -1: N/4
  bool oracle = true;   // compute (1/2 pi i) int_F df ^ dg and its scale
};

/// sum over (k, s) of (1/2) corner trace([T_{f_k}, T_{g_s^(L)}] - [T_{g_s}, T_{f_k^(L)}]) where f_k, g_s are
/// seeds vanishing near the cut points of F and ^(L) is the orbit sum capped at word length L.
EquivariantTraceEstimate tau_commutator(const std::vector<Symbol>& f_seeds, const std::vector<Symbol>& g_seeds,
                                        const std::shared_ptr<const FundamentalDomain>& F, double t,
                                        const CommutatorGrid& grid = {});

/// Throws std::invalid_argument("no valid cut ...") unless the seed vanishes on a neighbourhood of every cut point.
void check_cut(const Symbol& seed, const FundamentalDomain& F, double eps = 1e-3);

struct GammaIndex {
  int index = 0;
  std::vector<int> windings;   // per boundary component
  cplx log_integral{0.0};      // (1/2 pi i) int_{dM} f^{-1} df
  double min_abs = 0.0;
  std::optional<EquivariantTraceEstimate> experimental;  // tau([T_f, T_R]); reported, not asserted
};

/// Sum of winding numbers of f over the components of the quotient boundary.
GammaIndex gamma_index(const Symbol& f, const FundamentalDomain& F, int samples = 4096, double tol = 1e-10);

/// tau([T_f, T_R]) for f = 1 + collar(spec) and R = 1 + collar(spec with reciprocal profiles). EXPERIMENTAL.
EquivariantTraceEstimate tau_index_estimate(const symbols::CollarSpec& spec,
                                            const std::shared_ptr<const FundamentalDomain>& F, double t,
                                            const CommutatorGrid& grid);

/// Homotopy check: perturbs the boundary samples of f by random fields below min|f|/2.
/// Returns the number of trials whose winding numbers changed.
int homotopy_failures(const Symbol& f, const FundamentalDomain& F, int trials, std::uint64_t seed, int samples = 4096);

struct Witness {
  int component = 0;
  int arc = 0;
  std::vector<int> windings;
  int index = 0;
};

/// One witness 1 + f per boundary component, f a winding-one collar on the first arc of that component.
std::vector<Witness> extension_probe(const std::shared_ptr<const FundamentalDomain>& F, int samples = 4096);

}  // namespace eqt::equivariant
