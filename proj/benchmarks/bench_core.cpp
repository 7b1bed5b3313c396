#include <benchmark/benchmark.h>

#include "eqtoeplitz/bergman.hpp"
#include "eqtoeplitz/equivariant.hpp"
#include "eqtoeplitz/quadrature.hpp"
#include "eqtoeplitz/toeplitz.hpp"

using namespace eqt;
using symbols::Symbol;

namespace {

void BM_LaurentToeplitz(benchmark::State& st) {
  const Symbol f = Symbol::zbar() + Symbol::z() * Symbol::z();
  for (auto _ : st) benchmark::DoNotOptimize(toeplitz::toeplitz_block(f, 6.0, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_LaurentToeplitz)->Arg(128)->Arg(512);

void BM_QuadratureToeplitz(benchmark::State& st) {
  const Symbol f = Symbol::bump(0.2, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(toeplitz::toeplitz_block(f, 6.0, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_QuadratureToeplitz)->Arg(64)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_CornerCommutatorTrace(benchmark::State& st) {
  const int P = static_cast<int>(st.range(0));
  const Matrix A = toeplitz::toeplitz_block(Symbol::zbar(), 6.0, P);
  const Matrix B = toeplitz::toeplitz_block(Symbol::z(), 6.0, P);
  for (auto _ : st) benchmark::DoNotOptimize(toeplitz::corner_commutator_trace(A, B, P - P / 5));
}
BENCHMARK(BM_CornerCommutatorTrace)->Arg(200)->Arg(600);

void BM_RepresentationBlock(benchmark::State& st) {
  const mobius::MobiusTransform g{std::cosh(0.5), std::sinh(0.5)};
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(bergman::representation_block(g, 6.0, n, n));
}
BENCHMARK(BM_RepresentationBlock)->Arg(60)->Arg(240)->Unit(benchmark::kMillisecond);

void BM_DeltaPairIntegral(benchmark::State& st) {
  quadrature::PairOptions po;
  po.radial = static_cast<int>(st.range(0));
  po.angular = 2 * po.radial;
  const auto f2 = [](cplx a, cplx b) { return cplx(std::norm(a - b)); };
  for (auto _ : st) benchmark::DoNotOptimize(quadrature::delta_pair_integral(f2, 6.0, po));
}
BENCHMARK(BM_DeltaPairIntegral)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TwoFormOnDomain(benchmark::State& st) {
  const auto F = std::make_shared<const equivariant::FundamentalDomain>(
      equivariant::build_domain(mobius::symmetric_pairings(2, 0.3)));
  const Symbol f = Symbol::bump(0.1, 0.3), g = Symbol::bump(0.2 * I, 0.3, I);
  for (auto _ : st) benchmark::DoNotOptimize(quadrature::two_form_integral(f, g, *F));
}
BENCHMARK(BM_TwoFormOnDomain)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
