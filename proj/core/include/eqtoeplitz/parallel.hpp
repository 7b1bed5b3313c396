#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "eqtoeplitz/common.hpp"

namespace eqt {

/// Worker count used by parallel_for; results never depend on it.
void set_worker_count(int k);
int worker_count();

/// Runs body(i) for i in [0, n). Each index must write only to its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation; the association order depends only on the length.
double pairwise_sum(std::span<const double> xs);
cplx pairwise_sum(std::span<const cplx> xs);

}  // namespace eqt
