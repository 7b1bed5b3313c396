#include "eqtoeplitz/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace eqt {

namespace {

std::atomic<int> g_workers{0};

template <class T>
T cascade(std::span<const T> xs) {
  if (xs.size() <= 8) {
    T s{};
    for (const auto& x : xs) s += x;
    return s;
  }
  const std::size_t h = xs.size() / 2;
  return cascade(xs.subspan(0, h)) + cascade(xs.subspan(h));
}

}  // namespace

void set_worker_count(int k) { g_workers.store(std::max(1, k)); }

int worker_count() {
  const int k = g_workers.load();
  if (k > 0) return k;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (k <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(fail_mu);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < k; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> xs) { return cascade(xs); }
cplx pairwise_sum(std::span<const cplx> xs) { return cascade(xs); }

}  // namespace eqt
