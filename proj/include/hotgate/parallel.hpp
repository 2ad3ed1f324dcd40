#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <vector>

namespace hotgate {

/// Serial runs the reference loop; parallel splits the same blocks over OpenMP threads.
/// Block boundaries and the order of the final reduction do not depend on the thread
/// count, so both produce bitwise-identical results.
enum class Exec { serial, parallel };

inline constexpr std::size_t kReductionBlock = 512;

/// Threads used by parallel kernels: OpenMP's limit, capped by HOTGATE_THREADS.
int thread_limit();

/// Overrides the thread cap for this process (0 restores the environment default).
void set_thread_limit(int threads);

/// Runs body(i) for i in [0, n). Iterations must be independent.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::parallel && n > 1) {
    // exceptions may not cross an OpenMP region; keep the first and rethrow
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_limit())
    for (long long i = 0; i < count; ++i) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(hotgate_for_each_error)
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

/// Deterministic sum of term(i) over [0, n) in fixed blocks.
template <class Term>
double blocked_sum(std::size_t n, Exec exec, Term&& term) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  auto run_block = [&](std::size_t blk) {
    const std::size_t lo = blk * kReductionBlock;
    const std::size_t hi = lo + kReductionBlock < n ? lo + kReductionBlock : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[blk] = s;
  };
  if (blocks > 1)
    for_each_index(blocks, exec, run_block);
  else if (blocks == 1)
    run_block(0);
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace hotgate
