#include "hotgate/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace hotgate {

namespace {

std::atomic<int> g_override{0};

int env_limit() {
  const char* raw = std::getenv("HOTGATE_THREADS");
  if (raw == nullptr) return 0;
  try {
    const int v = std::stoi(raw);
    return v > 0 ? v : 0;
  } catch (...) {
    return 0;
  }
}

}  // namespace

int thread_limit() {
  int limit = omp_get_max_threads();
  const int cap = g_override.load() > 0 ? g_override.load() : env_limit();
  if (cap > 0 && cap < limit) limit = cap;
  return limit < 1 ? 1 : limit;
}

void set_thread_limit(int threads) { g_override.store(threads > 0 ? threads : 0); }

}  // namespace hotgate
