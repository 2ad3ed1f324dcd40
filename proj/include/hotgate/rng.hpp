#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hotgate {

inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the value at (seed, stream, counter) is a pure function, so
/// any partition of streams across threads yields the same draws.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(splitmix64(seed ^ splitmix64(stream ^ 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next_u64() noexcept { return splitmix64(key_ + splitmix64(counter_++)); }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hotgate
