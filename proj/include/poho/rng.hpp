#pragma once

#include <cmath>
#include <cstdint>

namespace poho {

// splitmix64 with hand-rolled Box-Muller. <random> distributions are
// implementation-defined, which would break the reproducibility contract of
// seeded reports.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// uniform in (0, 1]
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// uniform in [a, b)
  double uniform(double a, double b) {
    return a + (b - a) * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53);
  }

  /// standard normal
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double a = uniform01();
    const double b = uniform01();
    const double r = std::sqrt(-2.0 * std::log(a));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * b);
    have_spare_ = true;
    return r * std::cos(two_pi * b);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace poho
