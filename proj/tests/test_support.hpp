#pragma once

#include <cstdint>
#include <random>

#include "herdisc/instances.hpp"
#include "herdisc/linalg.hpp"

namespace test_support {

using herdisc::Matrix;
using herdisc::Vector;

// Deterministic Gaussian sampling for test fixtures, matching the library's
// convention (mt19937_64 + Box-Muller) so fixtures are platform-stable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double pm1() { return (eng_() & 1) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline Matrix random_gaussian(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.gaussian();
  return a;
}

inline Matrix random_pm1(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.pm1();
  return a;
}

inline Matrix hadamard(int n) {
  return herdisc::generate({herdisc::Family::kHadamard, n, n, 0, ""});
}

inline Matrix intervals(int n) {
  return herdisc::generate({herdisc::Family::kIntervals, n, n, 0, ""});
}

}  // namespace test_support
