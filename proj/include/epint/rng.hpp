/**
 * Copyright (c) 2026 the epint authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#ifndef EPINT_RNG_HPP
#define EPINT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "epint/common.hpp"

namespace epint {

/// Seeded RNG with hand-rolled distributions. std::mt19937_64 output is
/// fully specified by the standard; the std:: distributions are not, so
/// every draw here is implemented directly to keep results byte-identical
/// across compilers.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, bound). bound = 0 returns 0.
  uint64_t uniform(uint64_t bound) {
    if (bound == 0) return 0;
    // Lemire's multiply-shift with rejection of the biased band.
    uint64_t threshold = (-bound) % bound;
    for (;;) {
      uint64_t x = next_u64();
      __uint128_t m = static_cast<__uint128_t>(x) * bound;
      if (static_cast<uint64_t>(m) >= threshold)
        return static_cast<uint64_t>(m >> 64);
    }
  }

  /// Uniform in [lo, hi] inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(uniform(static_cast<uint64_t>(hi - lo + 1)));
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Knuth's product method; adequate for the small rates used here.
  int poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    int k = 0;
    double prod = 1.0;
    for (;;) {
      prod *= uniform01();
      if (prod <= limit) return k;
      ++k;
    }
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Independent stream keyed on (seed, a, b); used to give documents and
  /// folds their own deterministic streams.
  static Rng derive(uint64_t seed, uint64_t a, uint64_t b = 0) {
    return Rng(splitmix64(seed ^ splitmix64(a ^ splitmix64(b))));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace epint

#endif  // EPINT_RNG_HPP
