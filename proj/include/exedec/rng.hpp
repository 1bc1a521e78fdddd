// Copyright 2026 The exedec-lab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EXEDEC_RNG_HPP
#define EXEDEC_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace exedec {

// Deterministic RNG wrapper. std::mt19937_64 output is pinned by the
// standard; the bounded-draw helpers below avoid std::*_distribution,
// whose results vary across standard libraries. Every corpus task gets
// its own stream derived from (seed, index, attempt) so parallel and
// serial generation agree.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(mix(seed)) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [lo, hi], inclusive. Requires lo <= hi.
  int64_t uniform(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(bounded(span));
  }

  // Uniform in [0, n). Requires n > 0.
  size_t index(size_t n) { return static_cast<size_t>(bounded(n)); }

  bool chance(double p) {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 < p;
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[index(items.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

  // Stream derivation for per-task reproducibility.
  static uint64_t derive(uint64_t seed, uint64_t index, uint64_t attempt = 0) {
    uint64_t h = mix(seed);
    h = mix(h ^ (index + 0x9e3779b97f4a7c15ull));
    h = mix(h ^ (attempt + 0x3c6ef372fe94f82aull));
    return h;
  }

 private:
  // SplitMix64 finalizer; spreads low-entropy seeds.
  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Debiased bounded draw (rejection sampling on the top of the range).
  uint64_t bounded(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % n;
    uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  std::mt19937_64 engine_;
};

}  // namespace exedec

#endif  // EXEDEC_RNG_HPP
