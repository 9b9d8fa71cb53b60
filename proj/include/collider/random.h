// Copyright 2026 The Collider Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COLLIDER_RANDOM_H_
#define COLLIDER_RANDOM_H_

#include <cstdint>
#include <limits>

namespace collider {

// SplitMix64 output finalizer (Steele, Lea & Flood). Bijective avalanche mix
// used for every seed derivation in the project.
uint64_t Mix64(uint64_t x);

// Derives the seed of child stream `index` from `base`:
//   DeriveSeed(base, i) = Mix64(base + (i + 1) * 0x9E3779B97F4A7C15).
// Nested indices compose: DeriveSeed(DeriveSeed(base, a), b).
uint64_t DeriveSeed(uint64_t base, uint64_t index);

// SplitMix64 generator. Satisfies UniformRandomBitGenerator, so it can drive
// <random> distributions. Construction is a single store, which makes it cheap
// to open one stream per simulated user.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return Mix64(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). `bound` must be positive. Uses Lemire's
  // multiply-shift with rejection, so the result is exactly uniform.
  uint64_t UniformBelow(uint64_t bound);

  // Child stream `index` of this generator's current state; does not advance
  // this generator.
  Rng Split(uint64_t index) const { return Rng(DeriveSeed(state_, index)); }

 private:
  uint64_t state_;
};

}  // namespace collider

#endif  // COLLIDER_RANDOM_H_
