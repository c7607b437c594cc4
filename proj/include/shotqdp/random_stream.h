// Copyright 2026 The ShotQDP Authors
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

// Counter-based random streams. Stream (seed, index) is a pure function of
// its two keys, so Monte Carlo trials can run in any order or in parallel and
// still reproduce bit-for-bit.

#ifndef SHOTQDP_RANDOM_STREAM_H_
#define SHOTQDP_RANDOM_STREAM_H_

#include <cstdint>
#include <limits>

namespace shotqdp {

// SplitMix64 finalizer.
uint64_t MixBits(uint64_t x);

// Derives a child seed; used to give independent mechanisms distinct keys.
uint64_t DeriveSeed(uint64_t seed, uint64_t salt);

// Satisfies std::uniform_random_bit_generator.
class RandomStream {
 public:
  using result_type = uint64_t;

  RandomStream(uint64_t seed, uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double NextUniform();

 private:
  uint64_t state_;
};

}  // namespace shotqdp

#endif  // SHOTQDP_RANDOM_STREAM_H_
