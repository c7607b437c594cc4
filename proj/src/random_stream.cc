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

#include "shotqdp/random_stream.h"

namespace shotqdp {
namespace {

constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

}  // namespace

uint64_t MixBits(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t seed, uint64_t salt) {
  return MixBits(MixBits(seed) ^ (salt * kGoldenGamma + 0x632be59bd9b4e019ULL));
}

RandomStream::RandomStream(uint64_t seed, uint64_t index)
    : state_(DeriveSeed(seed, index)) {}

RandomStream::result_type RandomStream::operator()() {
  state_ += kGoldenGamma;
  return MixBits(state_);
}

double RandomStream::NextUniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace shotqdp
