// Copyright 2026 The dp_irls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DP_IRLS_RNG_HPP_
#define DP_IRLS_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace dp_irls {

// splitmix64 finalizer.
inline uint64_t MixSeed(uint64_t value) {
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

// Folds a sequence of identifiers into one seed; order matters.
inline uint64_t DeriveSeed(std::initializer_list<uint64_t> parts) {
  uint64_t state = 0x6a09e667f3bcc909ULL;
  for (uint64_t part : parts) state = MixSeed(state ^ MixSeed(part));
  return state;
}

// Deterministic noise source. The same (seed, stream_id) pair reproduces the
// same draws bit-for-bit within one build; no cross-build guarantee is made
// because the normal sampler comes from the standard library.
class SeededRng {
 public:
  SeededRng(uint64_t seed, uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), engine_(MakeEngine(seed, stream_id)) {}

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }

  // Uniform on the open interval (0, 1) with 53-bit resolution.
  double UniformOpen() {
    const uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double StandardNormal() { return normal_(engine_); }

  // Zero-mean Laplace with the given scale, by inverting the CDF.
  double Laplace(double scale) {
    const double centered = UniformOpen() - 0.5;
    const double magnitude = -scale * std::log1p(-2.0 * std::abs(centered));
    return centered < 0.0 ? -magnitude : magnitude;
  }

 private:
  static std::mt19937_64 MakeEngine(uint64_t seed, uint64_t stream_id) {
    const uint64_t mixed = DeriveSeed({seed, stream_id});
    std::seed_seq sequence{static_cast<uint32_t>(mixed),
                           static_cast<uint32_t>(mixed >> 32),
                           static_cast<uint32_t>(seed),
                           static_cast<uint32_t>(stream_id)};
    return std::mt19937_64(sequence);
  }

  uint64_t seed_;
  uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace dp_irls

#endif  // DP_IRLS_RNG_HPP_
