// Copyright 2026 The ppalab Authors
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

#ifndef PPA_COMMON_RNG_H_
#define PPA_COMMON_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace ppa {

// Mixes a root seed with a purpose label and up to two indices into an
// independent 64-bit sub-seed. Every random stream in the library is keyed
// this way, so the order in which streams are created never matters.
std::uint64_t DeriveSeed(std::uint64_t root, std::string_view purpose,
                         std::uint64_t index = 0, std::uint64_t index2 = 0);

// Thin wrapper over std::mt19937_64. The engine's output sequence is fixed by
// the standard; the distributions below are implemented here instead of using
// <random>'s, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Standard normal via Box-Muller; the second variate is cached.
  double Normal();
  double Normal(double mean, double stddev) {
    return mean + stddev * Normal();
  }

  // Uniform integer in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = UniformIndex(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace ppa

#endif  // PPA_COMMON_RNG_H_
