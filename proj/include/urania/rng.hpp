//
// Copyright 2026 The Urania Authors
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
//

#ifndef URANIA_RNG_HPP_
#define URANIA_RNG_HPP_

#include <cstdint>
#include <random>

#include "urania/common.hpp"

namespace urania {

// Seedable random source. All noise in the library flows through one of
// these; production entrypoints seed from OS entropy, tests inject seeds.
//
// Deliberately avoids std::*_distribution: the engine (mt19937_64) is fully
// specified by the standard, the distributions are not, and reproducibility
// of noise streams is part of the contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

  static Rng from_os_entropy();

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, n), unbiased via rejection.
  std::uint64_t below(std::uint64_t n);
  unsigned __int128 below128(unsigned __int128 n);

  // Exact Bernoulli(num/den) using integer comparison only.
  bool bernoulli_ratio(unsigned __int128 num, unsigned __int128 den);

  // Uniform double in [0, 1) with 53 random bits.
  double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return real01() < p; }

  // Standard normal via Box-Muller (one value per call).
  double gaussian();

  // Derives an independent child stream; children with distinct stream ids
  // never collide regardless of how much the parent is consumed.
  Rng split(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace urania

#endif  // URANIA_RNG_HPP_
