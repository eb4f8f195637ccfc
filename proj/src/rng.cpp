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

#include "urania/rng.hpp"

#include <cmath>

namespace urania {

Rng Rng::from_os_entropy() {
  std::random_device rd;
  std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return Rng(seed);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ParameterError("Rng::below: n must be positive");
  // 2^64 mod n, computed in 64-bit arithmetic.
  std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t u = next_u64();
    if (u >= threshold) return u % n;
  }
}

unsigned __int128 Rng::below128(unsigned __int128 n) {
  if (n == 0) throw ParameterError("Rng::below128: n must be positive");
  unsigned __int128 threshold = (static_cast<unsigned __int128>(0) - n) % n;
  for (;;) {
    unsigned __int128 u =
        (static_cast<unsigned __int128>(next_u64()) << 64) | next_u64();
    if (u >= threshold) return u % n;
  }
}

bool Rng::bernoulli_ratio(unsigned __int128 num, unsigned __int128 den) {
  if (den == 0) throw ParameterError("Rng::bernoulli_ratio: zero denominator");
  if (num >= den) return true;
  return below128(den) < num;
}

double Rng::gaussian() {
  // u1 in (0, 1] so log() is finite.
  double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace urania
