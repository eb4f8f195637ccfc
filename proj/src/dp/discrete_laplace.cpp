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

#include "urania/dp/discrete_laplace.hpp"

#include <cmath>

namespace urania::dp {
namespace {

// Bernoulli(exp(-a/b)) for 0 <= a <= b, exact, via the alternating-series
// construction: accept while Bernoulli(a / (b*k)) succeeds, return parity.
bool bernoulli_exp_frac(std::uint64_t a, std::uint64_t b, Rng& rng) {
  std::uint64_t k = 1;
  for (;;) {
    unsigned __int128 den = static_cast<unsigned __int128>(b) * k;
    if (!rng.bernoulli_ratio(a, den)) break;
    ++k;
  }
  return (k & 1) == 1;
}

}  // namespace

EpsilonRational epsilon_as_rational(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("discrete Laplace: epsilon must be positive and finite");
  }
  int exp2 = 0;
  double frac = std::frexp(epsilon, &exp2);  // epsilon = frac * 2^exp2, frac in [0.5, 1)
  auto mantissa = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  int shift = exp2 - 53;  // epsilon = mantissa * 2^shift, exactly
  while ((mantissa & 1) == 0 && shift < 0) {
    mantissa >>= 1;
    ++shift;
  }
  if (shift > 0) {
    if (shift >= 11 || (mantissa >> (63 - shift)) != 0) {
      throw ParameterError("discrete Laplace: epsilon too large for exact sampler");
    }
    return {mantissa << shift, 1};
  }
  if (shift < -63) {
    throw ParameterError(
        "discrete Laplace: epsilon too small for exact sampler "
        "(supported for epsilon >= 2^-10 and smaller dyadic values)");
  }
  return {mantissa, std::uint64_t{1} << -shift};
}

void DiscreteLaplaceParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("discrete Laplace: epsilon must be positive and finite");
  }
  if (trunc_bound && *trunc_bound < 0) {
    throw ParameterError("discrete Laplace: truncation bound must be >= 0");
  }
}

double dlap_beta(const DiscreteLaplaceParams& params) {
  params.validate();
  double q = std::exp(-params.epsilon);
  if (!params.trunc_bound) return (1.0 - q) / (1.0 + q);
  double b = static_cast<double>(*params.trunc_bound);
  return (1.0 - q) / (1.0 + q - 2.0 * std::exp(-params.epsilon * (b + 1.0)));
}

double dlap_pmf(const DiscreteLaplaceParams& params, std::int64_t x) {
  if (params.trunc_bound && std::llabs(x) > *params.trunc_bound) return 0.0;
  return dlap_beta(params) * std::exp(-params.epsilon * std::fabs(static_cast<double>(x)));
}

std::int64_t sample_dlap(const DiscreteLaplaceParams& params, Rng& rng) {
  params.validate();
  auto [num, den] = epsilon_as_rational(params.epsilon);

  for (;;) {
    // Magnitude y with Pr[y] proportional to exp(-epsilon * y):
    // x = u + den*v is discrete-exponential with rate 1/den, and
    // floor(x / num) rescales it to rate num/den = epsilon.
    std::uint64_t u = rng.below(den);
    if (!bernoulli_exp_frac(u, den, rng)) continue;
    unsigned __int128 x = u;
    while (bernoulli_exp_frac(1, 1, rng)) x += den;
    auto y = static_cast<std::int64_t>(x / num);

    // Sign, with the double-counted zero rejected so Pr[0] stays beta.
    bool negative = rng.below(2) == 1;
    if (negative && y == 0) continue;
    std::int64_t value = negative ? -y : y;

    if (params.trunc_bound && std::llabs(value) > *params.trunc_bound) continue;
    return value;
  }
}

}  // namespace urania::dp
