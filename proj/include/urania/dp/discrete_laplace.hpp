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

#ifndef URANIA_DP_DISCRETE_LAPLACE_HPP_
#define URANIA_DP_DISCRETE_LAPLACE_HPP_

#include <cstdint>
#include <optional>

#include "urania/rng.hpp"

namespace urania::dp {

// Parameters of the (optionally truncated) discrete Laplace distribution
// with pmf proportional to exp(-epsilon * |x|). When trunc_bound = B is set
// the support is [-B, B] and the normalizer is
//   beta = (1 - e^-eps) / (1 + e^-eps - 2 e^-eps(B+1)).
struct DiscreteLaplaceParams {
  double epsilon = 0.0;
  std::optional<std::int64_t> trunc_bound;  // nullopt = unbounded support

  void validate() const;
};

double dlap_beta(const DiscreteLaplaceParams& params);
double dlap_pmf(const DiscreteLaplaceParams& params, std::int64_t x);

// Draws one sample. The sampler works in exact integer arithmetic on the
// rational value of epsilon (every double is a dyadic rational), so the
// produced distribution carries no floating-point tail bias. The truncated
// variant rejects from the unbounded sampler until the draw lands in
// [-B, B].
std::int64_t sample_dlap(const DiscreteLaplaceParams& params, Rng& rng);

// Noise-free view of the sampler's rational decomposition, exposed for
// diagnostics and tests: epsilon == numerator / denominator exactly.
struct EpsilonRational {
  std::uint64_t numerator;
  std::uint64_t denominator;
};
EpsilonRational epsilon_as_rational(double epsilon);

}  // namespace urania::dp

#endif  // URANIA_DP_DISCRETE_LAPLACE_HPP_
