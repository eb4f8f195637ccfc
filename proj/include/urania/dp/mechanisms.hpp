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

#ifndef URANIA_DP_MECHANISMS_HPP_
#define URANIA_DP_MECHANISMS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "urania/dp/discrete_laplace.hpp"
#include "urania/rng.hpp"

namespace urania::dp {

// Noisy histograms may carry negative counts; raw ones are nonnegative.
using Histogram = std::map<std::string, std::int64_t>;

// The bins one record contributes to. Items must be distinct and their
// number must not exceed the mechanism's cap; callers pre-truncate.
struct ContributionSet {
  std::vector<std::string> items;
};

// Adds DLap(epsilon/cap) noise independently to every bin of the declared
// universe. The universe is an explicit, data-independent input; bins
// outside it never appear in the output, and contributions must stay
// within it. Noise is drawn in universe order, so a fixed seed reproduces
// the release bit for bit.
Histogram private_histogram_release(const std::vector<ContributionSet>& contribs,
                                    const std::vector<std::string>& universe,
                                    int cap, double epsilon, Rng& rng);

// Threshold tau = ceil((1/eps') * ln((e^eps' + 2 delta' - 1) / ((e^eps' + 1) delta')))
// with eps' = epsilon/cap, delta' = delta/cap.
std::int64_t partition_selection_threshold(double epsilon, double delta, int cap);

// Keeps a bin present in the contributions iff count + zeta > tau with
// zeta ~ DLap_tau(eps'). Output is sorted and always a subset of the input
// union; a count above 2*tau is kept deterministically, an absent bin never
// appears. Noise is drawn per bin in sorted order.
std::vector<std::string> private_partition_selection(
    const std::vector<ContributionSet>& contribs, int cap, double epsilon,
    double delta, Rng& rng);

// Smallest sigma such that the Gaussian mechanism with the given L2
// sensitivity satisfies (epsilon, delta)-DP, from the exact Gaussian
// privacy profile (bisection; valid for all epsilon, unlike the classic
// sqrt(2 ln(1.25/delta)) bound).
double gaussian_sigma(double epsilon, double delta, double l2_sensitivity);

}  // namespace urania::dp

#endif  // URANIA_DP_MECHANISMS_HPP_
