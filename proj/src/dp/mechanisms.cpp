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

#include "urania/dp/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace urania::dp {
namespace {

void validate_contribution(const ContributionSet& c, int cap) {
  if (static_cast<int>(c.items.size()) > cap) {
    throw ContractViolation("contribution has " + std::to_string(c.items.size()) +
                            " items, cap is " + std::to_string(cap));
  }
  std::unordered_set<std::string> seen;
  for (const auto& item : c.items) {
    if (!seen.insert(item).second) {
      throw ContractViolation("contribution contains duplicate bin '" + item + "'");
    }
  }
}

// Standard normal CDF.
double phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// log Phi(z), with the asymptotic tail expansion where erfc underflows.
double log_phi(double z) {
  if (z > -25.0) return std::log(phi(z));
  return -0.5 * z * z - std::log(-z) - 0.5 * std::log(2.0 * 3.14159265358979323846);
}

// delta achieved by the Gaussian mechanism at noise scale sigma (sensitivity 1):
// delta(sigma) = Phi(1/(2 sigma) - eps sigma) - e^eps Phi(-1/(2 sigma) - eps sigma),
// with the second term evaluated in log space so large epsilons stay finite.
double gaussian_delta(double epsilon, double sigma) {
  double a = 1.0 / (2.0 * sigma);
  double b = epsilon * sigma;
  return phi(a - b) - std::exp(epsilon + log_phi(-a - b));
}

}  // namespace

Histogram private_histogram_release(const std::vector<ContributionSet>& contribs,
                                    const std::vector<std::string>& universe,
                                    int cap, double epsilon, Rng& rng) {
  if (cap < 1) throw ParameterError("PHR: cap must be >= 1");
  if (!(epsilon > 0.0)) throw ParameterError("PHR: epsilon must be positive");

  Histogram out;
  for (const auto& bin : universe) out[bin] = 0;
  if (out.size() != universe.size()) {
    throw ParameterError("PHR: universe contains duplicate bins");
  }

  for (const auto& c : contribs) {
    validate_contribution(c, cap);
    for (const auto& item : c.items) {
      auto it = out.find(item);
      if (it == out.end()) {
        throw ContractViolation("PHR: contribution bin '" + item +
                                "' is outside the declared universe");
      }
      ++it->second;
    }
  }

  DiscreteLaplaceParams noise{epsilon / cap, std::nullopt};
  for (const auto& bin : universe) {
    out[bin] += sample_dlap(noise, rng);
  }
  return out;
}

std::int64_t partition_selection_threshold(double epsilon, double delta, int cap) {
  if (cap < 1) throw ParameterError("PPS: cap must be >= 1");
  if (!(epsilon > 0.0)) throw ParameterError("PPS: epsilon must be positive");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ParameterError("PPS: delta must lie in (0, 1); the threshold diverges at 0");
  }
  double eps_p = epsilon / cap;
  double delta_p = delta / cap;
  double ratio = (std::exp(eps_p) + 2.0 * delta_p - 1.0) / ((std::exp(eps_p) + 1.0) * delta_p);
  auto tau = static_cast<std::int64_t>(std::ceil(std::log(ratio) / eps_p));
  return std::max<std::int64_t>(tau, 0);
}

std::vector<std::string> private_partition_selection(
    const std::vector<ContributionSet>& contribs, int cap, double epsilon,
    double delta, Rng& rng) {
  std::int64_t tau = partition_selection_threshold(epsilon, delta, cap);

  std::map<std::string, std::int64_t> counts;
  for (const auto& c : contribs) {
    validate_contribution(c, cap);
    for (const auto& item : c.items) ++counts[item];
  }

  // Noise is scaled to eps' = epsilon/cap like the threshold.
  DiscreteLaplaceParams noise{epsilon / cap, tau};
  std::vector<std::string> kept;
  for (const auto& [bin, count] : counts) {
    std::int64_t zeta = sample_dlap(noise, rng);
    if (count + zeta > tau) kept.push_back(bin);
  }
  return kept;
}

double gaussian_sigma(double epsilon, double delta, double l2_sensitivity) {
  if (!(epsilon > 0.0)) throw ParameterError("gaussian_sigma: epsilon must be positive");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ParameterError("gaussian_sigma: delta must lie in (0, 1)");
  }
  if (!(l2_sensitivity > 0.0)) {
    throw ParameterError("gaussian_sigma: sensitivity must be positive");
  }

  // delta(sigma) is decreasing in sigma; bracket then bisect.
  double lo = 1e-12, hi = 1.0;
  while (gaussian_delta(epsilon, hi) > delta) {
    hi *= 2.0;
    if (hi > 1e12) throw ParameterError("gaussian_sigma: failed to bracket");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (gaussian_delta(epsilon, mid) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi * l2_sensitivity;
}

}  // namespace urania::dp
