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

#ifndef URANIA_CLUSTERING_HPP_
#define URANIA_CLUSTERING_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "urania/privacy_ledger.hpp"
#include "urania/rng.hpp"

namespace urania {

using Matrix = std::vector<std::vector<float>>;

struct ClusterCenters {
  std::vector<std::vector<double>> centers;
  int k_requested = 0;
  int k_effective = 0;  // centers owning at least one point at the end
};

// Conversation id -> cluster index. Internal only: assignments are
// non-private in the add/remove model and must never appear in any
// released artifact.
struct Assignment {
  std::map<std::string, int> cluster_of;
};

// Lloyd's algorithm with seeded k-means++ initialization, run until the
// assignment reaches a fixpoint or max_iters. Ties break to the lowest
// cluster index; an empty cluster keeps its previous center.
std::pair<ClusterCenters, Assignment> kmeans(const std::vector<std::string>& ids,
                                             const Matrix& points, int k, int max_iters,
                                             std::uint64_t seed);

// DP-Lloyd: data-independent initialization on the unit sphere, then a
// fixed number of iterations where each cluster releases a noisy count
// (discrete Laplace, budget epsilon_c/(2*iters) per iteration) and a noisy
// sum (Gaussian calibrated to (epsilon_c/(2*iters), delta_c/iters), L2
// sensitivity 1 from the unit clip radius). Parallel composition across
// clusters within an iteration, basic composition across iterations, so
// the whole run is (epsilon_c, delta_c)-DP. Returns centers only.
//
// Points must be inside the unit ball; anything longer is clipped. A
// cluster whose noisy count drops to zero or below gets its center redrawn
// uniformly on the unit sphere.
ClusterCenters dp_kmeans(const Matrix& points, int k, double epsilon_c, double delta_c,
                         int iters, std::uint64_t seed, PrivacyLedger* ledger = nullptr,
                         const std::string& mechanism_id = "dp_kmeans");

// Exact nearest-center assignment; ties break to the lowest cluster index.
Assignment assign(const std::vector<std::string>& ids, const Matrix& points,
                  const ClusterCenters& centers);
std::vector<int> assign_indices(const Matrix& points, const ClusterCenters& centers);

// Sum of squared point-to-assigned-center distances.
double kmeans_objective(const Matrix& points, const ClusterCenters& centers,
                        const std::vector<int>& assignment);

// k unit vectors drawn from the rng; the initialization used by dp_kmeans.
std::vector<std::vector<double>> random_unit_centers(int k, int dim, Rng& rng);

double squared_distance(const std::vector<float>& p, const std::vector<double>& c);

}  // namespace urania

#endif  // URANIA_CLUSTERING_HPP_
