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

#include "urania/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "urania/dp/mechanisms.hpp"

namespace urania {

double squared_distance(const std::vector<float>& p, const std::vector<double>& c) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double d = static_cast<double>(p[i]) - c[i];
    d2 += d * d;
  }
  return d2;
}

namespace {

int nearest_center(const std::vector<float>& p, const std::vector<std::vector<double>>& centers) {
  int best = 0;
  double best_d2 = squared_distance(p, centers[0]);
  for (int j = 1; j < static_cast<int>(centers.size()); ++j) {
    double d2 = squared_distance(p, centers[j]);
    if (d2 < best_d2) {  // strict: ties stay with the lowest index
      best_d2 = d2;
      best = j;
    }
  }
  return best;
}

void check_dims(const Matrix& points) {
  if (points.empty()) throw ParameterError("clustering: no points");
  std::size_t dim = points[0].size();
  if (dim == 0) throw ParameterError("clustering: zero-dimensional points");
  for (const auto& p : points) {
    if (p.size() != dim) throw ParameterError("clustering: inconsistent dimensions");
  }
}

std::vector<std::vector<double>> kmeanspp_init(const Matrix& points, int k, Rng& rng) {
  std::vector<std::vector<double>> centers;
  centers.reserve(k);
  auto add_center = [&](std::size_t idx) {
    centers.emplace_back(points[idx].begin(), points[idx].end());
  };
  add_center(rng.below(points.size()));

  std::vector<double> d2(points.size());
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = squared_distance(points[i], centers[0]);
      for (std::size_t j = 1; j < centers.size(); ++j) {
        d2[i] = std::min(d2[i], squared_distance(points[i], centers[j]));
      }
      total += d2[i];
    }
    if (total <= 0.0) {
      // All points coincide with existing centers; fall back to uniform.
      add_center(rng.below(points.size()));
      continue;
    }
    double target = rng.real01() * total;
    double seen = 0.0;
    std::size_t pick = points.size() - 1;
    for (std::size_t i = 0; i < points.size(); ++i) {
      seen += d2[i];
      if (seen >= target) {
        pick = i;
        break;
      }
    }
    add_center(pick);
  }
  return centers;
}

int count_effective(const std::vector<int>& assignment, int k) {
  std::vector<char> used(k, 0);
  for (int a : assignment) used[a] = 1;
  return static_cast<int>(std::count(used.begin(), used.end(), 1));
}

}  // namespace

std::vector<std::vector<double>> random_unit_centers(int k, int dim, Rng& rng) {
  std::vector<std::vector<double>> centers(k, std::vector<double>(dim));
  for (auto& c : centers) {
    double norm2 = 0.0;
    for (auto& x : c) {
      x = rng.gaussian();
      norm2 += x * x;
    }
    if (norm2 <= 0.0) {
      c[0] = 1.0;
      norm2 = 1.0;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : c) x *= inv;
  }
  return centers;
}

std::vector<int> assign_indices(const Matrix& points, const ClusterCenters& centers) {
  if (centers.centers.empty()) throw ParameterError("assign: no centers");
  std::vector<int> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = nearest_center(points[i], centers.centers);
  }
  return out;
}

Assignment assign(const std::vector<std::string>& ids, const Matrix& points,
                  const ClusterCenters& centers) {
  if (ids.size() != points.size()) throw ParameterError("assign: ids/points size mismatch");
  auto idx = assign_indices(points, centers);
  Assignment a;
  for (std::size_t i = 0; i < ids.size(); ++i) a.cluster_of[ids[i]] = idx[i];
  return a;
}

double kmeans_objective(const Matrix& points, const ClusterCenters& centers,
                        const std::vector<int>& assignment) {
  double obj = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    obj += squared_distance(points[i], centers.centers[assignment[i]]);
  }
  return obj;
}

std::pair<ClusterCenters, Assignment> kmeans(const std::vector<std::string>& ids,
                                             const Matrix& points, int k, int max_iters,
                                             std::uint64_t seed) {
  check_dims(points);
  if (ids.size() != points.size()) throw ParameterError("kmeans: ids/points size mismatch");
  if (k < 1) throw ParameterError("kmeans: k must be >= 1");
  if (static_cast<std::size_t>(k) > points.size()) {
    throw ParameterError("kmeans: k exceeds the number of points");
  }

  Rng rng(seed);
  ClusterCenters cc;
  cc.k_requested = k;
  cc.centers = kmeanspp_init(points, k, rng);

  std::size_t dim = points[0].size();
  std::vector<int> assignment(points.size(), -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<int> next(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      next[i] = nearest_center(points[i], cc.centers);
    }
    if (next == assignment) break;
    assignment = std::move(next);

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      int j = assignment[i];
      ++counts[j];
      for (std::size_t d = 0; d < dim; ++d) sums[j][d] += points[i][d];
    }
    for (int j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;  // empty cluster keeps its center
      for (std::size_t d = 0; d < dim; ++d) {
        cc.centers[j][d] = sums[j][d] / static_cast<double>(counts[j]);
      }
    }
  }
  if (assignment[0] == -1) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      assignment[i] = nearest_center(points[i], cc.centers);
    }
  }
  cc.k_effective = count_effective(assignment, k);

  Assignment a;
  for (std::size_t i = 0; i < ids.size(); ++i) a.cluster_of[ids[i]] = assignment[i];
  return {std::move(cc), std::move(a)};
}

ClusterCenters dp_kmeans(const Matrix& points, int k, double epsilon_c, double delta_c,
                         int iters, std::uint64_t seed, PrivacyLedger* ledger,
                         const std::string& mechanism_id) {
  check_dims(points);
  if (k < 1) throw ParameterError("dp_kmeans: k must be >= 1");
  if (!(epsilon_c > 0.0)) throw ParameterError("dp_kmeans: epsilon_c must be positive");
  if (!(delta_c > 0.0) || !(delta_c < 1.0)) {
    throw ParameterError("dp_kmeans: delta_c must lie in (0, 1)");
  }
  if (iters < 1) throw ParameterError("dp_kmeans: iters must be >= 1");

  std::size_t dim = points[0].size();

  // Clip to the unit ball so both released statistics have sensitivity 1.
  Matrix clipped = points;
  for (auto& p : clipped) {
    double norm2 = 0.0;
    for (float x : p) norm2 += static_cast<double>(x) * x;
    if (norm2 > 1.0) {
      auto inv = static_cast<float>(1.0 / std::sqrt(norm2));
      for (float& x : p) x *= inv;
    }
  }

  Rng master(seed);
  Rng init_rng = master.split(0);

  ClusterCenters cc;
  cc.k_requested = k;
  cc.centers = random_unit_centers(k, static_cast<int>(dim), init_rng);

  double eps_iter = epsilon_c / (2.0 * iters);
  double delta_iter = delta_c / iters;
  double sigma = dp::gaussian_sigma(eps_iter, delta_iter, 1.0);
  dp::DiscreteLaplaceParams count_noise{eps_iter, std::nullopt};

  std::vector<int> assignment(clipped.size());
  std::vector<std::int64_t> last_noisy_counts(k, 0);
  for (int iter = 0; iter < iters; ++iter) {
    Rng iter_rng = master.split(1 + static_cast<std::uint64_t>(iter));

    for (std::size_t i = 0; i < clipped.size(); ++i) {
      assignment[i] = nearest_center(clipped[i], cc.centers);
    }

    // Per-cluster sums are accumulated over lexicographically sorted
    // members so a permutation of the input rows changes nothing.
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < clipped.size(); ++i) members[assignment[i]].push_back(i);
    for (auto& m : members) {
      std::sort(m.begin(), m.end(),
                [&](std::size_t a, std::size_t b) { return clipped[a] < clipped[b]; });
    }

    for (int j = 0; j < k; ++j) {
      auto count = static_cast<std::int64_t>(members[j].size());
      std::int64_t noisy_count = count + dp::sample_dlap(count_noise, iter_rng);
      last_noisy_counts[j] = noisy_count;

      std::vector<double> noisy_sum(dim, 0.0);
      for (std::size_t idx : members[j]) {
        for (std::size_t d = 0; d < dim; ++d) noisy_sum[d] += clipped[idx][d];
      }
      for (std::size_t d = 0; d < dim; ++d) noisy_sum[d] += sigma * iter_rng.gaussian();

      if (noisy_count <= 0) {
        // Treated as empty: redraw the center uniformly on the sphere.
        cc.centers[j] = random_unit_centers(1, static_cast<int>(dim), iter_rng)[0];
        continue;
      }
      double denom = static_cast<double>(std::max<std::int64_t>(noisy_count, 1));
      double norm2 = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        cc.centers[j][d] = noisy_sum[d] / denom;
        norm2 += cc.centers[j][d] * cc.centers[j][d];
      }
      if (norm2 > 1.0) {
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : cc.centers[j]) x *= inv;
      }
    }
  }

  // k_effective is derived from the already-released noisy counts, never
  // from raw assignments, so persisting it stays pure post-processing.
  int populated = 0;
  for (std::int64_t c : last_noisy_counts) {
    if (c >= 1) ++populated;
  }
  cc.k_effective = std::max(populated, 1);

  if (ledger != nullptr) {
    ledger->record({mechanism_id, epsilon_c, delta_c, CompositionMode::kBasic, ""});
  }
  return cc;
}

}  // namespace urania
