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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "urania/clustering.hpp"

using namespace urania;

namespace {

std::vector<std::string> index_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  return ids;
}

// Gaussian blobs around the given unit-norm means, normalized back onto the
// unit sphere. Returns points and their true blob labels.
struct Blobs {
  Matrix points;
  std::vector<int> labels;
  std::vector<std::vector<double>> means;
};

// Unit-simplex corners e_0 .. e_{k-1} of R^k.
std::vector<std::vector<double>> simplex_means(int k) {
  std::vector<std::vector<double>> means;
  for (int b = 0; b < k; ++b) {
    means.emplace_back(k, 0.0);
    means.back()[b] = 1.0;
  }
  return means;
}

// Regular tetrahedron inscribed in the unit sphere of R^3 (pairwise
// distance sqrt(8/3) ~ 1.63).
std::vector<std::vector<double>> tetrahedron_means() {
  double a = 1.0 / std::sqrt(3.0);
  return {{a, a, a}, {a, -a, -a}, {-a, a, -a}, {-a, -a, a}};
}

Blobs make_blobs(const std::vector<std::vector<double>>& means, int per_blob, double sigma,
                 std::uint64_t seed) {
  Blobs out;
  out.means = means;
  Rng rng(seed);
  auto dim = means[0].size();
  for (std::size_t b = 0; b < means.size(); ++b) {
    for (int i = 0; i < per_blob; ++i) {
      std::vector<float> p(dim, 0.0f);
      for (std::size_t d = 0; d < dim; ++d) {
        p[d] = static_cast<float>(means[b][d] + sigma * rng.gaussian());
      }
      double norm2 = 0.0;
      for (float x : p) norm2 += static_cast<double>(x) * x;
      auto inv = static_cast<float>(1.0 / std::sqrt(norm2));
      for (float& x : p) x *= inv;
      out.points.push_back(std::move(p));
      out.labels.push_back(static_cast<int>(b));
    }
  }
  return out;
}

double center_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d2);
}

// Number of true means matched (greedily, one recovered center each) within
// `tol`.
int recovered_means(const ClusterCenters& centers,
                    const std::vector<std::vector<double>>& means, double tol) {
  std::vector<bool> used(centers.centers.size(), false);
  int hits = 0;
  for (const auto& mean : means) {
    double best = 1e18;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < centers.centers.size(); ++j) {
      if (used[j]) continue;
      double d = center_distance(centers.centers[j], mean);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (best <= tol) {
      used[best_j] = true;
      ++hits;
    }
  }
  return hits;
}

}  // namespace

TEST_CASE("two separated points become their own exact centers") {
  Matrix points = {{1.0f, 0.0f}, {-1.0f, 0.0f}};
  auto [centers, assignment] = kmeans(index_ids(2), points, 2, 20, 1);
  CHECK(recovered_means(centers, {{1.0, 0.0}, {-1.0, 0.0}}, 1e-9) == 2);
  CHECK(assignment.cluster_of.at("p0") != assignment.cluster_of.at("p1"));
}

TEST_CASE("k-means recovers 4 tight blobs at simplex corners for every seed") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto blobs = make_blobs(simplex_means(4), 50, 0.01, 1000 + seed);
    auto [centers, assignment] = kmeans(index_ids(blobs.points.size()), blobs.points, 4, 50, seed);
    CHECK(recovered_means(centers, blobs.means, 0.05) == 4);
  }
}

TEST_CASE("identical points: one populated cluster, ties to the lowest index") {
  Matrix points(6, std::vector<float>{0.5f, 0.5f});
  auto [centers, assignment] = kmeans(index_ids(6), points, 2, 20, 3);
  for (const auto& [_, cluster] : assignment.cluster_of) {
    CHECK(cluster == 0);
  }
  CHECK(centers.k_effective == 1);
}

TEST_CASE("k greater than n is a parameter error") {
  Matrix points = {{0.0f, 1.0f}};
  CHECK_THROWS_AS(kmeans(index_ids(1), points, 2, 10, 1), ParameterError);
}

TEST_CASE("assign matches a brute-force double loop on 1000 random points") {
  Rng rng(77);
  int dim = 8;
  Matrix points;
  for (int i = 0; i < 1000; ++i) {
    std::vector<float> p(dim);
    for (auto& x : p) x = static_cast<float>(rng.gaussian());
    points.push_back(std::move(p));
  }
  ClusterCenters centers;
  centers.k_requested = 10;
  for (int j = 0; j < 10; ++j) {
    std::vector<double> c(dim);
    for (auto& x : c) x = rng.gaussian();
    centers.centers.push_back(std::move(c));
  }

  auto fast = assign_indices(points, centers);
  for (std::size_t i = 0; i < points.size(); ++i) {
    int best = 0;
    double best_d2 = 1e300;
    for (int j = 0; j < 10; ++j) {
      double d2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        double diff = static_cast<double>(points[i][d]) - centers.centers[j][d];
        d2 += diff * diff;
      }
      if (d2 < best_d2) {
        best_d2 = d2;
        best = j;
      }
    }
    REQUIRE(fast[i] == best);
  }
}

TEST_CASE("assignment tie-breaks go to the lowest cluster index") {
  ClusterCenters centers;
  centers.k_requested = 2;
  centers.centers = {{1.0, 0.0}, {-1.0, 0.0}};
  Matrix points = {{0.0f, 0.0f}};  // equidistant
  CHECK(assign_indices(points, centers)[0] == 0);

  Matrix coincident = {{-1.0f, 0.0f}};
  CHECK(assign_indices(coincident, centers)[0] == 1);
}

TEST_CASE("Lloyd objective is non-increasing across iterations") {
  auto blobs = make_blobs(simplex_means(3), 40, 0.2, 5);
  auto ids = index_ids(blobs.points.size());
  double prev = 1e300;
  for (int iters = 1; iters <= 8; ++iters) {
    auto [centers, assignment] = kmeans(ids, blobs.points, 3, iters, 9);
    std::vector<int> idx(blobs.points.size());
    for (std::size_t i = 0; i < ids.size(); ++i) idx[i] = assignment.cluster_of.at(ids[i]);
    double obj = kmeans_objective(blobs.points, centers, idx);
    CHECK(obj <= prev + 1e-9);
    prev = obj;
  }
}

TEST_CASE("DP-Lloyd recovers well-separated blobs at (eps=8, delta=1e-6)") {
  int good_seeds = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto blobs = make_blobs(tetrahedron_means(), 200, 0.02, 2000 + seed);
    auto centers = dp_kmeans(blobs.points, 4, 8.0, 1e-6, 8, seed);
    if (recovered_means(centers, blobs.means, 0.3) >= 3) ++good_seeds;
  }
  CHECK(good_seeds >= 16);  // >= 80% of seeds
}

TEST_CASE("DP-Lloyd with near-infinite budget matches the noiseless limit") {
  auto blobs = make_blobs(tetrahedron_means(), 100, 0.02, 31);
  std::uint64_t seed = 4;
  auto centers = dp_kmeans(blobs.points, 4, 1e6, 1e-6, 8, seed);

  // Noiseless oracle: identical initialization and schedule, zero noise.
  Rng master(seed);
  Rng init_rng = master.split(0);
  auto oracle_centers = random_unit_centers(4, 3, init_rng);
  for (int iter = 0; iter < 8; ++iter) {
    ClusterCenters cc;
    cc.k_requested = 4;
    cc.centers = oracle_centers;
    auto assignment = assign_indices(blobs.points, cc);
    std::vector<std::vector<double>> sums(4, std::vector<double>(3, 0.0));
    std::vector<std::int64_t> counts(4, 0);
    for (std::size_t i = 0; i < blobs.points.size(); ++i) {
      ++counts[assignment[i]];
      for (int d = 0; d < 3; ++d) sums[assignment[i]][d] += blobs.points[i][d];
    }
    Rng iter_rng = master.split(1 + static_cast<std::uint64_t>(iter));
    for (int j = 0; j < 4; ++j) {
      if (counts[j] <= 0) {
        oracle_centers[j] = random_unit_centers(1, 3, iter_rng)[0];
        continue;
      }
      double norm2 = 0.0;
      for (int d = 0; d < 3; ++d) {
        oracle_centers[j][d] = sums[j][d] / static_cast<double>(counts[j]);
        norm2 += oracle_centers[j][d] * oracle_centers[j][d];
      }
      if (norm2 > 1.0) {
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : oracle_centers[j]) x *= inv;
      }
    }
  }
  // Note: the oracle consumes the iteration rng differently (no noise
  // draws), so only compare the final geometry.
  for (int j = 0; j < 4; ++j) {
    CHECK(center_distance(centers.centers[j], oracle_centers[j]) < 1e-2);
  }
}

TEST_CASE("empty clusters get data-independent redraws and the run completes") {
  // 10 requested clusters over one tiny blob: most clusters stay empty.
  auto blobs = make_blobs({tetrahedron_means()[0]}, 30, 0.02, 77);
  auto centers = dp_kmeans(blobs.points, 10, 4.0, 1e-6, 4, 11);
  CHECK(centers.centers.size() == 10);
  CHECK(centers.k_requested == 10);
  for (const auto& c : centers.centers) {
    double norm2 = 0.0;
    for (double x : c) norm2 += x * x;
    CHECK(std::isfinite(norm2));
    CHECK(norm2 <= 1.0 + 1e-9);
  }
}

TEST_CASE("permuting the input rows changes nothing under a fixed seed") {
  auto blobs = make_blobs(simplex_means(3), 60, 0.05, 13);
  auto centers_a = dp_kmeans(blobs.points, 3, 4.0, 1e-6, 6, 99);

  Matrix permuted = blobs.points;
  Rng rng(5);
  for (std::size_t i = permuted.size(); i > 1; --i) {
    std::swap(permuted[i - 1], permuted[rng.below(i)]);
  }
  auto centers_b = dp_kmeans(permuted, 3, 4.0, 1e-6, 6, 99);

  REQUIRE(centers_a.centers.size() == centers_b.centers.size());
  for (std::size_t j = 0; j < centers_a.centers.size(); ++j) {
    CHECK(centers_a.centers[j] == centers_b.centers[j]);  // bit-exact
  }
}

TEST_CASE("dp_kmeans records (epsilon_c, delta_c) in the ledger") {
  auto blobs = make_blobs(simplex_means(2), 30, 0.05, 3);
  PrivacyLedger ledger;
  dp_kmeans(blobs.points, 2, 2.5, 1e-7, 4, 8, &ledger, "urania/dp_kmeans");
  auto report = ledger.report();
  CHECK(report.total_epsilon == 2.5);
  CHECK(report.total_delta == 1e-7);
  REQUIRE(report.breakdown.size() == 1);
  CHECK(report.breakdown[0].mechanism_id == "urania/dp_kmeans");
}

TEST_CASE("dp_kmeans parameter validation") {
  auto blobs = make_blobs(simplex_means(2), 10, 0.05, 3);
  CHECK_THROWS_AS(dp_kmeans(blobs.points, 0, 1.0, 1e-6, 4, 1), ParameterError);
  CHECK_THROWS_AS(dp_kmeans(blobs.points, 2, 0.0, 1e-6, 4, 1), ParameterError);
  CHECK_THROWS_AS(dp_kmeans(blobs.points, 2, 1.0, 0.0, 4, 1), ParameterError);
  CHECK_THROWS_AS(dp_kmeans(blobs.points, 2, 1.0, 1e-6, 0, 1), ParameterError);
}
