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

#include "urania/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "urania/clustering.hpp"
#include "urania/text.hpp"

namespace urania {

using nlohmann::json;

namespace {

std::string base_text(const ClusterRelease& release) {
  std::string text = release.topic;
  if (!release.description.empty()) text += ". " + release.description;
  return text;
}

std::string fallback_name(const std::vector<const ClusterRelease*>& members) {
  std::vector<std::string> kws;
  for (const auto* m : members) {
    for (const auto& kw : m->keywords) kws.push_back(kw);
  }
  auto top = top_frequent(kws, 3);
  return top.empty() ? "miscellaneous" : join(top, "/");
}

std::string name_group(const std::vector<const ClusterRelease*>& members,
                       llm::LlmClient& llm) {
  std::vector<std::string> lines;
  lines.reserve(members.size());
  for (const auto* m : members) lines.push_back("- " + base_text(*m));
  std::map<std::string, std::string> bindings{{"summaries", join(lines, "\n")}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      std::string raw = llm::complete_template(llm, llm::TemplateId::kHierarchyName, bindings);
      std::string name = llm::parse_tagged(raw, "name");
      if (!name.empty()) return name;
    } catch (const ParseError&) {
    }
  }
  return fallback_name(members);
}

// Deterministic 2-D projection: principal components by power iteration,
// sign fixed so the first nonzero loading is positive.
std::vector<std::pair<double, double>> pca2(const Matrix& points) {
  std::size_t n = points.size();
  std::vector<std::pair<double, double>> coords(n, {0.0, 0.0});
  if (n == 0) return coords;
  std::size_t dim = points[0].size();

  std::vector<double> mean(dim, 0.0);
  for (const auto& p : points) {
    for (std::size_t d = 0; d < dim; ++d) mean[d] += p[d];
  }
  for (auto& m : mean) m /= static_cast<double>(n);

  std::vector<std::vector<double>> centered(n, std::vector<double>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) centered[i][d] = points[i][d] - mean[d];
  }

  auto extract_component = [&](std::vector<double>& component) {
    std::vector<double> v(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) v[d] = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int iter = 0; iter < 30; ++iter) {
      // v <- X^T X v, normalized.
      std::vector<double> next(dim, 0.0);
      for (const auto& row : centered) {
        double proj = std::inner_product(row.begin(), row.end(), v.begin(), 0.0);
        for (std::size_t d = 0; d < dim; ++d) next[d] += proj * row[d];
      }
      double norm = std::sqrt(std::inner_product(next.begin(), next.end(), next.begin(), 0.0));
      if (norm < 1e-12) break;
      for (std::size_t d = 0; d < dim; ++d) v[d] = next[d] / norm;
    }
    for (std::size_t d = 0; d < dim; ++d) {
      if (std::fabs(v[d]) > 1e-12) {
        if (v[d] < 0.0) {
          for (auto& x : v) x = -x;
        }
        break;
      }
    }
    component = v;
  };

  std::vector<double> pc1, pc2;
  extract_component(pc1);
  // Deflate and repeat for the second component.
  for (auto& row : centered) {
    double proj = std::inner_product(row.begin(), row.end(), pc1.begin(), 0.0);
    for (std::size_t d = 0; d < dim; ++d) row[d] -= proj * pc1[d];
  }
  extract_component(pc2);

  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0, y = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      double c = points[i][d] - mean[d];
      x += c * pc1[d];
      y += c * pc2[d];
    }
    coords[i] = {x, y};
  }
  return coords;
}

}  // namespace

int default_k_top(std::size_t n_bases) {
  auto k = std::max<int>(2, static_cast<int>((n_bases + 56) / 57));
  return std::min<int>(k, std::max<int>(1, static_cast<int>(n_bases)));
}

std::vector<HierarchyNode> build_hierarchy(const std::vector<ClusterRelease>& base_releases,
                                           int k_top, llm::LlmClient& llm,
                                           emb::Embedder& embedder, std::uint64_t seed) {
  if (base_releases.empty()) throw ParameterError("build_hierarchy: no base releases");
  if (k_top < 1 || static_cast<std::size_t>(k_top) > base_releases.size()) {
    throw ParameterError("build_hierarchy: k_top must lie in [1, #bases]");
  }

  // Step 1: embed base summaries.
  Matrix base_vecs;
  std::vector<std::string> base_ids;
  base_vecs.reserve(base_releases.size());
  for (std::size_t i = 0; i < base_releases.size(); ++i) {
    base_vecs.push_back(embedder.embed(base_text(base_releases[i])));
    base_ids.push_back(std::to_string(i));
  }

  // Step 2: group the bases.
  auto [centers, assignment] = kmeans(base_ids, base_vecs, k_top, 50, seed);
  std::vector<std::vector<int>> groups(k_top);
  for (std::size_t i = 0; i < base_releases.size(); ++i) {
    groups[assignment.cluster_of.at(base_ids[i])].push_back(static_cast<int>(i));
  }

  // Step 3: name each non-empty group.
  std::vector<std::string> names;
  for (const auto& group : groups) {
    if (group.empty()) continue;
    std::vector<const ClusterRelease*> members;
    for (int idx : group) members.push_back(&base_releases[idx]);
    names.push_back(name_group(members, llm));
  }

  // Step 4: deduplicate / refine the names.
  std::vector<std::string> final_names;
  try {
    auto raw = llm::complete_template(llm, llm::TemplateId::kHierarchyDedup,
                                      {{"names_json", json(names).dump(2)}});
    final_names = llm::parse_string_list(raw);
  } catch (const ParseError&) {
    final_names = names;
  }
  {
    std::vector<std::string> cleaned;
    std::set<std::string> seen;
    for (const auto& n : final_names) {
      std::string t = trim(n);
      if (!t.empty() && seen.insert(to_lower(t)).second) cleaned.push_back(t);
    }
    final_names = cleaned.empty() ? names : cleaned;
  }

  // Step 5: each final name becomes a center; re-assign every base to the
  // nearest name embedding.
  Matrix name_vecs;
  name_vecs.reserve(final_names.size());
  for (const auto& name : final_names) name_vecs.push_back(embedder.embed(name));
  ClusterCenters name_centers;
  name_centers.k_requested = static_cast<int>(final_names.size());
  for (const auto& v : name_vecs) {
    name_centers.centers.emplace_back(v.begin(), v.end());
  }
  auto final_assignment = assign_indices(base_vecs, name_centers);

  std::vector<std::vector<int>> final_groups(final_names.size());
  for (std::size_t i = 0; i < base_releases.size(); ++i) {
    final_groups[final_assignment[i]].push_back(static_cast<int>(i));
  }

  // Step 6: rename each top cluster from its final membership.
  std::vector<HierarchyNode> nodes;
  auto base_coords = pca2(base_vecs);

  for (std::size_t g = 0; g < final_groups.size(); ++g) {
    if (final_groups[g].empty()) continue;
    std::vector<const ClusterRelease*> members;
    for (int idx : final_groups[g]) members.push_back(&base_releases[idx]);

    HierarchyNode top;
    top.level = HierarchyNode::Level::kTop;
    top.name = name_group(members, llm);
    top.children = final_groups[g];
    top.size = 0;
    double cx = 0.0, cy = 0.0;
    for (int idx : final_groups[g]) {
      top.size += base_releases[idx].noisy_size;
      cx += base_coords[idx].first;
      cy += base_coords[idx].second;
    }
    top.coords = {cx / final_groups[g].size(), cy / final_groups[g].size()};
    nodes.push_back(std::move(top));
  }

  for (std::size_t i = 0; i < base_releases.size(); ++i) {
    HierarchyNode base;
    base.level = HierarchyNode::Level::kBase;
    base.name = base_releases[i].topic;
    base.summary = base_releases[i].description;
    base.keywords = base_releases[i].keywords;
    base.size = base_releases[i].noisy_size;
    base.coords = base_coords[i];
    nodes.push_back(std::move(base));
  }
  return nodes;
}

json hierarchy_to_json(const std::vector<HierarchyNode>& nodes) {
  // Split and order: size desc, then name asc. Children indices are
  // rewritten to positions in the ordered base array.
  std::vector<const HierarchyNode*> tops;
  std::vector<const HierarchyNode*> bases;
  std::vector<std::size_t> base_original_index;
  for (const auto& node : nodes) {
    if (node.level == HierarchyNode::Level::kTop) {
      tops.push_back(&node);
    } else {
      base_original_index.push_back(bases.size());
      bases.push_back(&node);
    }
  }
  auto by_size_name = [](const HierarchyNode* a, const HierarchyNode* b) {
    if (a->size != b->size) return a->size > b->size;
    return a->name < b->name;
  };
  std::vector<std::size_t> base_order(bases.size());
  std::iota(base_order.begin(), base_order.end(), 0u);
  std::sort(base_order.begin(), base_order.end(), [&](std::size_t a, std::size_t b) {
    return by_size_name(bases[a], bases[b]);
  });
  std::vector<int> base_position(bases.size());
  for (std::size_t pos = 0; pos < base_order.size(); ++pos) {
    base_position[base_order[pos]] = static_cast<int>(pos);
  }
  std::sort(tops.begin(), tops.end(), by_size_name);

  json top_arr = json::array();
  for (const auto* t : tops) {
    std::vector<int> children;
    children.reserve(t->children.size());
    for (int c : t->children) children.push_back(base_position[c]);
    std::sort(children.begin(), children.end());
    top_arr.push_back({{"name", t->name},
                       {"size", t->size},
                       {"children", children},
                       {"coords", {t->coords.first, t->coords.second}}});
  }
  json base_arr = json::array();
  for (std::size_t pos : base_order) {
    const auto* b = bases[pos];
    base_arr.push_back({{"name", b->name},
                        {"summary", b->summary},
                        {"keywords", b->keywords},
                        {"noisy_size", b->size},
                        {"coords", {b->coords.first, b->coords.second}}});
  }
  return json{{"top", top_arr}, {"base", base_arr}};
}

void export_hierarchy(const std::vector<HierarchyNode>& nodes,
                      const std::filesystem::path& path) {
  if (nodes.empty()) throw ParameterError("export_hierarchy: no nodes");
  std::ofstream out(path);
  if (!out) throw IoError("export_hierarchy: cannot write " + path.string());
  out << hierarchy_to_json(nodes).dump(1) << "\n";
  if (!out) throw IoError("export_hierarchy: write failed for " + path.string());
}

}  // namespace urania
