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

#ifndef URANIA_HIERARCHY_HPP_
#define URANIA_HIERARCHY_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "urania/embedding/embedder.hpp"
#include "urania/llm/client.hpp"
#include "urania/pipeline.hpp"

namespace urania {

// Two-level organization of released base summaries. Built purely from
// ClusterRelease fields, so it is post-processing of DP outputs and spends
// no budget.
struct HierarchyNode {
  enum class Level { kTop, kBase };
  Level level = Level::kBase;
  std::string name;
  std::string summary;           // base only
  std::vector<int> children;     // top only: indices into the base list
  std::int64_t size = 0;         // noisy size (base) / sum of children (top)
  std::vector<std::string> keywords;  // base only
  std::pair<double, double> coords{0.0, 0.0};  // 2-D projection for plotting
};

// Six steps: embed base topic+description texts; k-means into k_top groups;
// LLM-name each group; LLM-deduplicate the names; re-assign each base to
// the nearest final-name embedding; rename each group from its final
// membership. Naming failures fall back to the three most frequent member
// keywords joined by "/".
std::vector<HierarchyNode> build_hierarchy(const std::vector<ClusterRelease>& base_releases,
                                           int k_top, llm::LlmClient& llm,
                                           emb::Embedder& embedder, std::uint64_t seed);

// Default group count, roughly one top cluster per 57 bases.
int default_k_top(std::size_t n_bases);

nlohmann::json hierarchy_to_json(const std::vector<HierarchyNode>& nodes);

// Stable JSON export (top and base arrays ordered by size desc, name asc);
// re-exporting the same nodes yields a byte-identical file.
void export_hierarchy(const std::vector<HierarchyNode>& nodes,
                      const std::filesystem::path& path);

}  // namespace urania

#endif  // URANIA_HIERARCHY_HPP_
