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

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "urania/hierarchy.hpp"
#include "urania/llm/mock_client.hpp"
#include "urania/synthetic.hpp"
#include "urania/text.hpp"

using namespace urania;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Base releases over the planted topics: `per_topic` releases per topic,
// each naming a topic keyword pair.
std::vector<ClusterRelease> topic_releases(int per_topic) {
  std::vector<ClusterRelease> releases;
  int index = 0;
  for (const auto& topic : default_topics()) {
    for (int i = 0; i < per_topic; ++i) {
      ClusterRelease r;
      r.cluster_index = index++;
      r.noisy_size = 100 + 7 * i + static_cast<int>(topic.name.size());
      r.keywords = {topic.vocab[i % topic.vocab.size()],
                    topic.vocab[(i + 1) % topic.vocab.size()],
                    topic.vocab[(i + 2) % topic.vocab.size()]};
      r.topic = topic.vocab[i % topic.vocab.size()] + " and " +
                topic.vocab[(i + 1) % topic.vocab.size()];
      r.description = "This cluster groups conversations about " + topic.vocab[0] + " and " +
                      topic.vocab[(i + 2) % topic.vocab.size()] + ".";
      releases.push_back(std::move(r));
    }
  }
  return releases;
}

int count_tops(const std::vector<HierarchyNode>& nodes) {
  int tops = 0;
  for (const auto& n : nodes) {
    if (n.level == HierarchyNode::Level::kTop) ++tops;
  }
  return tops;
}

}  // namespace

TEST_CASE("40 bases into 4 top groups: every base assigned exactly once") {
  auto releases = topic_releases(8);  // 40 bases over 5 topics
  llm::MockLlm mock(1);
  emb::MockEmbedder embedder(1, 8);
  auto nodes = build_hierarchy(releases, 4, mock, embedder, 3);

  int tops = count_tops(nodes);
  CHECK(tops >= 1);
  CHECK(tops <= 4);

  std::set<int> assigned;
  std::size_t assigned_total = 0;
  for (const auto& n : nodes) {
    if (n.level != HierarchyNode::Level::kTop) continue;
    CHECK_FALSE(n.name.empty());
    for (int child : n.children) {
      CHECK(assigned.insert(child).second);  // exactly one parent
      ++assigned_total;
    }
  }
  CHECK(assigned_total == releases.size());  // partition property
}

TEST_CASE("k_top equal to the number of bases still partitions") {
  auto releases = topic_releases(1);  // 5 bases
  llm::MockLlm mock(2);
  emb::MockEmbedder embedder(2, 8);
  auto nodes = build_hierarchy(releases, 5, mock, embedder, 9);
  std::size_t assigned = 0;
  for (const auto& n : nodes) {
    if (n.level == HierarchyNode::Level::kTop) assigned += n.children.size();
  }
  CHECK(assigned == releases.size());
}

TEST_CASE("identical base summaries share a parent") {
  std::vector<ClusterRelease> releases;
  for (int i = 0; i < 6; ++i) {
    ClusterRelease r;
    r.cluster_index = i;
    r.noisy_size = 50;
    r.keywords = {i < 3 ? "cooking" : "flights"};
    r.topic = i < 3 ? "Cooking" : "Flights";
    r.description = i < 3 ? "All about cooking and recipes and baking."
                          : "All about flights and hotels and luggage.";
    releases.push_back(std::move(r));
  }
  llm::MockLlm mock(3);
  emb::MockEmbedder embedder(3, 16);
  auto nodes = build_hierarchy(releases, 2, mock, embedder, 4);

  std::map<int, int> parent_of;
  int top_index = 0;
  for (const auto& n : nodes) {
    if (n.level != HierarchyNode::Level::kTop) continue;
    for (int child : n.children) parent_of[child] = top_index;
    ++top_index;
  }
  CHECK(parent_of.at(0) == parent_of.at(1));
  CHECK(parent_of.at(1) == parent_of.at(2));
  CHECK(parent_of.at(3) == parent_of.at(4));
  CHECK(parent_of.at(4) == parent_of.at(5));
}

TEST_CASE("top node sizes sum their children's noisy sizes") {
  auto releases = topic_releases(3);
  llm::MockLlm mock(5);
  emb::MockEmbedder embedder(5, 8);
  auto nodes = build_hierarchy(releases, 3, mock, embedder, 21);
  for (const auto& n : nodes) {
    if (n.level != HierarchyNode::Level::kTop) continue;
    std::int64_t expected = 0;
    for (int child : n.children) expected += releases[child].noisy_size;
    CHECK(n.size == expected);
  }
}

TEST_CASE("naming failures fall back to frequent member keywords") {
  auto releases = topic_releases(2);
  llm::MockLlm inner(1);
  llm::LambdaLlm no_names([&](const llm::CompletionRequest& req) -> std::string {
    if (req.template_name == "hierarchy_name") return "no tags whatsoever";
    if (req.template_name == "hierarchy_dedup") return "not json";
    return inner.complete(req);
  });
  emb::MockEmbedder embedder(6, 8);
  auto nodes = build_hierarchy(releases, 2, no_names, embedder, 8);
  for (const auto& n : nodes) {
    if (n.level != HierarchyNode::Level::kTop) continue;
    CHECK_FALSE(n.name.empty());
    CHECK(n.name.find('/') != std::string::npos);  // "kw1/kw2/kw3" fallback
  }
}

TEST_CASE("hierarchy is pure post-processing: no release content beyond inputs") {
  // Canary: dataset-style ids do not exist anywhere in the input releases,
  // so they cannot appear anywhere in the output either.
  auto releases = topic_releases(4);
  llm::MockLlm mock(9);
  emb::MockEmbedder embedder(9, 8);
  auto nodes = build_hierarchy(releases, 3, mock, embedder, 2);
  std::string dumped = hierarchy_to_json(nodes).dump();
  CHECK(dumped.find("syn-0") == std::string::npos);
  CHECK(dumped.find("conv-") == std::string::npos);

  // Every word of every node name comes from the inputs the builder saw.
  std::set<std::string> input_words;
  for (const auto& r : releases) {
    for (const auto& t : tokenize(r.topic + " " + r.description)) input_words.insert(t);
    for (const auto& kw : r.keywords) {
      for (const auto& t : tokenize(kw)) input_words.insert(t);
    }
  }
  for (const auto& n : nodes) {
    for (const auto& t : tokenize(n.name)) {
      CHECK(input_words.count(t) == 1);
    }
  }
}

TEST_CASE("export is stable: re-exporting the same nodes is byte-identical") {
  auto releases = topic_releases(3);
  llm::MockLlm mock(4);
  emb::MockEmbedder embedder(4, 8);
  auto nodes = build_hierarchy(releases, 3, mock, embedder, 5);

  auto dir = fs::temp_directory_path() /
             ("urania_hier_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  export_hierarchy(nodes, dir / "a.json");
  export_hierarchy(nodes, dir / "b.json");

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  };
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

  json doc = json::parse(slurp(dir / "a.json"));
  CHECK(doc.contains("top"));
  CHECK(doc.contains("base"));
  CHECK(doc["base"].size() == releases.size());
  // Ordering: size desc, name asc.
  for (std::size_t i = 1; i < doc["base"].size(); ++i) {
    auto prev = doc["base"][i - 1]["noisy_size"].get<std::int64_t>();
    auto cur = doc["base"][i]["noisy_size"].get<std::int64_t>();
    CHECK(prev >= cur);
  }
  fs::remove_all(dir);
}

TEST_CASE("exported children indices refer to the ordered base array") {
  auto releases = topic_releases(2);
  llm::MockLlm mock(8);
  emb::MockEmbedder embedder(8, 8);
  auto nodes = build_hierarchy(releases, 2, mock, embedder, 14);
  json doc = hierarchy_to_json(nodes);
  std::set<int> seen;
  for (const auto& top : doc["top"]) {
    for (const auto& child : top["children"]) {
      int idx = child.get<int>();
      CHECK(idx >= 0);
      CHECK(idx < static_cast<int>(doc["base"].size()));
      CHECK(seen.insert(idx).second);
    }
  }
  CHECK(seen.size() == doc["base"].size());
}

TEST_CASE("preconditions") {
  llm::MockLlm mock(1);
  emb::MockEmbedder embedder(1, 8);
  std::vector<ClusterRelease> empty;
  CHECK_THROWS_AS(build_hierarchy(empty, 2, mock, embedder, 1), ParameterError);
  auto releases = topic_releases(1);
  CHECK_THROWS_AS(build_hierarchy(releases, 0, mock, embedder, 1), ParameterError);
  CHECK_THROWS_AS(build_hierarchy(releases, 99, mock, embedder, 1), ParameterError);
  CHECK_THROWS_AS(export_hierarchy({}, "unused.json"), ParameterError);

  CHECK(default_k_top(40) == 2);
  CHECK(default_k_top(400) == 8);
  CHECK(default_k_top(1) == 1);
  CHECK(default_k_top(2) == 2);
}
