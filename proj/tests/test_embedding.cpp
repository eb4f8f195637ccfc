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

#include <cmath>
#include <filesystem>
#include <random>

#include <doctest.h>

#include "urania/embedding/embedder.hpp"
#include "urania/embedding/facets.hpp"
#include "urania/llm/mock_client.hpp"

using namespace urania;
using namespace urania::emb;
namespace fs = std::filesystem;

namespace {

Conversation make_conv(const std::string& id, const std::string& user_text) {
  return {id, {{Role::kUser, user_text}}, ""};
}

fs::path fresh_temp_dir(const std::string& tag) {
  auto dir = fs::temp_directory_path() /
             ("urania_test_" + tag + "_" + std::to_string(std::random_device{}()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// The facet JSON the job-interview example expects, in the single-quoted
// style models copy from the prompt.
const char* kJobInterviewFacets = R"(
{
  'Topics': ['Job Interviews', 'Behavioral Questions', 'Stress Management'],
  'Subtopics': ['Handling difficult questions', 'Managing anxiety during interviews', 'Tips for preparation'],
  'Intent': 'Seeking advice',
  'Entities': ['job interview', 'behavioral questions'],
  'Keywords': ['job preparation', 'nerves', 'behavioral interview tips'],
  'Summary': 'The user is seeking advice on preparing for behavioral questions and managing stress during job interviews.',
}
)";

}  // namespace

TEST_CASE("extract_facets parses the job-interview example output") {
  llm::CannedLlm mock(
      std::map<std::string, std::string>{{"extract_facets", kJobInterviewFacets}});
  auto conv = make_conv("c1",
                        "I'm having a hard time preparing for job interviews. How do I answer "
                        "behavioral questions? I also get nervous.");
  auto facets = extract_facets(conv, mock);
  REQUIRE(facets.has_value());
  CHECK(facets->summary ==
        "The user is seeking advice on preparing for behavioral questions and managing stress "
        "during job interviews.");
  CHECK(facets->topics.size() == 3);
  CHECK(facets->intent == "Seeking advice");
}

TEST_CASE("extract_facets passes through a fixed mock JSON") {
  llm::CannedLlm mock(std::map<std::string, std::string>{
      {"extract_facets", R"({"Summary": "Short fixed summary.", "Topics": ["x"]})"}});
  auto facets = extract_facets(make_conv("c1", "anything"), mock);
  REQUIRE(facets.has_value());
  CHECK(facets->summary == "Short fixed summary.");
}

TEST_CASE("prose twice yields a skip marker") {
  llm::CannedLlm mock(std::map<std::string, std::string>{
      {"extract_facets", "I am sorry, I cannot help with that."}});
  CHECK_FALSE(extract_facets(make_conv("c1", "hi"), mock).has_value());
}

TEST_CASE("empty conversation is a parameter error") {
  llm::MockLlm mock;
  Conversation conv{"c1", {}, ""};
  CHECK_THROWS_AS(extract_facets(conv, mock), ParameterError);
}

TEST_CASE("mock embedder returns unit vectors, deterministic per text") {
  MockEmbedder embedder(5, 64);
  auto v1 = embedder.embed("cooking recipes and baking");
  auto v2 = embedder.embed("cooking recipes and baking");
  CHECK(v1 == v2);

  double norm2 = 0.0;
  for (float x : v1) norm2 += static_cast<double>(x) * x;
  CHECK(std::fabs(std::sqrt(norm2) - 1.0) < 1e-6);

  auto v3 = embedder.embed("flights hotels and luggage fees");
  double cos = cosine(v1, v3);
  CHECK(cos < 0.999);
  CHECK(cos >= -1.0);
  CHECK(cos <= 1.0);
}

TEST_CASE("token overlap raises mock cosine") {
  MockEmbedder embedder(5, 128);
  auto a = embedder.embed("cooking recipes baking flavors");
  auto b = embedder.embed("cooking recipes baking spices");
  auto c = embedder.embed("passport luggage museums flights");
  CHECK(cosine(a, b) > cosine(a, c) + 0.2);
}

TEST_CASE("caching embedder serves repeats without provider calls") {
  MockEmbedder inner(9, 32);
  CachingEmbedder cached(inner, std::nullopt);
  auto v1 = cached.embed("some text");
  int calls_after_first = inner.calls();
  auto v2 = cached.embed("some text");
  CHECK(inner.calls() == calls_after_first);
  CHECK(v1 == v2);
}

TEST_CASE("disk cache reloads bit-exact vectors across instances") {
  auto dir = fresh_temp_dir("cache");
  MockEmbedder inner(13, 48);
  std::vector<float> original;
  {
    CachingEmbedder cached(inner, dir);
    original = cached.embed("persist me");
    cached.flush();
  }
  int calls_before = inner.calls();
  {
    CachingEmbedder cached(inner, dir);
    auto reloaded = cached.embed("persist me");
    CHECK(inner.calls() == calls_before);  // served from disk
    CHECK(reloaded == original);
  }
  fs::remove_all(dir);
}

TEST_CASE("embed_dataset embeds every parseable conversation") {
  llm::MockLlm mock;
  MockEmbedder embedder(3, 32);
  std::vector<Conversation> dataset = {
      make_conv("a", "cooking recipes cooking recipes baking"),
      make_conv("b", "flights hotels flights hotels luggage"),
      make_conv("c", "algebra homework algebra homework essay"),
  };
  auto out = embed_dataset(dataset, mock, embedder, 2);
  CHECK(out.vectors.size() == 3);
  CHECK(out.skipped_ids.empty());
  CHECK(out.summaries.size() == 3);
}

TEST_CASE("non-English conversations are skipped, not embedded") {
  llm::MockLlm mock;
  MockEmbedder embedder(3, 32);
  std::vector<Conversation> dataset = {
      make_conv("a", "cooking recipes baking dinner tonight"),
      make_conv("b", "\xD0\xBF\xD1\x80\xD0\xB8\xD0\xB2\xD0\xB5\xD1\x82 "
                     "\xD0\xBC\xD0\xB8\xD1\x80 \xD0\xBA\xD0\xB0\xD0\xBA "
                     "\xD0\xB4\xD0\xB5\xD0\xBB\xD0\xB0"),
      make_conv("c", "flights hotels luggage booking advice"),
  };
  auto out = embed_dataset(dataset, mock, embedder, 1);
  CHECK(out.vectors.size() == 2);
  REQUIRE(out.skipped_ids.size() == 1);
  CHECK(out.skipped_ids[0] == "b");
}

TEST_CASE("warm cache re-run makes zero provider calls") {
  llm::MockLlm mock;
  MockEmbedder inner(3, 32);
  CachingEmbedder cached(inner, std::nullopt);
  std::vector<Conversation> dataset = {
      make_conv("a", "cooking recipes baking"),
      make_conv("b", "flights hotels luggage"),
  };
  embed_dataset(dataset, mock, cached, 1);
  int calls = inner.calls();
  embed_dataset(dataset, mock, cached, 1);
  CHECK(inner.calls() == calls);
}

TEST_CASE("per-record purity: adding a record changes nothing for the others") {
  llm::MockLlm mock;
  MockEmbedder embedder(21, 32);
  std::vector<Conversation> small = {
      make_conv("a", "cooking recipes baking flavors dinner"),
      make_conv("b", "flights hotels luggage booking advice"),
  };
  auto base = embed_dataset(small, mock, embedder, 1);

  auto larger = small;
  larger.push_back(make_conv("z", "python debugging compiler database"));
  auto extended = embed_dataset(larger, mock, embedder, 1);

  for (const auto& [id, vec] : base.vectors) {
    REQUIRE(extended.vectors.count(id) == 1);
    CHECK(extended.vectors.at(id) == vec);  // bit-exact
    CHECK(extended.summaries.at(id) == base.summaries.at(id));
  }
}

TEST_CASE("all stored vectors are unit norm") {
  llm::MockLlm mock;
  MockEmbedder embedder(17, 48);
  auto dataset = std::vector<Conversation>{
      make_conv("a", "cooking recipes baking"),
      make_conv("b", "flights hotels luggage"),
      make_conv("c", "algebra geometry equations"),
  };
  auto out = embed_dataset(dataset, mock, embedder, 2);
  for (const auto& [_, vec] : out.vectors) {
    double norm2 = 0.0;
    for (float x : vec) norm2 += static_cast<double>(x) * x;
    CHECK(std::fabs(std::sqrt(norm2) - 1.0) < 1e-6);
  }
}
