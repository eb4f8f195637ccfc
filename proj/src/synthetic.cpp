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

#include "urania/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "urania/text.hpp"

namespace urania {
namespace {

std::vector<std::string> pick_words(const std::vector<std::string>& vocab, std::size_t n,
                                    Rng& rng) {
  std::vector<std::string> pool = vocab;
  n = std::min(n, pool.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

}  // namespace

const std::vector<TopicSpec>& default_topics() {
  static const std::vector<TopicSpec> topics = {
      {"food",
       {"cooking", "recipes", "baking", "ingredients", "nutrition", "flavors", "cuisine",
        "dessert", "spices", "kitchen"}},
      {"travel",
       {"flights", "hotels", "itinerary", "destinations", "passport", "sightseeing", "luggage",
        "tourism", "beaches", "museums"}},
      {"homework",
       {"homework", "algebra", "essay", "grammar", "geometry", "assignment", "exam", "thesis",
        "citations", "equations"}},
      {"health",
       {"fitness", "exercise", "sleep", "stress", "diet", "symptoms", "headache", "therapy",
        "hydration", "posture"}},
      {"coding",
       {"python", "debugging", "compiler", "database", "javascript", "algorithm", "frontend",
        "deployment", "refactoring", "typescript"}},
  };
  return topics;
}

const std::vector<TopicSpec>& background_topics() {
  static const std::vector<TopicSpec> topics(default_topics().begin(),
                                             default_topics().begin() + 4);
  return topics;
}

Conversation synthetic_conversation(const TopicSpec& topic, Rng& rng, std::string id) {
  // Eight vocabulary words, each used exactly twice: frequency lifts them
  // above the one-off filler words in any frequency-based summary.
  auto w = pick_words(topic.vocab, 8, rng);
  while (w.size() < 8) w.push_back(topic.vocab[rng.below(topic.vocab.size())]);

  Conversation conv;
  conv.id = std::move(id);
  conv.messages.push_back(
      {Role::kUser, "I need advice about " + w[0] + ", " + w[1] + ", and " + w[2] +
                        ". What should I know about " + w[3] + ", " + w[4] + ", and " + w[5] +
                        " before getting into " + w[6] + " or even " + w[7] + "?"});
  conv.messages.push_back(
      {Role::kAssistant, "Start with " + w[0] + " and " + w[1] + "; most guides cover " + w[2] +
                             " and " + w[3] + " early on. For " + w[4] + " and " + w[5] +
                             ", compare notes on " + w[6] + ", then revisit " + w[7] +
                             " later."});
  return conv;
}

std::vector<Conversation> synthetic_corpus(const std::vector<TopicSpec>& topics, int per_topic,
                                           std::uint64_t seed, const std::string& id_prefix) {
  if (topics.empty() || per_topic < 1) {
    throw ParameterError("synthetic_corpus: need at least one topic and one conversation");
  }
  Rng rng(seed);
  std::vector<Conversation> out;
  out.reserve(topics.size() * static_cast<std::size_t>(per_topic));
  int counter = 0;
  for (int i = 0; i < per_topic; ++i) {
    for (const auto& topic : topics) {
      char idbuf[32];
      std::snprintf(idbuf, sizeof idbuf, "-%05d", counter++);
      out.push_back(synthetic_conversation(topic, rng, id_prefix + idbuf));
    }
  }
  // Shuffle so ids carry no topic information.
  for (std::size_t i = out.size(); i > 1; --i) {
    std::swap(out[i - 1], out[rng.below(i)]);
  }
  return out;
}

std::vector<Conversation> background_corpus(int n_background, std::uint64_t seed,
                                            const std::string& id_prefix) {
  if (n_background < 1) throw ParameterError("background_corpus: need at least one record");
  Rng rng(seed);
  const auto& topics = background_topics();
  std::vector<Conversation> out;
  out.reserve(static_cast<std::size_t>(n_background));
  for (int i = 0; i < n_background; ++i) {
    char idbuf[32];
    std::snprintf(idbuf, sizeof idbuf, "-%05d", i);
    const auto& topic = topics[rng.below(topics.size())];
    out.push_back(synthetic_conversation(topic, rng, id_prefix + idbuf));
  }
  return out;
}

Conversation sensitive_conversation() {
  Conversation conv;
  conv.id = "sensitive-00000";
  conv.messages.push_back(
      {Role::kUser,
       "I was recently diagnosed with glioblastoma and my oncologist recommended chemotherapy. "
       "What should I ask the oncologist about chemotherapy and radiotherapy before the biopsy "
       "results come back?"});
  conv.messages.push_back(
      {Role::kAssistant,
       "A glioblastoma diagnosis is serious, and your oncologist is the right person to walk "
       "you through it. Ask how chemotherapy and radiotherapy would be sequenced, and what the "
       "biopsy findings mean for prognosis."});
  return conv;
}

KeywordSet planted_keyword_set(const std::vector<TopicSpec>& topics) {
  KeywordSet set;
  for (const auto& topic : topics) {
    for (const auto& word : topic.vocab) {
      set.keywords.push_back(normalize_keyword(word));
    }
  }
  std::sort(set.keywords.begin(), set.keywords.end());
  set.keywords.erase(std::unique(set.keywords.begin(), set.keywords.end()), set.keywords.end());
  set.provenance = KwProvenance::kPublic;
  set.target_size = std::max<int>(1, static_cast<int>(set.keywords.size()));
  set.validate();
  return set;
}

}  // namespace urania
