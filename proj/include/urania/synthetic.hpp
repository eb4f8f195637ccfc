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

#ifndef URANIA_SYNTHETIC_HPP_
#define URANIA_SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "urania/embedding/facets.hpp"
#include "urania/keywords.hpp"
#include "urania/rng.hpp"

namespace urania {

// A planted topic: a name and a disjoint vocabulary. Generated
// conversations repeat a handful of vocabulary words, which makes the
// planted structure recoverable by clustering and lets tests check released
// keywords against the vocabulary that produced them.
struct TopicSpec {
  std::string name;
  std::vector<std::string> vocab;
};

// Five topics with pairwise-disjoint vocabularies: food, travel, homework,
// health, coding.
const std::vector<TopicSpec>& default_topics();

// The general-topic background mix (food, travel, homework, health).
const std::vector<TopicSpec>& background_topics();

Conversation synthetic_conversation(const TopicSpec& topic, Rng& rng, std::string id);

// per_topic conversations for each topic, ids "<prefix>-NNNN", order
// interleaved by topic then shuffled by the seed.
std::vector<Conversation> synthetic_corpus(const std::vector<TopicSpec>& topics, int per_topic,
                                           std::uint64_t seed,
                                           const std::string& id_prefix = "syn");

// n_background conversations drawn from the background topics.
std::vector<Conversation> background_corpus(int n_background, std::uint64_t seed,
                                            const std::string& id_prefix = "bg");

// A health/medical conversation with a distinctive vocabulary that appears
// nowhere in the background topics.
Conversation sensitive_conversation();

// Keyword set containing every planted vocabulary word (public provenance);
// the natural predefined set for experiments on the synthetic corpora.
KeywordSet planted_keyword_set(const std::vector<TopicSpec>& topics);

}  // namespace urania

#endif  // URANIA_SYNTHETIC_HPP_
