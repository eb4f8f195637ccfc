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

#ifndef URANIA_EMBEDDING_FACETS_HPP_
#define URANIA_EMBEDDING_FACETS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urania/embedding/embedder.hpp"
#include "urania/llm/client.hpp"

namespace urania {

enum class Role { kUser, kAssistant };

struct Message {
  Role role = Role::kUser;
  std::string content;
};

// One user<->assistant dialogue; the privacy unit of the whole system.
struct Conversation {
  std::string id;
  std::vector<Message> messages;
  std::string language_hint;
};

std::string flatten_conversation(const Conversation& conv);

}  // namespace urania

namespace urania::emb {

// Structured description extracted from one conversation. Only the summary
// is embedded downstream.
struct FacetRecord {
  std::vector<std::string> topics;
  std::vector<std::string> subtopics;
  std::string intent;
  std::vector<std::string> entities;
  std::vector<std::string> keywords;
  std::string summary;
};

// Asks the model for the facet JSON and parses it; one retry with a
// reminder on parse failure. Returns nullopt (a skip marker) for
// conversations the model refuses to describe, e.g. non-English input;
// skipped records are excluded from everything downstream.
std::optional<FacetRecord> extract_facets(const Conversation& conv, llm::LlmClient& llm);

struct DatasetEmbeddings {
  // One unit vector per non-skipped conversation, keyed by id.
  std::map<std::string, std::vector<float>> vectors;
  // Facet summaries, same keys; the pipeline reuses them for keyword
  // selection and cluster summarization.
  std::map<std::string, std::string> summaries;
  std::vector<std::string> skipped_ids;
};

// Facet extraction + embedding for a whole dataset. Each record is
// processed independently of every other record (required by the privacy
// argument), so the fan-out over `workers` threads cannot change results.
// Warns when more than half the dataset is skipped.
DatasetEmbeddings embed_dataset(const std::vector<Conversation>& dataset, llm::LlmClient& llm,
                                Embedder& embedder, int workers = 1);

}  // namespace urania::emb

#endif  // URANIA_EMBEDDING_FACETS_HPP_
