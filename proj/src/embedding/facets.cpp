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

#include "urania/embedding/facets.hpp"

#include <nlohmann/json.hpp>

#include "urania/parallel.hpp"
#include "urania/text.hpp"

namespace urania {

std::string flatten_conversation(const Conversation& conv) {
  std::vector<std::string> lines;
  lines.reserve(conv.messages.size());
  for (const auto& msg : conv.messages) {
    lines.push_back((msg.role == Role::kUser ? "User: " : "Assistant: ") + msg.content);
  }
  return join(lines, "\n");
}

}  // namespace urania

namespace urania::emb {

using nlohmann::json;

namespace {

std::vector<std::string> read_string_array(const json& obj, const std::string& key) {
  std::vector<std::string> out;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (to_lower(it.key()) != key) continue;
    if (it->is_array()) {
      for (const auto& x : *it) {
        if (x.is_string()) out.push_back(x.get<std::string>());
      }
    } else if (it->is_string()) {
      out.push_back(it->get<std::string>());
    }
    break;
  }
  return out;
}

std::string read_string(const json& obj, const std::string& key) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (to_lower(it.key()) == key && it->is_string()) return it->get<std::string>();
  }
  return {};
}

std::optional<FacetRecord> parse_facets(const std::string& raw) {
  json obj;
  try {
    obj = llm::parse_json_block(raw);
  } catch (const ParseError&) {
    return std::nullopt;
  }
  if (!obj.is_object()) return std::nullopt;

  FacetRecord rec;
  rec.topics = read_string_array(obj, "topics");
  rec.subtopics = read_string_array(obj, "subtopics");
  rec.intent = read_string(obj, "intent");
  rec.entities = read_string_array(obj, "entities");
  rec.keywords = read_string_array(obj, "keywords");
  rec.summary = trim(read_string(obj, "summary"));
  if (rec.summary.empty()) return std::nullopt;
  return rec;
}

}  // namespace

std::optional<FacetRecord> extract_facets(const Conversation& conv, llm::LlmClient& llm) {
  if (conv.messages.empty()) {
    throw ParameterError("extract_facets: conversation '" + conv.id + "' has no messages");
  }
  std::map<std::string, std::string> bindings{{"conversation", flatten_conversation(conv)}};

  std::string raw = llm::complete_template(llm, llm::TemplateId::kExtractFacets, bindings);
  if (auto rec = parse_facets(raw)) return rec;

  // One retry with a reminder appended to the rendered prompt.
  llm::CompletionRequest retry;
  retry.rendered_prompt = llm::render(llm::TemplateId::kExtractFacets, bindings) +
                          "\n\nReminder: output only the JSON object, nothing else.";
  retry.template_name = llm::template_for(llm::TemplateId::kExtractFacets).name;
  retry.bindings = bindings;
  raw = llm.complete(retry);
  if (auto rec = parse_facets(raw)) return rec;

  log_warn("facet extraction failed twice for conversation '" + conv.id + "'; skipping it");
  return std::nullopt;
}

DatasetEmbeddings embed_dataset(const std::vector<Conversation>& dataset, llm::LlmClient& llm,
                                Embedder& embedder, int workers) {
  if (dataset.empty()) throw ParameterError("embed_dataset: dataset is empty");

  struct Slot {
    bool skipped = false;
    std::string summary;
    std::vector<float> vec;
  };
  std::vector<Slot> slots(dataset.size());

  parallel_for(dataset.size(), workers, [&](std::size_t i) {
    auto facets = extract_facets(dataset[i], llm);
    if (!facets) {
      slots[i].skipped = true;
      return;
    }
    slots[i].summary = facets->summary;
    slots[i].vec = embedder.embed(facets->summary);
  });

  DatasetEmbeddings out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (slots[i].skipped) {
      out.skipped_ids.push_back(dataset[i].id);
    } else {
      out.vectors[dataset[i].id] = std::move(slots[i].vec);
      out.summaries[dataset[i].id] = std::move(slots[i].summary);
    }
  }
  if (out.skipped_ids.size() * 2 > dataset.size()) {
    log_warn("embed_dataset: " + std::to_string(out.skipped_ids.size()) + " of " +
             std::to_string(dataset.size()) + " conversations were skipped (>50%)");
  }
  return out;
}

}  // namespace urania::emb
