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

#ifndef URANIA_LLM_TEMPLATES_HPP_
#define URANIA_LLM_TEMPLATES_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "urania/common.hpp"

namespace urania::llm {

enum class TemplateId {
  kExtractFacets,
  kLlmSummarizeClio,
  kLlmSelectKeywords,
  kLlmSummarizeUrania,
  kKwsetLlmGenerate,
  kKwsetRefine,
  kKwsetPublicUpdate,
  kKwsetHybridSuggest,
  kEvalBinaryPreference,
  kEvalComparativeRanking,
  kEvalIndependentScore,
  kHierarchyName,
  kHierarchyDedup,
};

// Template bodies use {name} placeholders; literal braces are written as
// {{ and }} and render to single braces.
struct PromptTemplate {
  TemplateId id;
  std::string name;  // stable string id, e.g. "llm_select_keywords"
  std::string body;
  std::set<std::string> placeholders;
};

const PromptTemplate& template_for(TemplateId id);
const PromptTemplate* template_by_name(const std::string& name);
const std::vector<PromptTemplate>& all_templates();

// Byte-exact substitution of bindings into the template body; no other
// transformation. Throws ParseError when a binding is missing or unused.
std::string render(TemplateId id, const std::map<std::string, std::string>& bindings);

}  // namespace urania::llm

#endif  // URANIA_LLM_TEMPLATES_HPP_
