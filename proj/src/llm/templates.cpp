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

#include "urania/llm/templates.hpp"

namespace urania::llm {
namespace {

const char* kExtractFacetsBody =
    R"__(You are an advanced AI assistant that processes conversations and extracts meaningful facets for downstream embedding and clustering tasks. For the conversation provided, return a structured JSON object with the following:
- Topics: The overarching topics discussed in the conversation.
- Subtopics: Specific details or points under each topic.
- Intent: The main intent of the conversation (e.g., seeking help, sharing an opinion).
- Entities: Important names, organizations, or proper nouns discussed.
- Keywords: The most important words/phrases that could help differentiate the conversation.
- Summary: A concise, one-sentence description summarizing the conversation, up to 20 words.

Ignore the conversation if it is not in English.
Output the result as a valid JSON object with no extra text.

### Example:
User: I'm having a hard time preparing for job interviews. How do I answer behavioral questions? I also get nervous. Any tips on how to stay calm during the process?

Expected JSON Output:
{{
  'Topics': ['Job Interviews', 'Behavioral Questions', 'Stress Management'],
  'Subtopics': ['Handling difficult questions', 'Managing anxiety during interviews', 'Tips for preparation'],
  'Intent': 'Seeking advice',
  'Entities': ['job interview', 'behavioral questions'],
  'Keywords': ['job preparation', 'nerves', 'behavioral interview tips'],
  'Summary': 'The user is seeking advice on preparing for behavioral questions and managing stress during job interviews.',
}}

### Now, analyze the following conversation and generate the output in the same format:

User: {conversation}

Return the structured output in JSON format.)__";

const char* kLlmSummarizeClioBody =
    R"__(You are tasked with summarizing a group of related statements into a short, precise, and accurate description and name.  Your goal is to create a concise summary that captures the essence of these statements and distinguishes them from other similar groups of statements.

Summarize all the statements into a clear, precise, two-sentence description in the past tense. Your summary should be specific to this group and distinguish it from the contrastive answers of the other groups.
After creating the summary, generate a short name for the group of statements. This name should be at most ten words long (perhaps less) and be specific but also reflective of most of the statements (rather than reflecting only one or two).

Present your output in the following format:
<summary> [Insert your two-sentence summary here] </summary>
<name> [Insert your generated short name here] </name>

Below are the related statements:
<answers>
{answers}
</answers>

For context, here are statements from nearby groups that are NOT part of the group you're summarizing:
<contrastive_answers>
{contrastive_answers}
</contrastive_answers>

Do not elaborate beyond what you say in the tags. Remember to analyze both the statements and the contrastive statements carefully to ensure your summary and name accurately represent the specific group while distinguishing it from others.)__";

const char* kLlmSelectKeywordsBody =
    R"__(Below is a summary of a conversation. Based on this summary, select the most relevant {m} keywords from the given set of keywords.

Summary: {summary}

Available Keywords: {keywords}

Select up to {m} most relevant keywords from the set and return them as a Python list (e.g., ['keyword1', 'keyword2', ...]).
If there is no relevant keyword, return the Python list ['NA'])__";

const char* kLlmSummarizeUraniaBody =
    R"__(You are a language model tasked with summarizing a group of related keywords and example texts into a concise topic description.
Your goal is to generate:
1. A **concise topic name** (≤10 words) that best describes the theme of these keywords and examples.
2. A **brief, 2-sentence description** explaining what this cluster is about.

Please return your response in the following format:

<topic> [Insert topic name here] </topic>
<description> [Insert brief summary here] </description>

Below are the keywords associated with the cluster:
<keywords>
{keywords}
</keywords>

Ensure the topic name is **specific**, descriptive, and meaningful.)__";

const char* kKwsetLlmGenerateBody =
    R"__(You are a knowledgeable AI assistant tasked with generating a set of comprehensive keywords that cover the topics, intents, and entities present in a dataset of human conversations.

For the summary provided, generate a list of **3-5** keywords that reflect:
- The core topic(s) of the conversation
- Key entities or names mentioned
- Keywords useful for identifying conversation categories or topics

Keep the keywords concise and relevant.

Summary: {conversation_summary}

Use this JSON schema:
Response = {{"keywords": list[str]}}

Return only the JSON object without any explanations, decorations, or code blocks. Only the raw JSON should be returned.)__";

const char* kKwsetRefineBody =
    R"__(You are an expert in topic summarization. We have extracted keywords from a large collection of conversations. These keywords are used for summarizing the main topics of the conversations based on sentence statistics. Your task is to refine this list and select the most relevant {num} keywords that best capture the core topics.

Here is the extracted keyword list:

{keywords_json}

Please return exact {num} of the most relevant keywords in JSON format using the following schema:

```json
{{
"keywords": ["keyword1", "keyword2", ..., "keyword{num}"]
}}
```
Do not exceed {num} keywords. If necessary, prioritize the most commonly occurring, diverse, and representative words.)__";

const char* kKwsetPublicUpdateBody =
    R"__(You are maintaining a keyword set used to summarize the main topics of a large collection of conversations. Below is the current keyword set, followed by a batch of new conversations.

Current keyword set:
{current_keywords_json}

New conversations:
{conversations}

Update the keyword set so it stays concise and representative of the conversations seen so far, targeting about {target_size} keywords. Remove keywords that are redundant, overly narrow, or unrepresentative, and add keywords needed to cover the new conversations.

Return only a JSON object using this schema:
{{"words_to_remove": list[str], "words_to_add": list[str]}}
Return empty lists if no change is needed. Only the raw JSON should be returned.)__";

const char* kKwsetHybridSuggestBody =
    R"__(You are extending a keyword set used to summarize the main topics of conversations. The existing keyword set below was built from public data; the conversation summary that follows comes from a new corpus that may cover topics the set misses.

Existing keyword set:
{public_keywords_json}

Summary: {conversation_summary}

Only when necessary, propose up to 5 new keywords that the existing set needs in order to cover this conversation. Do not repeat keywords already in the set. If the existing set already covers the conversation, return an empty list.

Use this JSON schema:
Response = {{"keywords": list[str]}}

Return only the JSON object without any explanations, decorations, or code blocks. Only the raw JSON should be returned.)__";

const char* kEvalBinaryPreferenceBody =
    R"__(You are an expert evaluator of text summarization systems. You will be given an original text and two different summaries of that text. Your task is to evaluate which summary better captures the key themes and content of the original text.

Original Text:
{text}

Summary A:
{summary_a}

Summary B:
{summary_b}

Please evaluate which summary better captures the key themes and content of the original text. Consider factors such as:
- Accuracy of the information
- Coverage of important topics
- Clarity and coherence
- Relevance to the original text

Provide your reasoning, then end with a clear choice in the format: <choice>X</choice> where X is either "A" for the first summary or "B" for the second summary.)__";

const char* kEvalComparativeRankingBody =
    R"__(You are an expert evaluator of text summarization systems. You will be given an original text and two different summaries of that text. Your task is to rate which summary better captures the key themes and content of the original text.

Original Text:
{text}

Summary A:
{summary_a}

Summary B:
{summary_b}

Rate the pair on a scale from 1 to 5, where 1 means Summary A is clearly better, 2 means Summary A is somewhat better, 3 means both are equally good, 4 means Summary B is somewhat better, and 5 means Summary B is clearly better. Consider accuracy, coverage of important topics, clarity, and relevance.

Provide your reasoning, then end with a clear rating in the format: <rating>X</rating> where X is an integer from 1 to 5.)__";

const char* kEvalIndependentScoreBody =
    R"__(You are an expert evaluator of text summarization systems. You will be given one or more original conversations and a summary that is supposed to describe them. Your task is to score how well the summary captures the key themes and content of the conversations.

Original Conversations:
{text}

Summary:
{summary}

Score the summary on a scale from 1 to 5, where 1 means very poor and 5 means excellent, based on how well it summarizes the original conversations. Consider accuracy, coverage of important topics, clarity, and relevance.

Provide your reasoning, then end with a clear score in the format: <score>X</score> where X is an integer from 1 to 5.)__";

const char* kHierarchyNameBody =
    R"__(You are organizing a large collection of topic summaries into broader groups. Below are the topic summaries belonging to one group.

<summaries>
{summaries}
</summaries>

Suggest a short, descriptive name for this group. The name should be at most ten words long, specific, and reflective of most of the summaries rather than only one or two.

Present your output in the following format:
<name> [Insert your suggested group name here] </name>)__";

const char* kHierarchyDedupBody =
    R"__(You are refining the names of high-level topic groups. Below is the current list of suggested group names. Deduplicate and refine them: eliminate overlaps, merge near-duplicates, and ensure each remaining name is distinctive and descriptive (at most ten words each).

Current names:
{names_json}

Return only a JSON object using this schema:
{{"names": list[str]}}
Only the raw JSON should be returned.)__";

std::set<std::string> scan_placeholders(const std::string& body) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '{') {
      if (i + 1 < body.size() && body[i + 1] == '{') {
        ++i;
        continue;
      }
      auto end = body.find('}', i + 1);
      if (end == std::string::npos) {
        throw ParameterError("template: unbalanced '{' in body");
      }
      names.insert(body.substr(i + 1, end - i - 1));
      i = end;
    } else if (body[i] == '}') {
      if (i + 1 < body.size() && body[i + 1] == '}') ++i;
    }
  }
  return names;
}

PromptTemplate make(TemplateId id, const char* name, const char* body) {
  PromptTemplate t;
  t.id = id;
  t.name = name;
  t.body = body;
  t.placeholders = scan_placeholders(t.body);
  return t;
}

const std::vector<PromptTemplate>& registry() {
  static const std::vector<PromptTemplate> templates = {
      make(TemplateId::kExtractFacets, "extract_facets", kExtractFacetsBody),
      make(TemplateId::kLlmSummarizeClio, "llm_summarize_clio", kLlmSummarizeClioBody),
      make(TemplateId::kLlmSelectKeywords, "llm_select_keywords", kLlmSelectKeywordsBody),
      make(TemplateId::kLlmSummarizeUrania, "llm_summarize_urania", kLlmSummarizeUraniaBody),
      make(TemplateId::kKwsetLlmGenerate, "kwset_llm_generate", kKwsetLlmGenerateBody),
      make(TemplateId::kKwsetRefine, "kwset_refine", kKwsetRefineBody),
      make(TemplateId::kKwsetPublicUpdate, "kwset_public_update", kKwsetPublicUpdateBody),
      make(TemplateId::kKwsetHybridSuggest, "kwset_hybrid_suggest", kKwsetHybridSuggestBody),
      make(TemplateId::kEvalBinaryPreference, "eval_binary_preference", kEvalBinaryPreferenceBody),
      make(TemplateId::kEvalComparativeRanking, "eval_comparative_ranking",
           kEvalComparativeRankingBody),
      make(TemplateId::kEvalIndependentScore, "eval_independent_score",
           kEvalIndependentScoreBody),
      make(TemplateId::kHierarchyName, "hierarchy_name", kHierarchyNameBody),
      make(TemplateId::kHierarchyDedup, "hierarchy_dedup", kHierarchyDedupBody),
  };
  return templates;
}

}  // namespace

const std::vector<PromptTemplate>& all_templates() { return registry(); }

const PromptTemplate& template_for(TemplateId id) {
  for (const auto& t : registry()) {
    if (t.id == id) return t;
  }
  throw ParameterError("template: unknown template id");
}

const PromptTemplate* template_by_name(const std::string& name) {
  for (const auto& t : registry()) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::string render(TemplateId id, const std::map<std::string, std::string>& bindings) {
  const PromptTemplate& tpl = template_for(id);

  for (const auto& [key, _] : bindings) {
    if (!tpl.placeholders.count(key)) {
      throw ParseError("render: binding '" + key + "' is not a placeholder of template '" +
                           tpl.name + "'",
                       "");
    }
  }
  for (const auto& ph : tpl.placeholders) {
    if (!bindings.count(ph)) {
      throw ParseError("render: missing binding '" + ph + "' for template '" + tpl.name + "'",
                       "");
    }
  }

  std::string out;
  out.reserve(tpl.body.size() + 256);
  const std::string& body = tpl.body;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '{') {
      if (i + 1 < body.size() && body[i + 1] == '{') {
        out.push_back('{');
        ++i;
        continue;
      }
      auto end = body.find('}', i + 1);
      out += bindings.at(body.substr(i + 1, end - i - 1));
      i = end;
    } else if (c == '}') {
      if (i + 1 < body.size() && body[i + 1] == '}') ++i;
      out.push_back('}');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace urania::llm
