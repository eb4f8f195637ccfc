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

#include "urania/llm/mock_client.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "urania/text.hpp"

namespace urania::llm {
namespace {

using nlohmann::json;

std::string title_case(const std::string& word) {
  std::string out = word;
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::string title_join(const std::vector<std::string>& words, const std::string& sep) {
  std::vector<std::string> t;
  t.reserve(words.size());
  for (const auto& w : words) t.push_back(title_case(w));
  return join(t, sep);
}

std::string binding(const CompletionRequest& req, const std::string& name) {
  auto it = req.bindings.find(name);
  return it == req.bindings.end() ? std::string() : it->second;
}

std::string python_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += "'" + items[i] + "'";
  }
  return out + "]";
}

std::vector<std::string> split_lines_strip_dash(const std::string& block) {
  std::vector<std::string> lines;
  std::istringstream in(block);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.rfind("- ", 0) == 0) line = line.substr(2);
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string mock_extract_facets(const CompletionRequest& req) {
  std::string conv = binding(req, "conversation");
  if (looks_non_english(conv)) {
    return "The conversation is not in English, so it is ignored.";
  }
  auto words = content_tokens(conv);
  if (words.empty()) {
    return "The conversation is empty, so it is ignored.";
  }
  auto top = top_frequent(words, 8);
  std::vector<std::string> head(top.begin(), top.begin() + std::min<std::size_t>(3, top.size()));

  json facets;
  json topics = json::array();
  for (const auto& w : head) topics.push_back(title_case(w));
  facets["Topics"] = topics;
  json subtopics = json::array();
  for (std::size_t i = 3; i < top.size(); ++i) subtopics.push_back(top[i]);
  facets["Subtopics"] = subtopics;
  facets["Intent"] = "Seeking help";
  facets["Entities"] = json::array();
  json keywords = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(5, top.size()); ++i) keywords.push_back(top[i]);
  facets["Keywords"] = keywords;
  facets["Summary"] = "The user discusses " + join(top, ", ") + ".";
  return facets.dump();
}

std::string mock_select_keywords(const CompletionRequest& req) {
  std::string summary = binding(req, "summary");
  std::size_t m = 5;
  try {
    m = static_cast<std::size_t>(std::stoul(binding(req, "m")));
  } catch (...) {
  }

  std::vector<std::string> offered;
  {
    std::string list = binding(req, "keywords");
    std::size_t pos = 0;
    while (pos <= list.size()) {
      auto comma = list.find(", ", pos);
      std::string item = (comma == std::string::npos) ? list.substr(pos)
                                                      : list.substr(pos, comma - pos);
      item = trim(item);
      if (!item.empty()) offered.push_back(item);
      if (comma == std::string::npos) break;
      pos = comma + 2;
    }
  }

  std::unordered_map<std::string, int> summary_counts;
  for (const auto& t : tokenize(summary)) ++summary_counts[t];

  // A keyword matches when every one of its words appears in the summary.
  std::vector<std::pair<int, std::size_t>> ranked;  // (-total freq, offer index)
  for (std::size_t i = 0; i < offered.size(); ++i) {
    auto kw_tokens = tokenize(offered[i]);
    if (kw_tokens.empty()) continue;
    int total = 0;
    bool all = true;
    for (const auto& t : kw_tokens) {
      auto it = summary_counts.find(t);
      if (it == summary_counts.end()) {
        all = false;
        break;
      }
      total += it->second;
    }
    if (all) ranked.emplace_back(-total, i);
  }
  std::sort(ranked.begin(), ranked.end());

  std::vector<std::string> chosen;
  for (const auto& [_, idx] : ranked) {
    if (chosen.size() >= m) break;
    chosen.push_back(offered[idx]);
  }
  if (chosen.empty()) return "['NA']";
  return python_list(chosen);
}

std::string mock_summarize_clio(const CompletionRequest& req) {
  auto lines = split_lines_strip_dash(binding(req, "answers"));
  std::vector<std::string> all_tokens;
  std::unordered_map<std::string, int> line_df;
  for (const auto& line : lines) {
    auto toks = content_tokens(line);
    std::unordered_set<std::string> uniq(toks.begin(), toks.end());
    for (const auto& t : uniq) ++line_df[t];
    for (const auto& t : toks) all_tokens.push_back(t);
  }
  auto top = top_frequent(all_tokens, 6);
  std::string name =
      title_join({top.begin(), top.begin() + std::min<std::size_t>(4, top.size())}, " ");
  if (name.empty()) name = "General Conversations";

  std::string first = "The statements discussed " + join(top, ", ") + ".";

  // Distinctive terms: present in almost no statements, surfaced the way a
  // summarizer calls out salient specifics. Rarest first, longer tokens
  // breaking ties.
  int df_limit = std::max<int>(1, static_cast<int>(lines.size()) / 20);
  std::vector<std::string> distinctive;
  std::vector<std::string> candidates;
  for (const auto& [w, df] : line_df) candidates.push_back(w);
  std::sort(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
    if (line_df[a] != line_df[b]) return line_df[a] < line_df[b];
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  for (const auto& w : candidates) {
    if (line_df[w] <= df_limit && lines.size() > 3 &&
        std::find(top.begin(), top.end(), w) == top.end()) {
      distinctive.push_back(w);
      if (distinctive.size() == 2) break;
    }
  }
  std::string second = distinctive.empty()
                           ? "They covered questions and explanations about these subjects."
                           : "Notable specific mentions included " + join(distinctive, " and ") +
                                 ".";

  return "<summary> " + first + " " + second + " </summary>\n<name> " + name + " </name>";
}

std::string mock_summarize_urania(const CompletionRequest& req) {
  std::vector<std::string> kws;
  for (const auto& t : split_lines_strip_dash(binding(req, "keywords"))) {
    std::istringstream in(t);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (!item.empty()) kws.push_back(item);
    }
  }
  if (kws.empty()) kws.push_back("general topics");
  std::vector<std::string> head(kws.begin(), kws.begin() + std::min<std::size_t>(3, kws.size()));
  std::string topic = title_join(head, ", ");
  std::string desc = "This cluster groups conversations about " + join(kws, ", ") +
                     ". The discussions centered on these related themes.";
  return "<topic> " + topic + " </topic>\n<description> " + desc + " </description>";
}

// Conversational scaffold words a real model would not propose as topic
// keywords.
bool is_boilerplate(const std::string& token) {
  static const std::unordered_set<std::string> set = {
      "user",    "assistant", "discusses", "discussed", "discuss",
      "mentions", "asks",     "conversation", "summary", "talks"};
  return set.count(token) > 0;
}

std::vector<std::string> topic_tokens(const std::string& text, std::size_t k) {
  std::vector<std::string> filtered;
  for (auto& t : content_tokens(text)) {
    if (!is_boilerplate(t)) filtered.push_back(std::move(t));
  }
  return top_frequent(filtered, k);
}

std::string mock_kwset_generate(const CompletionRequest& req) {
  json out;
  out["keywords"] = topic_tokens(binding(req, "conversation_summary"), 5);
  return out.dump();
}

std::string mock_kwset_refine(const CompletionRequest& req) {
  std::size_t num = 200;
  try {
    num = static_cast<std::size_t>(std::stoul(binding(req, "num")));
  } catch (...) {
  }
  std::vector<std::string> kws;
  try {
    kws = parse_string_list(binding(req, "keywords_json"));
  } catch (const ParseError&) {
  }
  if (kws.size() > num) kws.resize(num);
  json out;
  out["keywords"] = kws;
  return out.dump();
}

std::string mock_kwset_public_update(const CompletionRequest& req) {
  std::unordered_set<std::string> current;
  try {
    for (const auto& k : parse_string_list(binding(req, "current_keywords_json")))
      current.insert(k);
  } catch (const ParseError&) {
  }
  auto words = content_tokens(binding(req, "conversations"));
  std::unordered_map<std::string, int> counts;
  for (const auto& w : words) ++counts[w];
  std::vector<std::string> adds;
  for (const auto& w : top_frequent(words, 16)) {
    if (counts[w] >= 3 && !current.count(w)) {
      adds.push_back(w);
      if (adds.size() == 3) break;
    }
  }
  json out;
  out["words_to_remove"] = json::array();
  out["words_to_add"] = adds;
  return out.dump();
}

std::string mock_kwset_hybrid_suggest(const CompletionRequest& req) {
  std::unordered_set<std::string> covered;
  try {
    for (const auto& k : parse_string_list(binding(req, "public_keywords_json")))
      covered.insert(normalize_keyword(k));
  } catch (const ParseError&) {
  }
  std::vector<std::string> suggestions;
  for (const auto& w : topic_tokens(binding(req, "conversation_summary"), 8)) {
    if (!covered.count(normalize_keyword(w))) {
      suggestions.push_back(w);
      if (suggestions.size() == 2) break;
    }
  }
  json out;
  out["keywords"] = suggestions;
  return out.dump();
}

double overlap_score(const std::string& text, const std::string& summary) {
  auto text_tokens = content_tokens(text);
  std::unordered_set<std::string> text_set(text_tokens.begin(), text_tokens.end());
  auto sum_tokens = content_tokens(summary);
  if (sum_tokens.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& t : sum_tokens) hit += text_set.count(t);
  return static_cast<double>(hit) / static_cast<double>(sum_tokens.size());
}

std::string mock_binary_preference(const CompletionRequest& req) {
  double a = overlap_score(binding(req, "text"), binding(req, "summary_a"));
  double b = overlap_score(binding(req, "text"), binding(req, "summary_b"));
  const char* choice = (b > a) ? "B" : "A";
  return "Comparing coverage of the original text, one summary matches more of its content.\n"
         "<choice>" +
         std::string(choice) + "</choice>";
}

std::string mock_comparative_ranking(const CompletionRequest& req) {
  double a = overlap_score(binding(req, "text"), binding(req, "summary_a"));
  double b = overlap_score(binding(req, "text"), binding(req, "summary_b"));
  double d = a - b;
  int rating = 3;
  if (d > 0.25)
    rating = 1;
  else if (d > 0.05)
    rating = 2;
  else if (d < -0.25)
    rating = 5;
  else if (d < -0.05)
    rating = 4;
  return "Judged by coverage of the original text.\n<rating>" + std::to_string(rating) +
         "</rating>";
}

std::string mock_independent_score(const CompletionRequest& req) {
  double frac = overlap_score(binding(req, "text"), binding(req, "summary"));
  int score = 1 + static_cast<int>(std::lround(frac * 4.0));
  score = std::clamp(score, 1, 5);
  return "Scored by how much of the summary is grounded in the conversations.\n<score>" +
         std::to_string(score) + "</score>";
}

std::string mock_hierarchy_name(const CompletionRequest& req) {
  auto lines = split_lines_strip_dash(binding(req, "summaries"));
  std::vector<std::string> all;
  for (const auto& line : lines) {
    for (auto& t : content_tokens(line)) all.push_back(t);
  }
  auto top = top_frequent(all, 4);
  std::string name = title_join(top, " ");
  if (name.empty()) name = "Miscellaneous Topics";
  return "<name> " + name + " </name>";
}

std::string mock_hierarchy_dedup(const CompletionRequest& req) {
  std::vector<std::string> names;
  try {
    names = parse_string_list(binding(req, "names_json"));
  } catch (const ParseError&) {
  }
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (seen.insert(to_lower(n)).second) out.push_back(n);
  }
  json j;
  j["names"] = out;
  return j.dump();
}

}  // namespace

std::string MockLlm::complete(const CompletionRequest& request) {
  ++calls_;
  const std::string& t = request.template_name;
  if (t == "extract_facets") return mock_extract_facets(request);
  if (t == "llm_select_keywords") return mock_select_keywords(request);
  if (t == "llm_summarize_clio") return mock_summarize_clio(request);
  if (t == "llm_summarize_urania") return mock_summarize_urania(request);
  if (t == "kwset_llm_generate") return mock_kwset_generate(request);
  if (t == "kwset_refine") return mock_kwset_refine(request);
  if (t == "kwset_public_update") return mock_kwset_public_update(request);
  if (t == "kwset_hybrid_suggest") return mock_kwset_hybrid_suggest(request);
  if (t == "eval_binary_preference") return mock_binary_preference(request);
  if (t == "eval_comparative_ranking") return mock_comparative_ranking(request);
  if (t == "eval_independent_score") return mock_independent_score(request);
  if (t == "hierarchy_name") return mock_hierarchy_name(request);
  if (t == "hierarchy_dedup") return mock_hierarchy_dedup(request);
  return "[\"NA\"]";
}

}  // namespace urania::llm
