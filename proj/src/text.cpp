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

#include "urania/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "urania/embedded_data.hpp"

namespace urania {
namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c == '\'' || c >= 0x80;
}

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> set = [] {
    std::unordered_set<std::string> s;
    std::istringstream in(detail::kStopwordsText);
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (!line.empty()) s.insert(line);
    }
    return s;
  }();
  return set;
}

const std::unordered_map<std::string, std::string>& pos_lexicon() {
  static const std::unordered_map<std::string, std::string> map = [] {
    std::unordered_map<std::string, std::string> m;
    std::istringstream in(detail::kPosLexiconText);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      m[trim(line.substr(0, tab))] = trim(line.substr(tab + 1));
    }
    return m;
  }();
  return map;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c);
  });
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      // Strip surrounding apostrophes left by quoting.
      while (!cur.empty() && cur.front() == '\'') cur.erase(cur.begin());
      while (!cur.empty() && cur.back() == '\'') cur.pop_back();
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) {
    while (!cur.empty() && cur.front() == '\'') cur.erase(cur.begin());
    while (!cur.empty() && cur.back() == '\'') cur.pop_back();
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

bool is_stopword(const std::string& w) { return stopword_set().count(w) > 0; }

std::vector<std::string> content_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) {
    if (is_stopword(t) || all_digits(t) || t.size() < 2) continue;
    out.push_back(t);
  }
  return out;
}

std::string pos_tag(const std::string& w) {
  const auto& lex = pos_lexicon();
  if (auto it = lex.find(w); it != lex.end()) return it->second;
  if (all_digits(w)) return "NUM";
  // Suffix rules for common adjective shapes.
  for (const char* suf : {"ous", "ful", "ive", "ical", "less", "able", "ible"}) {
    std::string_view sv(suf);
    if (w.size() > sv.size() + 2 && w.compare(w.size() - sv.size(), sv.size(), sv) == 0)
      return "ADJ";
  }
  if (w.size() > 4 && w.compare(w.size() - 3, 3, "ing") == 0) return "VERB";
  if (is_stopword(w)) return "OTHER";
  return "NOUN";
}

std::string normalize_keyword(std::string_view raw) {
  std::string lowered = to_lower(raw);
  std::string out;
  bool in_space = true;
  for (unsigned char c : lowered) {
    if (std::isspace(c)) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(static_cast<char>(c));
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  if (out.size() > 40) {
    out.resize(40);
    out = trim(out);
  }
  return out;
}

std::vector<std::string> normalize_keyword_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& r : raw) {
    std::string n = normalize_keyword(r);
    if (n.empty()) continue;
    if (seen.insert(n).second) out.push_back(n);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> top_frequent(const std::vector<std::string>& tokens, std::size_t k) {
  std::unordered_map<std::string, std::size_t> count;
  std::unordered_map<std::string, std::size_t> first_pos;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (++count[tokens[i]] == 1) first_pos[tokens[i]] = i;
  }
  std::vector<std::string> uniq;
  uniq.reserve(count.size());
  for (auto& [w, _] : count) uniq.push_back(w);
  std::sort(uniq.begin(), uniq.end(), [&](const std::string& a, const std::string& b) {
    if (count[a] != count[b]) return count[a] > count[b];
    return first_pos[a] < first_pos[b];
  });
  if (uniq.size() > k) uniq.resize(k);
  return uniq;
}

std::vector<std::string> noun_chunks(std::string_view text) {
  std::vector<std::string> chunks;
  auto tokens = tokenize(text);
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t j = i;
    if (j < tokens.size() && pos_tag(tokens[j]) == "DET") ++j;
    std::size_t adj_start = j;
    while (j < tokens.size() && pos_tag(tokens[j]) == "ADJ") ++j;
    std::size_t noun_start = j;
    while (j < tokens.size() && pos_tag(tokens[j]) == "NOUN" && !is_stopword(tokens[j])) ++j;
    if (j > noun_start) {
      std::vector<std::string> span(tokens.begin() + adj_start, tokens.begin() + j);
      chunks.push_back(join(span, " "));
      i = j;
    } else {
      i = (j > i) ? j : i + 1;
    }
  }
  return chunks;
}

bool looks_non_english(std::string_view text) {
  if (text.empty()) return false;
  std::size_t non_ascii = 0;
  for (unsigned char c : text) {
    if (c >= 0x80) ++non_ascii;
  }
  return non_ascii * 10 > text.size() * 3;
}

}  // namespace urania
