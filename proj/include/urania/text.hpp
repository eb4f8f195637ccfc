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

#ifndef URANIA_TEXT_HPP_
#define URANIA_TEXT_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace urania {

// Word segmentation: runs of letters/digits/apostrophes form tokens, output
// lowercased (ASCII only; non-ASCII UTF-8 bytes are kept as word characters).
std::vector<std::string> tokenize(std::string_view text);

// tokenize() minus stopwords and pure numbers.
std::vector<std::string> content_tokens(std::string_view text);

bool is_stopword(const std::string& lowercase_word);

// POS tag used by the noun-chunk heuristic; "NOUN" is the default for
// unknown non-stopwords, with a few suffix rules for adjectives.
std::string pos_tag(const std::string& lowercase_word);

// Keyword identity: lowercase, trim, collapse internal whitespace, cap at
// 40 chars.
std::string normalize_keyword(std::string_view raw);

// Dedupe after normalization, preserving first-seen order. Empties dropped.
std::vector<std::string> normalize_keyword_list(const std::vector<std::string>& raw);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

// Most frequent tokens, ties broken by first appearance.
std::vector<std::string> top_frequent(const std::vector<std::string>& tokens, std::size_t k);

// Noun chunks matched by the pattern det? adj* noun+ (determiner dropped
// from the emitted chunk).
std::vector<std::string> noun_chunks(std::string_view text);

// Heuristic used by the facet prompt's "ignore if not in English" rule in
// offline mocks: true when a large share of bytes are non-ASCII.
bool looks_non_english(std::string_view text);

}  // namespace urania

#endif  // URANIA_TEXT_HPP_
