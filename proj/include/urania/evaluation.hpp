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

#ifndef URANIA_EVALUATION_HPP_
#define URANIA_EVALUATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "urania/embedding/embedder.hpp"
#include "urania/llm/client.hpp"

namespace urania::eval {

// Utility metrics comparing a private summary set against a public one.
// LLM-judge fields stay unset when no judge samples are available.
struct MetricReport {
  double keyphrase_jaccard = 0.0;
  double nounchunk_jaccard = 0.0;
  double tfidf_cosine = 0.0;
  double token_overlap = 0.0;
  double bigram_overlap = 0.0;
  double topic_coverage = 0.0;
  double mean_cosine = 0.0;
  double median_cosine = 0.0;
  std::optional<double> comparative_ranking_mean;     // [1, 5], lower = private better
  std::optional<double> binary_dp_preferred_pct;      // [0, 100]
  std::optional<double> independent_score_private;    // [1, 5]
  std::optional<double> independent_score_public;     // [1, 5]
};

struct LexicalSimilarity {
  double keyphrase_jaccard = 0.0;
  double nounchunk_jaccard = 0.0;
  double tfidf_cosine = 0.0;
};

// Key phrases are the top-N multiword TF-IDF terms of each corpus
// (N = 100); noun chunks come from the det? adj* noun+ heuristic; the
// cosine compares corpus-level TF-IDF vectors on the union vocabulary.
LexicalSimilarity lexical_similarity(const std::vector<std::string>& private_set,
                                     const std::vector<std::string>& public_set);

// Jaccard over token sets and over bigram sets.
std::pair<double, double> ngram_overlap(const std::vector<std::string>& private_set,
                                        const std::vector<std::string>& public_set);

// Topics extracted per set by k-means over summary embeddings
// (k = ceil(sqrt(n))); a public topic counts as covered when some private
// topic centroid reaches the cosine threshold.
double topic_coverage(const std::vector<std::string>& private_set,
                      const std::vector<std::string>& public_set, emb::Embedder& embedder,
                      double match_threshold = 0.7);

// Mean and median over private summaries of the max cosine to any public
// summary.
std::pair<double, double> embedding_proximity(const std::vector<std::string>& private_set,
                                              const std::vector<std::string>& public_set,
                                              emb::Embedder& embedder);

struct JudgeSample {
  std::string conversation_text;
  std::string private_summary;
  std::string public_summary;
};

struct BinaryPreferenceResult {
  double dp_preferred_pct = 0.0;  // over parseable judgments
  int excluded = 0;
};

// Presentation order of the two summaries is randomized per sample by the
// seed, nulling positional bias.
BinaryPreferenceResult llm_binary_preference(const std::vector<JudgeSample>& samples,
                                             llm::LlmClient& llm, std::uint64_t seed);

struct ComparativeRankingResult {
  double mean = 3.0;  // orientation-normalized: lower = private better
  int excluded = 0;
};

ComparativeRankingResult llm_comparative_ranking(const std::vector<JudgeSample>& samples,
                                                 llm::LlmClient& llm, std::uint64_t seed);

// Mean judge score over (conversation batch, summary) pairs.
double llm_independent_score(
    const std::vector<std::pair<std::string, std::string>>& text_and_summary,
    llm::LlmClient& llm);

nlohmann::json metric_report_to_json(const MetricReport& report);

// Single self-contained HTML document with the metric tables.
std::string render_metric_report_html(const MetricReport& report, const std::string& title);

}  // namespace urania::eval

#endif  // URANIA_EVALUATION_HPP_
