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

#ifndef URANIA_KEYWORDS_HPP_
#define URANIA_KEYWORDS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "urania/llm/client.hpp"
#include "urania/privacy_ledger.hpp"
#include "urania/rng.hpp"

namespace urania {

enum class KwProvenance { kTfidfPrivate, kLlmPrivate, kPublic, kHybrid };

std::string provenance_name(KwProvenance p);
KwProvenance provenance_from_name(const std::string& name);

// The predefined vocabulary all cluster keywords are drawn from. Keywords
// are normalized (lowercase, trimmed, collapsed whitespace, <= 40 chars)
// and distinct. Private provenances carry the budget they spent.
struct KeywordSet {
  std::vector<std::string> keywords;
  KwProvenance provenance = KwProvenance::kPublic;
  double epsilon_spent = 0.0;
  double delta_spent = 0.0;
  int target_size = 200;

  void validate() const;
};

// Per-cluster keyword counts; negative values are possible after noise.
struct KeywordHistogram {
  std::map<std::string, std::int64_t> counts;
  int cluster_index = 0;
};

// Asks the model to pick up to m keywords from the set for one
// conversation summary. Output is strictly filtered to set membership
// (hallucinations dropped), the "NA" sentinel and unrecoverable parse
// failures both yield an empty list.
std::vector<std::string> llm_select_keywords(const std::string& summary,
                                             const KeywordSet& kwset, int m,
                                             llm::LlmClient& llm);

// Noisy document frequencies (DLap, budget epsilon/2, sensitivity 1), top
// 3-5 terms per document by TF x inverse-noisy-DF, partition selection over
// those per-document sets (cap 5, budget epsilon/2, delta), then LLM
// refinement down to target_size. Fewer survivors than target_size is
// allowed and logged.
KeywordSet build_kwset_tfidf(const std::vector<std::string>& docs, double epsilon,
                             double delta, llm::LlmClient& llm, Rng& rng,
                             int target_size = 200, PrivacyLedger* ledger = nullptr);

// Per-conversation LLM keyword generation (cap 5), partition selection
// (epsilon, delta), LLM refinement to target_size.
KeywordSet build_kwset_llm(const std::vector<std::string>& summaries, double epsilon,
                           double delta, llm::LlmClient& llm, Rng& rng,
                           int target_size = 200, PrivacyLedger* ledger = nullptr);

// Non-private baseline: plain TF-IDF seed set over a sample, then
// LLM-driven remove/add iterations until the set stabilizes over a full
// pass, stays within 10% of target for 3 consecutive batches, or hits the
// hard cap of 50 batches.
KeywordSet build_kwset_public(const std::vector<std::string>& public_docs,
                              llm::LlmClient& llm, int target_size = 200);

// Public set plus privately selected additions: the model proposes new
// keywords per conversation only when the public set misses its topic
// (cap 5), the proposals go through partition selection, survivors join
// the public set.
KeywordSet build_kwset_hybrid(const KeywordSet& public_set,
                              const std::vector<std::string>& private_summaries,
                              double epsilon, double delta, llm::LlmClient& llm, Rng& rng,
                              PrivacyLedger* ledger = nullptr);

// t keywords with the largest counts; ties break lexicographically.
// Negative counts are eligible (the histogram is post-processing-safe).
std::vector<std::string> top_keywords(const KeywordHistogram& hist, int t);

// Uniform sample without replacement.
std::vector<std::string> random_keywords(const KeywordSet& kwset, int t, Rng& rng);

}  // namespace urania

#endif  // URANIA_KEYWORDS_HPP_
