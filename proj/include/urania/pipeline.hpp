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

#ifndef URANIA_PIPELINE_HPP_
#define URANIA_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "urania/clustering.hpp"
#include "urania/embedding/facets.hpp"
#include "urania/keywords.hpp"
#include "urania/privacy_ledger.hpp"

namespace urania {

struct UraniaParams {
  int k = 0;  // 0 = ceil(n / 150)
  int t = 3;  // keywords per released cluster
  int m = 50;  // sampled conversations per cluster
  int size_threshold = 15;  // minimum noisy size for release
  double epsilon_c = 8.0;
  double epsilon_hist = 4.0;
  double epsilon_size = 1.0;
  double delta_c = 1e-6;
  std::uint64_t seed = 0;
  int dp_iters = 8;
  int workers = 2;

  void validate() const;
};

// The only per-cluster object that ever leaves the pipeline: noisy size,
// top-t keywords, and a summary derived from the keywords alone. Carries no
// conversation ids, raw counts, or embeddings.
struct ClusterRelease {
  int cluster_index = 0;
  std::int64_t noisy_size = 0;
  std::vector<std::string> keywords;
  std::string topic;        // <= 10 words
  std::string description;  // two sentences
  std::string keyword_source;  // "histogram" or "random_empty"
};

struct ReleasedReport {
  int schema_version = 1;
  std::vector<ClusterRelease> clusters;
  UraniaParams params;
  BudgetReport privacy_budget;
  std::string kwset_id;
  std::string timestamp;
};

// Internal artifacts kept in memory for evaluation-only runs; never part of
// a released report.
struct PipelineArtifacts {
  ClusterCenters centers;
  Assignment assignment;
  std::map<std::string, std::string> facet_summaries;
  std::vector<std::string> skipped_ids;
  std::map<int, std::int64_t> noisy_sizes;
};

// The DP pipeline: embed; DP k-means (centers only); internal nearest-center
// assignment; noisy cluster sizes (PHR over cluster indices, cap 1,
// epsilon_size); for each cluster whose noisy size clears the threshold,
// either random keywords (truly empty cluster) or a DP keyword histogram
// over up to m sampled conversations (cap 5 per conversation, epsilon_hist,
// parallel composition across clusters) followed by top-t selection and a
// keywords-only summary.
//
// Ledger entries: (epsilon_c, delta_c) for clustering, epsilon_size for
// sizes, epsilon_hist once via the parallel group, total
// (epsilon_c + epsilon_hist + epsilon_size, delta_c).
//
// A summarization parse failure downgrades that cluster to
// topic="(unavailable)" after one retry; it never aborts the run.
ReleasedReport run_urania(const std::vector<Conversation>& dataset, const KeywordSet& kwset,
                          const UraniaParams& params, llm::LlmClient& llm,
                          emb::Embedder& embedder, PrivacyLedger& ledger,
                          PipelineArtifacts* artifacts = nullptr);

struct ClioSummary {
  std::string summary;
  std::string name;
};

// The non-private baseline: embed, k-means, and per cluster an LLM summary
// over representative conversations (half nearest the centroid, half
// uniform) with contrastive examples drawn from the nearest outsiders.
std::vector<ClioSummary> run_simple_clio(const std::vector<Conversation>& dataset, int k,
                                         llm::LlmClient& llm, emb::Embedder& embedder,
                                         std::uint64_t seed,
                                         PipelineArtifacts* artifacts = nullptr);

// Schema-whitelist check plus a scan of every string for dataset
// conversation ids. Returns human-readable violations; empty means ok.
std::vector<std::string> validate_release(const nlohmann::json& report,
                                          const std::vector<std::string>& dataset_ids);

nlohmann::json report_to_json(const ReleasedReport& report);
nlohmann::json params_to_json(const UraniaParams& params);
UraniaParams params_from_json(const nlohmann::json& j);
nlohmann::json budget_to_json(const BudgetReport& budget);
nlohmann::json kwset_to_json(const KeywordSet& set);
KeywordSet kwset_from_json(const nlohmann::json& j);
std::string kwset_identity(const KeywordSet& set);

// Released summary texts ("topic. description" / "name. summary") used by
// evaluation and the leakage experiment.
std::vector<std::string> release_summary_texts(const ReleasedReport& report);
std::vector<std::string> clio_summary_texts(const std::vector<ClioSummary>& summaries);

}  // namespace urania

#endif  // URANIA_PIPELINE_HPP_
