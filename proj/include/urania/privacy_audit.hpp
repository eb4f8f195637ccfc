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

#ifndef URANIA_PRIVACY_AUDIT_HPP_
#define URANIA_PRIVACY_AUDIT_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "urania/embedding/facets.hpp"

namespace urania::audit {

// Empirical leakage experiment: repeated pipeline runs on synthetic
// datasets, half of which include one sensitive conversation, attacked by a
// thresholding detector on max embedding similarity.
struct LeakageConfig {
  int n_runs = 200;        // even: half with, half without the sensitive record
  int n_background = 99;   // general-topic conversations per run
  Conversation sensitive;  // defaults to the built-in medical conversation
  std::vector<double> threshold_grid;  // empty = all observed scores
  std::uint64_t seed = 0;
  int workers = 2;

  void validate() const;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocResult {
  double auc = 0.5;
  std::vector<RocPoint> points;                        // monotone in fpr
  std::vector<std::pair<bool, double>> per_run_scores;  // (included, score)
};

// Mann-Whitney rank AUC: the probability a random positive outranks a
// random negative, ties counted 1/2. Both classes must be present.
double auc(const std::vector<std::pair<bool, double>>& labeled_scores);

// Runs the pipeline (any callable producing released summary texts from a
// dataset) n_runs times on datasets of n_background general-topic
// conversations, including the sensitive conversation in exactly half. The
// detector score of a run is the max cosine between the sensitive
// conversation's facet-summary embedding and the embeddings of the released
// summaries. A run that fails twice scores 0 with a warning.
using PipelineRunner =
    std::function<std::vector<std::string>(const std::vector<Conversation>&, std::uint64_t)>;

RocResult run_leakage_experiment(const PipelineRunner& runner, const LeakageConfig& config,
                                 llm::LlmClient& llm, emb::Embedder& embedder);

nlohmann::json roc_to_json(const RocResult& result);
std::string roc_points_csv(const RocResult& result);

}  // namespace urania::audit

#endif  // URANIA_PRIVACY_AUDIT_HPP_
