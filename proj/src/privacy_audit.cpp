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

#include "urania/privacy_audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "urania/parallel.hpp"
#include "urania/rng.hpp"
#include "urania/synthetic.hpp"

namespace urania::audit {

using nlohmann::json;

void LeakageConfig::validate() const {
  if (n_runs < 2 || n_runs % 2 != 0) {
    throw ParameterError("leakage: n_runs must be a positive even number");
  }
  if (n_background < 1) throw ParameterError("leakage: n_background must be >= 1");
}

double auc(const std::vector<std::pair<bool, double>>& labeled_scores) {
  std::size_t n_pos = 0, n_neg = 0;
  for (const auto& [label, _] : labeled_scores) {
    (label ? n_pos : n_neg) += 1;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw ParameterError("auc: both classes must be present");
  }
  // Rank-sum with average ranks for ties.
  std::vector<std::pair<double, bool>> sorted;
  sorted.reserve(labeled_scores.size());
  for (const auto& [label, score] : labeled_scores) sorted.emplace_back(score, label);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].first == sorted[i].first) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t t = i; t < j; ++t) {
      if (sorted[t].second) pos_rank_sum += avg_rank;
    }
    i = j;
  }
  double u = pos_rank_sum - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

std::vector<RocPoint> roc_points(const std::vector<std::pair<bool, double>>& scores,
                                 const std::vector<double>& grid) {
  std::vector<double> thresholds = grid;
  if (thresholds.empty()) {
    for (const auto& [_, s] : scores) thresholds.push_back(s);
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  double n_pos = 0, n_neg = 0;
  for (const auto& [label, _] : scores) (label ? n_pos : n_neg) += 1;

  std::vector<RocPoint> points;
  points.push_back({0.0, 0.0});
  // Sweep thresholds from high to low; predict positive when score > thr.
  for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
    double thr = *it - 1e-12;
    double tp = 0, fp = 0;
    for (const auto& [label, s] : scores) {
      if (s > thr) (label ? tp : fp) += 1;
    }
    points.push_back({fp / n_neg, tp / n_pos});
  }
  points.push_back({1.0, 1.0});
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    if (a.fpr != b.fpr) return a.fpr < b.fpr;
    return a.tpr < b.tpr;
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const RocPoint& a, const RocPoint& b) {
                             return a.fpr == b.fpr && a.tpr == b.tpr;
                           }),
               points.end());
  return points;
}

}  // namespace

RocResult run_leakage_experiment(const PipelineRunner& runner, const LeakageConfig& config,
                                 llm::LlmClient& llm, emb::Embedder& embedder) {
  config.validate();
  Conversation sensitive = config.sensitive;
  if (sensitive.messages.empty()) sensitive = sensitive_conversation();

  auto facets = emb::extract_facets(sensitive, llm);
  if (!facets) {
    throw ParameterError("leakage: the sensitive conversation could not be facet-extracted");
  }
  std::vector<float> sensitive_vec = embedder.embed(facets->summary);

  Rng master(config.seed);
  std::vector<std::pair<bool, double>> scores(config.n_runs);

  parallel_for(static_cast<std::size_t>(config.n_runs), config.workers, [&](std::size_t r) {
    bool include = (r % 2 == 0);  // half with, half without
    Rng run_rng = master.split(r);
    auto dataset = background_corpus(config.n_background, run_rng.seed(),
                                     "bg" + std::to_string(r));
    if (include) {
      // Insert at a seeded position so the record's index carries no signal.
      std::size_t pos = run_rng.below(dataset.size() + 1);
      dataset.insert(dataset.begin() + static_cast<std::ptrdiff_t>(pos), sensitive);
    }

    double score = 0.0;
    bool done = false;
    for (int attempt = 0; attempt < 2 && !done; ++attempt) {
      try {
        auto summaries = runner(dataset, run_rng.split(7).seed());
        double best = 0.0;
        for (const auto& text : summaries) {
          best = std::max(best, emb::cosine(sensitive_vec, embedder.embed(text)));
        }
        score = best;
        done = true;
      } catch (const std::exception& e) {
        if (attempt == 1) {
          log_warn("leakage run " + std::to_string(r) + " failed twice (" + e.what() +
                   "); scored 0");
        }
      }
    }
    scores[r] = {include, score};
  });

  RocResult result;
  result.per_run_scores = std::move(scores);
  result.auc = auc(result.per_run_scores);
  result.points = roc_points(result.per_run_scores, config.threshold_grid);
  return result;
}

json roc_to_json(const RocResult& result) {
  json points = json::array();
  for (const auto& p : result.points) points.push_back({{"fpr", p.fpr}, {"tpr", p.tpr}});
  json runs = json::array();
  for (const auto& [included, score] : result.per_run_scores) {
    runs.push_back({{"included", included}, {"score", score}});
  }
  return json{{"auc", result.auc}, {"points", points}, {"per_run_scores", runs}};
}

std::string roc_points_csv(const RocResult& result) {
  std::ostringstream os;
  os << "fpr,tpr\n";
  for (const auto& p : result.points) os << p.fpr << "," << p.tpr << "\n";
  return os.str();
}

}  // namespace urania::audit
