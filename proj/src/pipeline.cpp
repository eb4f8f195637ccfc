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

#include "urania/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "urania/dp/mechanisms.hpp"
#include "urania/parallel.hpp"
#include "urania/text.hpp"

namespace urania {

using nlohmann::json;

void UraniaParams::validate() const {
  if (k < 0) throw ParameterError("urania: k must be >= 0 (0 = auto)");
  if (t < 1) throw ParameterError("urania: t must be >= 1");
  if (m < 1) throw ParameterError("urania: m must be >= 1");
  if (size_threshold < 1) throw ParameterError("urania: size_threshold must be >= 1");
  if (!(epsilon_c > 0.0) || !(epsilon_hist > 0.0) || !(epsilon_size > 0.0)) {
    throw ParameterError("urania: all epsilons must be positive");
  }
  if (!(delta_c > 0.0) || !(delta_c < 1.0)) {
    throw ParameterError("urania: delta_c must lie in (0, 1)");
  }
  if (dp_iters < 1) throw ParameterError("urania: dp_iters must be >= 1");
}

namespace {

// Fixed derivation of noise/sampling streams from the run seed, so a seed
// reproduces a run bit for bit.
enum Stream : std::uint64_t {
  kStreamClustering = 1,
  kStreamSizes = 2,
  kStreamSampling = 3,
  kStreamHistogram = 4,
  kStreamEmptyKeywords = 5,
};

struct EmbeddedDataset {
  std::vector<std::string> ids;
  Matrix points;
};

EmbeddedDataset to_matrix(const emb::DatasetEmbeddings& embedded) {
  EmbeddedDataset out;
  out.ids.reserve(embedded.vectors.size());
  out.points.reserve(embedded.vectors.size());
  for (const auto& [id, vec] : embedded.vectors) {  // map order: sorted by id
    out.ids.push_back(id);
    out.points.push_back(vec);
  }
  return out;
}

std::vector<std::string> sample_without_replacement(const std::vector<std::string>& pool,
                                                    std::size_t n, Rng& rng) {
  std::vector<std::string> items = pool;
  n = std::min(n, items.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + rng.below(items.size() - i);
    std::swap(items[i], items[j]);
  }
  items.resize(n);
  return items;
}

struct TopicDescription {
  std::string topic;
  std::string description;
};

// Cluster names are bounded at ten words; anything longer is cut there.
std::string clamp_ten_words(const std::string& name) {
  int words = 0;
  bool in_word = false;
  for (std::size_t i = 0; i < name.size(); ++i) {
    bool space = std::isspace(static_cast<unsigned char>(name[i])) != 0;
    if (!space && !in_word) {
      if (++words > 10) return trim(name.substr(0, i));
    }
    in_word = !space;
  }
  return name;
}

TopicDescription summarize_keywords(const std::vector<std::string>& keywords,
                                    llm::LlmClient& llm) {
  std::map<std::string, std::string> bindings{{"keywords", join(keywords, ", ")}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      std::string raw =
          llm::complete_template(llm, llm::TemplateId::kLlmSummarizeUrania, bindings);
      return {clamp_ten_words(llm::parse_tagged(raw, "topic")),
              llm::parse_tagged(raw, "description")};
    } catch (const ParseError&) {
    }
  }
  log_warn("cluster summarization failed twice; emitting keywords without a topic name");
  return {"(unavailable)", ""};
}

}  // namespace

ReleasedReport run_urania(const std::vector<Conversation>& dataset, const KeywordSet& kwset,
                          const UraniaParams& params, llm::LlmClient& llm,
                          emb::Embedder& embedder, PrivacyLedger& ledger,
                          PipelineArtifacts* artifacts) {
  params.validate();
  kwset.validate();
  if (kwset.keywords.empty()) throw ParameterError("run_urania: keyword set is empty");
  if (dataset.empty()) throw ParameterError("run_urania: dataset is empty");
  if (static_cast<int>(kwset.keywords.size()) < params.t) {
    throw ParameterError("run_urania: keyword set smaller than t");
  }

  Rng master(params.seed);

  // Step 1: embeddings (per-record operations only).
  auto embedded = emb::embed_dataset(dataset, llm, embedder, params.workers);
  auto data = to_matrix(embedded);
  auto n = data.ids.size();
  if (n == 0) throw ParameterError("run_urania: every conversation was skipped");

  int k = params.k > 0 ? params.k
                       : static_cast<int>((n + 149) / 150);  // ceil(n / 150)
  k = std::max(k, 1);

  // Step 2: DP clustering releases centers only; the assignment stays
  // internal.
  ClusterCenters centers =
      dp_kmeans(data.points, k, params.epsilon_c, params.delta_c, params.dp_iters,
                master.split(kStreamClustering).seed(), &ledger, "urania/dp_kmeans");
  std::vector<int> assignment = assign_indices(data.points, centers);

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < n; ++i) members[assignment[i]].push_back(i);

  // Step 3 (sizes): one histogram over the fixed cluster-index universe;
  // each record contributes exactly one bin, so the cap is 1.
  std::vector<std::string> size_universe;
  size_universe.reserve(k);
  for (int j = 0; j < k; ++j) size_universe.push_back(std::to_string(j));
  std::vector<dp::ContributionSet> size_contribs;
  size_contribs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    size_contribs.push_back({{std::to_string(assignment[i])}});
  }
  Rng size_rng = master.split(kStreamSizes);
  dp::Histogram noisy_sizes = dp::private_histogram_release(size_contribs, size_universe, 1,
                                                            params.epsilon_size, size_rng);
  ledger.record({"urania/cluster_sizes", params.epsilon_size, 0.0, CompositionMode::kBasic, ""});

  // Step 3 (keywords) + step 4 (summaries) for qualifying clusters.
  struct PendingCluster {
    int index;
    std::int64_t noisy_size;
    std::vector<std::string> keywords;
    std::string source;
  };
  std::vector<PendingCluster> pending;

  for (int j = 0; j < k; ++j) {
    std::int64_t noisy_size = noisy_sizes.at(std::to_string(j));
    if (noisy_size < params.size_threshold) continue;

    if (members[j].empty()) {
      // Empty cluster that qualified through noise: data-independent
      // random keywords.
      Rng empty_rng = master.split(kStreamEmptyKeywords).split(static_cast<std::uint64_t>(j));
      pending.push_back(
          {j, noisy_size, random_keywords(kwset, params.t, empty_rng), "random_empty"});
      continue;
    }

    std::vector<std::string> member_ids;
    member_ids.reserve(members[j].size());
    for (std::size_t idx : members[j]) member_ids.push_back(data.ids[idx]);

    Rng sample_rng = master.split(kStreamSampling).split(static_cast<std::uint64_t>(j));
    auto sampled = sample_without_replacement(
        member_ids, static_cast<std::size_t>(params.m), sample_rng);

    // Each sampled conversation contributes at most 5 keywords to exactly
    // this cluster's histogram (the parallel-composition precondition).
    std::vector<dp::ContributionSet> contribs(sampled.size());
    parallel_for(sampled.size(), params.workers, [&](std::size_t s) {
      contribs[s].items =
          llm_select_keywords(embedded.summaries.at(sampled[s]), kwset, 5, llm);
    });

    Rng hist_rng = master.split(kStreamHistogram).split(static_cast<std::uint64_t>(j));
    dp::Histogram hist = dp::private_histogram_release(contribs, kwset.keywords, 5,
                                                       params.epsilon_hist, hist_rng);
    ledger.record({"urania/keyword_hist", params.epsilon_hist, 0.0,
                   CompositionMode::kParallelWithinGroup, "urania/keyword_hist"});

    KeywordHistogram kw_hist;
    kw_hist.cluster_index = j;
    kw_hist.counts = std::move(hist);
    pending.push_back({j, noisy_size, top_keywords(kw_hist, params.t), "histogram"});
  }

  ReleasedReport report;
  report.schema_version = 1;
  report.params = params;
  report.kwset_id = kwset_identity(kwset);

  report.clusters.resize(pending.size());
  parallel_for(pending.size(), params.workers, [&](std::size_t i) {
    const auto& p = pending[i];
    auto summary = summarize_keywords(p.keywords, llm);
    report.clusters[i] = {p.index,       p.noisy_size,        p.keywords,
                          summary.topic, summary.description, p.source};
  });

  report.privacy_budget = ledger.report_prefix("urania/");

  if (artifacts != nullptr) {
    artifacts->centers = centers;
    for (std::size_t i = 0; i < n; ++i) {
      artifacts->assignment.cluster_of[data.ids[i]] = assignment[i];
    }
    artifacts->facet_summaries = embedded.summaries;
    artifacts->skipped_ids = embedded.skipped_ids;
    for (int j = 0; j < k; ++j) {
      artifacts->noisy_sizes[j] = noisy_sizes.at(std::to_string(j));
    }
  }
  return report;
}

std::vector<ClioSummary> run_simple_clio(const std::vector<Conversation>& dataset, int k,
                                         llm::LlmClient& llm, emb::Embedder& embedder,
                                         std::uint64_t seed, PipelineArtifacts* artifacts) {
  if (dataset.empty()) throw ParameterError("run_simple_clio: dataset is empty");
  if (k < 1) throw ParameterError("run_simple_clio: k must be >= 1");

  constexpr std::size_t kSamplesPerCluster = 50;
  constexpr std::size_t kContrastive = 8;

  Rng master(seed);
  auto embedded = emb::embed_dataset(dataset, llm, embedder, 2);
  auto data = to_matrix(embedded);
  if (data.ids.size() < static_cast<std::size_t>(k)) {
    throw ParameterError("run_simple_clio: fewer usable conversations than k");
  }

  auto [centers, assignment_map] =
      kmeans(data.ids, data.points, k, 50, master.split(kStreamClustering).seed());

  std::vector<int> assignment(data.ids.size());
  for (std::size_t i = 0; i < data.ids.size(); ++i) {
    assignment[i] = assignment_map.cluster_of.at(data.ids[i]);
  }

  std::vector<ClioSummary> out(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    std::vector<std::size_t> inside;
    std::vector<std::pair<double, std::size_t>> outside;
    for (std::size_t i = 0; i < data.ids.size(); ++i) {
      double d2 = squared_distance(data.points[i], centers.centers[j]);
      if (assignment[i] == j) {
        inside.push_back(i);
      } else {
        outside.emplace_back(d2, i);
      }
    }
    if (inside.empty()) {
      out[j] = {"", ""};
      continue;
    }

    // Representatives: ceil(half) nearest the centroid, floor(half) uniform
    // from the remainder.
    std::sort(inside.begin(), inside.end(), [&](std::size_t a, std::size_t b) {
      double da = squared_distance(data.points[a], centers.centers[j]);
      double db = squared_distance(data.points[b], centers.centers[j]);
      if (da != db) return da < db;
      return a < b;
    });
    std::size_t want = std::min(kSamplesPerCluster, inside.size());
    std::size_t near_count = (want + 1) / 2;
    std::vector<std::size_t> reps(inside.begin(), inside.begin() + near_count);
    std::vector<std::string> rest_ids;
    for (std::size_t i = near_count; i < inside.size(); ++i) {
      rest_ids.push_back(data.ids[inside[i]]);
    }
    Rng sample_rng = master.split(kStreamSampling).split(static_cast<std::uint64_t>(j));
    for (const auto& id : sample_without_replacement(rest_ids, want - near_count, sample_rng)) {
      auto it = std::find(data.ids.begin(), data.ids.end(), id);
      reps.push_back(static_cast<std::size_t>(it - data.ids.begin()));
    }

    std::sort(outside.begin(), outside.end());
    std::vector<std::string> answer_lines;
    for (std::size_t idx : reps) {
      answer_lines.push_back("- " + embedded.summaries.at(data.ids[idx]));
    }
    std::vector<std::string> contrastive_lines;
    for (std::size_t i = 0; i < std::min(kContrastive, outside.size()); ++i) {
      contrastive_lines.push_back("- " + embedded.summaries.at(data.ids[outside[i].second]));
    }
    if (contrastive_lines.empty()) contrastive_lines.push_back("- (no nearby groups)");

    std::map<std::string, std::string> bindings{
        {"answers", join(answer_lines, "\n")},
        {"contrastive_answers", join(contrastive_lines, "\n")},
    };
    ClioSummary summary{"", "(unavailable)"};
    for (int attempt = 0; attempt < 2; ++attempt) {
      try {
        std::string raw =
            llm::complete_template(llm, llm::TemplateId::kLlmSummarizeClio, bindings);
        summary = {llm::parse_tagged(raw, "summary"),
                   clamp_ten_words(llm::parse_tagged(raw, "name"))};
        break;
      } catch (const ParseError&) {
      }
    }
    out[j] = std::move(summary);
  }

  if (artifacts != nullptr) {
    artifacts->centers = centers;
    artifacts->assignment = assignment_map;
    artifacts->facet_summaries = embedded.summaries;
    artifacts->skipped_ids = embedded.skipped_ids;
  }
  return out;
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where, std::vector<std::string>& violations) {
  if (!obj.is_object()) {
    violations.push_back(where + ": expected an object");
    return;
  }
  for (auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      violations.push_back(where + ": unexpected field '" + key + "'");
    }
  }
}

void scan_strings(const json& node, const std::vector<std::string>& ids,
                  const std::string& where, std::vector<std::string>& violations) {
  if (node.is_string()) {
    const auto& s = node.get_ref<const std::string&>();
    for (const auto& id : ids) {
      if (!id.empty() && s.find(id) != std::string::npos) {
        violations.push_back(where + ": contains dataset conversation id '" + id + "'");
      }
    }
  } else if (node.is_object()) {
    for (auto& [key, value] : node.items()) scan_strings(value, ids, where + "." + key, violations);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      scan_strings(node[i], ids, where + "[" + std::to_string(i) + "]", violations);
    }
  }
}

}  // namespace

std::vector<std::string> validate_release(const json& report,
                                          const std::vector<std::string>& dataset_ids) {
  std::vector<std::string> violations;
  check_keys(report,
             {"schema_version", "clusters", "params", "privacy_budget", "kwset_id", "timestamp"},
             "report", violations);
  if (report.contains("clusters")) {
    if (!report["clusters"].is_array()) {
      violations.push_back("report.clusters: expected an array");
    } else {
      for (std::size_t i = 0; i < report["clusters"].size(); ++i) {
        check_keys(report["clusters"][i],
                   {"cluster_index", "noisy_size", "keywords", "topic", "description",
                    "keyword_source"},
                   "report.clusters[" + std::to_string(i) + "]", violations);
      }
    }
  }
  if (report.contains("params")) {
    check_keys(report["params"],
               {"k", "t", "m", "size_threshold", "epsilon_c", "epsilon_hist", "epsilon_size",
                "delta_c", "seed", "dp_iters", "workers"},
               "report.params", violations);
  }
  if (report.contains("privacy_budget")) {
    check_keys(report["privacy_budget"], {"total_epsilon", "total_delta", "breakdown"},
               "report.privacy_budget", violations);
    if (report["privacy_budget"].contains("breakdown") &&
        report["privacy_budget"]["breakdown"].is_array()) {
      for (std::size_t i = 0; i < report["privacy_budget"]["breakdown"].size(); ++i) {
        check_keys(report["privacy_budget"]["breakdown"][i],
                   {"mechanism_id", "epsilon", "delta"},
                   "report.privacy_budget.breakdown[" + std::to_string(i) + "]", violations);
      }
    }
  }
  scan_strings(report, dataset_ids, "report", violations);
  return violations;
}

json params_to_json(const UraniaParams& p) {
  return json{{"k", p.k},
              {"t", p.t},
              {"m", p.m},
              {"size_threshold", p.size_threshold},
              {"epsilon_c", p.epsilon_c},
              {"epsilon_hist", p.epsilon_hist},
              {"epsilon_size", p.epsilon_size},
              {"delta_c", p.delta_c},
              {"seed", p.seed},
              {"dp_iters", p.dp_iters},
              {"workers", p.workers}};
}

UraniaParams params_from_json(const json& j) {
  UraniaParams p;
  p.k = j.value("k", p.k);
  p.t = j.value("t", p.t);
  p.m = j.value("m", p.m);
  p.size_threshold = j.value("size_threshold", p.size_threshold);
  p.epsilon_c = j.value("epsilon_c", p.epsilon_c);
  p.epsilon_hist = j.value("epsilon_hist", p.epsilon_hist);
  p.epsilon_size = j.value("epsilon_size", p.epsilon_size);
  p.delta_c = j.value("delta_c", p.delta_c);
  p.seed = j.value("seed", p.seed);
  p.dp_iters = j.value("dp_iters", p.dp_iters);
  p.workers = j.value("workers", p.workers);
  return p;
}

json budget_to_json(const BudgetReport& budget) {
  json breakdown = json::array();
  for (const auto& line : budget.breakdown) {
    breakdown.push_back(
        {{"mechanism_id", line.mechanism_id}, {"epsilon", line.epsilon}, {"delta", line.delta}});
  }
  return json{{"total_epsilon", budget.total_epsilon},
              {"total_delta", budget.total_delta},
              {"breakdown", breakdown}};
}

json report_to_json(const ReleasedReport& report) {
  json clusters = json::array();
  for (const auto& c : report.clusters) {
    clusters.push_back({{"cluster_index", c.cluster_index},
                        {"noisy_size", c.noisy_size},
                        {"keywords", c.keywords},
                        {"topic", c.topic},
                        {"description", c.description},
                        {"keyword_source", c.keyword_source}});
  }
  return json{{"schema_version", report.schema_version},
              {"clusters", clusters},
              {"params", params_to_json(report.params)},
              {"privacy_budget", budget_to_json(report.privacy_budget)},
              {"kwset_id", report.kwset_id},
              {"timestamp", report.timestamp}};
}

json kwset_to_json(const KeywordSet& set) {
  return json{{"keywords", set.keywords},
              {"provenance", provenance_name(set.provenance)},
              {"epsilon_spent", set.epsilon_spent},
              {"delta_spent", set.delta_spent},
              {"target_size", set.target_size}};
}

KeywordSet kwset_from_json(const json& j) {
  KeywordSet set;
  set.keywords = j.at("keywords").get<std::vector<std::string>>();
  set.provenance = provenance_from_name(j.at("provenance").get<std::string>());
  set.epsilon_spent = j.value("epsilon_spent", 0.0);
  set.delta_spent = j.value("delta_spent", 0.0);
  set.target_size = j.value("target_size", 200);
  set.validate();
  return set;
}

std::string kwset_identity(const KeywordSet& set) {
  std::string blob = provenance_name(set.provenance) + "\x1f" + join(set.keywords, "\x1f");
  return provenance_name(set.provenance) + "-" + content_hash_hex(blob).substr(0, 12);
}

std::vector<std::string> release_summary_texts(const ReleasedReport& report) {
  std::vector<std::string> out;
  out.reserve(report.clusters.size());
  for (const auto& c : report.clusters) {
    std::string text = c.topic;
    if (!c.description.empty()) text += ". " + c.description;
    out.push_back(std::move(text));
  }
  return out;
}

std::vector<std::string> clio_summary_texts(const std::vector<ClioSummary>& summaries) {
  std::vector<std::string> out;
  out.reserve(summaries.size());
  for (const auto& s : summaries) {
    if (s.name.empty() && s.summary.empty()) continue;
    std::string text = s.name;
    if (!s.summary.empty()) text += ". " + s.summary;
    out.push_back(std::move(text));
  }
  return out;
}

}  // namespace urania
