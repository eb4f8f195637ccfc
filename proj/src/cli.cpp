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

#include "urania/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "urania/embedding/embedder.hpp"
#include "urania/evaluation.hpp"
#include "urania/hierarchy.hpp"
#include "urania/llm/http_client.hpp"
#include "urania/llm/mock_client.hpp"
#include "urania/synthetic.hpp"
#include "urania/text.hpp"

namespace urania::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("invalid JSON in " + path.string());
  return j;
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(1) << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

llm::ProviderConfig provider_from_json(const json& j) {
  llm::ProviderConfig c;
  c.endpoint_url = j.value("endpoint_url", c.endpoint_url);
  c.auth_token_env_var = j.value("auth_token_env_var", c.auth_token_env_var);
  c.model_id = j.value("model_id", c.model_id);
  c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.backoff_base_ms = j.value("backoff_base_ms", c.backoff_base_ms);
  c.rate_limit_per_min = j.value("rate_limit_per_min", c.rate_limit_per_min);
  c.max_output_tokens = j.value("max_output_tokens", c.max_output_tokens);
  c.temperature = j.value("temperature", c.temperature);
  c.response_json_pointer = j.value("response_json_pointer", c.response_json_pointer);
  return c;
}

json provider_to_json(const llm::ProviderConfig& c) {
  return json{{"endpoint_url", c.endpoint_url},
              {"auth_token_env_var", c.auth_token_env_var},
              {"model_id", c.model_id},
              {"timeout_ms", c.timeout_ms},
              {"max_retries", c.max_retries},
              {"backoff_base_ms", c.backoff_base_ms},
              {"rate_limit_per_min", c.rate_limit_per_min},
              {"max_output_tokens", c.max_output_tokens},
              {"temperature", c.temperature},
              {"response_json_pointer", c.response_json_pointer}};
}

// Owns whichever provider/embedder stack the config selects.
struct Stack {
  std::unique_ptr<llm::LlmClient> llm_owned;
  std::unique_ptr<emb::Embedder> embedder_raw;
  std::unique_ptr<emb::CachingEmbedder> embedder_cached;

  llm::LlmClient& llm() { return *llm_owned; }
  emb::Embedder& embedder() { return *embedder_cached; }
};

Stack make_stack(const RunConfig& config, const std::optional<fs::path>& cache_dir) {
  Stack stack;
  if (config.provider_mock) {
    stack.llm_owned = std::make_unique<llm::MockLlm>(config.urania.seed);
  } else {
    stack.llm_owned = std::make_unique<llm::HttpLlmClient>(config.provider);
  }
  if (config.embedder_mock) {
    stack.embedder_raw =
        std::make_unique<emb::MockEmbedder>(config.urania.seed, config.mock_embedder_dim);
  } else {
    stack.embedder_raw = std::make_unique<emb::HttpEmbedder>(config.embedder_provider);
  }
  stack.embedder_cached = std::make_unique<emb::CachingEmbedder>(*stack.embedder_raw, cache_dir);
  return stack;
}

// Noise seeds must never silently default: a config without one gets OS
// entropy, and the drawn value is recorded in the run's config copy.
void resolve_seed(RunConfig& config) {
  if (config.seed_set) return;
  config.urania.seed = Rng::from_os_entropy().next_u64();
  config.seed_set = true;
  log_info("no seed specified; drew " + std::to_string(config.urania.seed) +
           " from OS entropy (recorded in config.json)");
}

std::string resolved_timestamp(const RunConfig& config) {
  if (!config.timestamp.empty()) return config.timestamp;
  if (config.provider_mock && config.embedder_mock) {
    // Mock runs are contractually byte-reproducible; a wall-clock stamp
    // would break that.
    return "1970-01-01T00:00:00Z";
  }
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&now));
  return buf;
}

std::vector<std::string> docs_for_kwset(const std::vector<Conversation>& dataset,
                                        const std::string& method, llm::LlmClient& llm) {
  std::vector<std::string> docs;
  docs.reserve(dataset.size());
  if (method == "tfidf" || method == "public") {
    for (const auto& conv : dataset) docs.push_back(flatten_conversation(conv));
    return docs;
  }
  // llm / hybrid operate on facet summaries.
  for (const auto& conv : dataset) {
    if (auto facets = emb::extract_facets(conv, llm)) docs.push_back(facets->summary);
  }
  return docs;
}

KeywordSet build_or_load_kwset(const RunConfig& config,
                               const std::vector<Conversation>& dataset,
                               llm::LlmClient& llm, PrivacyLedger& ledger) {
  if (!config.kwset.path.empty()) {
    return kwset_from_json(read_json_file(config.kwset.path));
  }
  const auto& kc = config.kwset;
  Rng rng(splitmix64(config.urania.seed ^ 0x6b77736574ULL));  // kwset noise stream

  if (kc.method == "planted") {
    return planted_keyword_set(default_topics());
  }
  if (kc.method == "tfidf") {
    return build_kwset_tfidf(docs_for_kwset(dataset, kc.method, llm), kc.epsilon, kc.delta, llm,
                             rng, kc.target_size, &ledger);
  }
  if (kc.method == "llm") {
    return build_kwset_llm(docs_for_kwset(dataset, kc.method, llm), kc.epsilon, kc.delta, llm,
                           rng, kc.target_size, &ledger);
  }
  if (kc.method == "public") {
    if (kc.public_dataset_path.empty()) {
      throw ConfigError("kwset method 'public' needs kwset.public_dataset_path");
    }
    auto public_dataset = resolve_dataset(kc.public_dataset_path, config.urania.seed + 1);
    return build_kwset_public(docs_for_kwset(public_dataset, "public", llm), llm,
                              kc.target_size);
  }
  if (kc.method == "hybrid") {
    if (kc.public_dataset_path.empty()) {
      throw ConfigError("kwset method 'hybrid' needs kwset.public_dataset_path");
    }
    auto public_dataset = resolve_dataset(kc.public_dataset_path, config.urania.seed + 1);
    KeywordSet public_set =
        build_kwset_public(docs_for_kwset(public_dataset, "public", llm), llm, kc.target_size);
    return build_kwset_hybrid(public_set, docs_for_kwset(dataset, "hybrid", llm), kc.epsilon,
                              kc.delta, llm, rng, &ledger);
  }
  throw ConfigError("unknown kwset method '" + kc.method + "'");
}

void print_budget(const BudgetReport& budget) {
  std::printf("privacy budget: epsilon=%.6g delta=%.3g\n", budget.total_epsilon,
              budget.total_delta);
  for (const auto& line : budget.breakdown) {
    std::printf("  %-28s epsilon=%.6g delta=%.3g\n", line.mechanism_id.c_str(), line.epsilon,
                line.delta);
  }
}

json assignment_to_json(const Assignment& assignment) {
  json j = json::object();
  for (const auto& [id, cluster] : assignment.cluster_of) j[id] = cluster;
  return j;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.dataset_path = j.value("dataset_path", c.dataset_path);
  c.output_dir = j.value("output_dir", c.output_dir);

  if (j.contains("provider")) {
    if (j["provider"].is_string()) {
      c.provider_mock = j["provider"].get<std::string>() == "mock";
      if (!c.provider_mock) throw ConfigError("provider must be \"mock\" or an object");
    } else {
      c.provider_mock = false;
      c.provider = provider_from_json(j["provider"]);
    }
  }
  if (j.contains("embedder")) {
    if (j["embedder"].is_string()) {
      c.embedder_mock = j["embedder"].get<std::string>() == "mock";
      if (!c.embedder_mock) throw ConfigError("embedder must be \"mock\" or an object");
    } else {
      c.embedder_mock = false;
      c.embedder_provider = provider_from_json(j["embedder"]);
    }
  }
  c.mock_embedder_dim = j.value("mock_embedder_dim", c.mock_embedder_dim);
  c.seed_set = j.contains("urania") && j["urania"].contains("seed");
  if (j.contains("urania")) c.urania = params_from_json(j["urania"]);
  c.baseline_k = j.value("baseline_k", c.baseline_k);

  if (j.contains("kwset")) {
    const auto& k = j["kwset"];
    c.kwset.method = k.value("method", c.kwset.method);
    c.kwset.epsilon = k.value("epsilon", c.kwset.epsilon);
    c.kwset.delta = k.value("delta", c.kwset.delta);
    c.kwset.target_size = k.value("target_size", c.kwset.target_size);
    c.kwset.path = k.value("path", c.kwset.path);
    c.kwset.public_dataset_path = k.value("public_dataset_path", c.kwset.public_dataset_path);
  }
  if (j.contains("eval")) {
    const auto& e = j["eval"];
    c.eval.match_threshold = e.value("match_threshold", c.eval.match_threshold);
    c.eval.judge_samples = e.value("judge_samples", c.eval.judge_samples);
    c.eval.seed = e.value("seed", c.eval.seed);
  }
  if (j.contains("audit")) {
    const auto& a = j["audit"];
    c.audit.n_runs = a.value("n_runs", c.audit.n_runs);
    c.audit.n_background = a.value("n_background", c.audit.n_background);
    c.audit.seed = a.value("seed", c.audit.seed);
    c.audit.pipeline = a.value("pipeline", c.audit.pipeline);
    c.audit.k = a.value("k", c.audit.k);
    c.audit.sensitive_path = a.value("sensitive_path", c.audit.sensitive_path);
    if (a.contains("threshold_grid") && a["threshold_grid"].is_array()) {
      for (const auto& t : a["threshold_grid"]) {
        if (t.is_number()) c.audit.threshold_grid.push_back(t.get<double>());
      }
    }
  }
  c.unsafe_keep_assignment = j.value("unsafe_keep_assignment", c.unsafe_keep_assignment);
  c.timestamp = j.value("timestamp", c.timestamp);
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["dataset_path"] = dataset_path;
  j["output_dir"] = output_dir;
  j["provider"] = provider_mock ? json("mock") : provider_to_json(provider);
  j["embedder"] = embedder_mock ? json("mock") : provider_to_json(embedder_provider);
  j["mock_embedder_dim"] = mock_embedder_dim;
  j["urania"] = params_to_json(urania);
  j["baseline_k"] = baseline_k;
  j["kwset"] = json{{"method", kwset.method},
                    {"epsilon", kwset.epsilon},
                    {"delta", kwset.delta},
                    {"target_size", kwset.target_size},
                    {"path", kwset.path},
                    {"public_dataset_path", kwset.public_dataset_path}};
  j["eval"] = json{{"match_threshold", eval.match_threshold},
                   {"judge_samples", eval.judge_samples},
                   {"seed", eval.seed}};
  j["audit"] = json{{"n_runs", audit.n_runs},
                    {"n_background", audit.n_background},
                    {"seed", audit.seed},
                    {"pipeline", audit.pipeline},
                    {"k", audit.k},
                    {"sensitive_path", audit.sensitive_path},
                    {"threshold_grid", audit.threshold_grid}};
  j["unsafe_keep_assignment"] = unsafe_keep_assignment;
  j["timestamp"] = timestamp;
  return j;
}

RunConfig RunConfig::load(const fs::path& path) {
  return from_json(read_json_file(path));
}

std::vector<Conversation> load_dataset_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  std::vector<Conversation> out;
  std::set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": malformed JSON line");
    }
    Conversation conv;
    if (j.contains("id")) {
      if (!j["id"].is_string()) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                          ": 'id' must be a string");
      }
      conv.id = j["id"].get<std::string>();
    } else {
      char buf[16];
      std::snprintf(buf, sizeof buf, "c%06d", line_no);
      conv.id = buf;
    }
    if (!seen_ids.insert(conv.id).second) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": duplicate id '" +
                        conv.id + "'");
    }
    if (!j.contains("messages") || !j["messages"].is_array() || j["messages"].empty()) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": 'messages' must be a non-empty array");
    }
    for (const auto& m : j["messages"]) {
      if (!m.is_object() || !m.contains("role") || !m.contains("content") ||
          !m["role"].is_string() || !m["content"].is_string()) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                          ": each message needs string 'role' and 'content'");
      }
      std::string role = m["role"].get<std::string>();
      if (role != "user" && role != "assistant") {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                          ": role must be 'user' or 'assistant'");
      }
      conv.messages.push_back(
          {role == "user" ? Role::kUser : Role::kAssistant, m["content"].get<std::string>()});
    }
    conv.language_hint = j.value("language_hint", std::string());
    out.push_back(std::move(conv));
  }
  return out;
}

std::vector<Conversation> resolve_dataset(const std::string& dataset_path, std::uint64_t seed) {
  if (dataset_path.rfind("synthetic:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(dataset_path.substr(10));
    } catch (const std::exception&) {
      throw ConfigError("bad synthetic dataset spec '" + dataset_path + "'");
    }
    if (n < 5) throw ConfigError("synthetic dataset needs at least 5 conversations");
    int per_topic = (n + 4) / 5;
    auto corpus = synthetic_corpus(default_topics(), per_topic, seed);
    corpus.resize(static_cast<std::size_t>(n));
    return corpus;
  }
  return load_dataset_jsonl(dataset_path);
}

json dataset_manifest(const std::vector<Conversation>& dataset) {
  json records = json::array();
  for (const auto& conv : dataset) {
    records.push_back(
        {{"id", conv.id}, {"content_hash", content_hash_hex(flatten_conversation(conv))}});
  }
  return json{{"count", dataset.size()}, {"records", records}};
}

std::vector<std::string> manifest_ids(const json& manifest) {
  std::vector<std::string> ids;
  for (const auto& record : manifest.at("records")) {
    ids.push_back(record.at("id").get<std::string>());
  }
  return ids;
}

int cmd_ingest(const std::string& dataset_path, const std::string& manifest_out) {
  auto dataset = load_dataset_jsonl(dataset_path);
  json manifest = dataset_manifest(dataset);
  std::string out = manifest_out.empty() ? dataset_path + ".manifest" : manifest_out;
  write_json_file(out, manifest);
  std::printf("ingested %zu conversations -> %s\n", dataset.size(), out.c_str());
  return 0;
}

int cmd_kwset(const RunConfig& config_in) {
  RunConfig config = config_in;
  resolve_seed(config);
  fs::create_directories(config.output_dir);
  auto dataset = resolve_dataset(config.dataset_path, config.urania.seed);
  auto stack = make_stack(config, fs::path(config.output_dir) / "embeddings");
  PrivacyLedger ledger;
  KeywordSet set = build_or_load_kwset(config, dataset, stack.llm(), ledger);
  write_json_file(fs::path(config.output_dir) / "kwset.json", kwset_to_json(set));
  std::printf("keyword set '%s': %zu keywords (provenance %s, epsilon %.3g)\n",
              kwset_identity(set).c_str(), set.keywords.size(),
              provenance_name(set.provenance).c_str(), set.epsilon_spent);
  if (!ledger.empty()) print_budget(ledger.report_prefix("kwset/"));
  return 0;
}

int cmd_run(const RunConfig& config_in, bool baseline) {
  RunConfig config = config_in;
  resolve_seed(config);
  fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  auto dataset = resolve_dataset(config.dataset_path, config.urania.seed);
  json manifest = dataset_manifest(dataset);
  write_json_file(out_dir / "dataset.manifest", manifest);
  write_json_file(out_dir / "config.json", config.to_json());

  auto stack = make_stack(config, out_dir / "embeddings");

  if (baseline) {
    int k = config.baseline_k > 0
                ? config.baseline_k
                : static_cast<int>((dataset.size() + 149) / 150);
    PipelineArtifacts artifacts;
    auto summaries =
        run_simple_clio(dataset, k, stack.llm(), stack.embedder(), config.urania.seed,
                        &artifacts);
    json out = json::object();
    out["schema_version"] = 1;
    json arr = json::array();
    for (const auto& s : summaries) {
      arr.push_back({{"name", s.name}, {"summary", s.summary}});
    }
    out["summaries"] = arr;
    out["timestamp"] = resolved_timestamp(config);
    write_json_file(out_dir / "summaries.json", out);
    if (config.unsafe_keep_assignment) {
      fs::create_directories(out_dir / "eval");
      write_json_file(out_dir / "eval" / "assignment.json",
                      assignment_to_json(artifacts.assignment));
    }
    stack.embedder_cached->flush();
    std::printf("baseline run complete: %zu summaries -> %s\n", summaries.size(),
                (out_dir / "summaries.json").string().c_str());
    return 0;
  }

  PrivacyLedger ledger;
  KeywordSet kwset = build_or_load_kwset(config, dataset, stack.llm(), ledger);
  if (kwset.keywords.empty()) {
    throw ConfigError(
        "keyword set construction kept no keywords; at this corpus size the partition-selection "
        "threshold exceeds every count. Raise kwset.epsilon, use a larger corpus, or point "
        "kwset.path at a public keyword set");
  }
  write_json_file(out_dir / "kwset.json", kwset_to_json(kwset));

  PipelineArtifacts artifacts;
  ReleasedReport report = run_urania(dataset, kwset, config.urania, stack.llm(),
                                     stack.embedder(), ledger, &artifacts);
  report.timestamp = resolved_timestamp(config);

  json report_json = report_to_json(report);
  auto violations = validate_release(report_json, manifest_ids(manifest));
  write_json_file(out_dir / "report.json", report_json);

  json centers = json::array();
  for (const auto& c : artifacts.centers.centers) centers.push_back(c);
  write_json_file(out_dir / "centers.json",
                  json{{"centers", centers},
                       {"k_requested", artifacts.centers.k_requested},
                       {"k_effective", artifacts.centers.k_effective}});

  write_json_file(out_dir / "ledger.json",
                  json{{"pipeline", budget_to_json(ledger.report_prefix("urania/"))},
                       {"kwset", budget_to_json(ledger.report_prefix("kwset/"))},
                       {"combined", budget_to_json(ledger.report())}});

  if (!report.clusters.empty()) {
    auto nodes = build_hierarchy(report.clusters, default_k_top(report.clusters.size()),
                                 stack.llm(), stack.embedder(), config.urania.seed);
    export_hierarchy(nodes, out_dir / "hierarchy.json");
  } else {
    log_warn("no clusters qualified for release; hierarchy.json not written");
  }

  if (config.unsafe_keep_assignment) {
    fs::create_directories(out_dir / "eval");
    write_json_file(out_dir / "eval" / "assignment.json",
                    assignment_to_json(artifacts.assignment));
  }
  stack.embedder_cached->flush();

  print_budget(report.privacy_budget);
  std::printf("released %zu clusters -> %s\n", report.clusters.size(),
              (out_dir / "report.json").string().c_str());

  if (!violations.empty()) {
    for (const auto& v : violations) std::fprintf(stderr, "release violation: %s\n", v.c_str());
    throw ValidationError("release validation failed with " +
                          std::to_string(violations.size()) + " violation(s)");
  }
  return 0;
}

namespace {

// Released summary texts of a run directory, for either pipeline flavor.
std::vector<std::string> run_summaries(const fs::path& dir,
                                       std::map<int, std::string>* by_cluster = nullptr) {
  if (fs::exists(dir / "report.json")) {
    json report = read_json_file(dir / "report.json");
    std::vector<std::string> out;
    for (const auto& c : report.at("clusters")) {
      std::string text = c.at("topic").get<std::string>();
      std::string desc = c.value("description", std::string());
      if (!desc.empty()) text += ". " + desc;
      if (by_cluster != nullptr) (*by_cluster)[c.at("cluster_index").get<int>()] = text;
      out.push_back(std::move(text));
    }
    return out;
  }
  if (fs::exists(dir / "summaries.json")) {
    json summaries = read_json_file(dir / "summaries.json");
    std::vector<std::string> out;
    int index = 0;
    for (const auto& s : summaries.at("summaries")) {
      std::string text = s.at("name").get<std::string>();
      std::string body = s.value("summary", std::string());
      if (!body.empty()) text += ". " + body;
      if (by_cluster != nullptr) (*by_cluster)[index] = text;
      ++index;
      out.push_back(std::move(text));
    }
    return out;
  }
  throw ConfigError("no report.json or summaries.json in " + dir.string());
}

std::map<std::string, int> read_assignment(const fs::path& dir) {
  std::map<std::string, int> out;
  fs::path path = dir / "eval" / "assignment.json";
  if (!fs::exists(path)) return out;
  json doc = read_json_file(path);
  for (const auto& [id, cluster] : doc.items()) {
    out[id] = cluster.get<int>();
  }
  return out;
}

}  // namespace

int cmd_eval(const std::string& private_run_dir, const std::string& public_run_dir,
             const std::string& out_dir, const RunConfig& config) {
  fs::path priv_dir(private_run_dir), pub_dir(public_run_dir);
  if (!fs::exists(priv_dir)) throw ConfigError("missing run dir " + private_run_dir);
  if (!fs::exists(pub_dir)) throw ConfigError("missing run dir " + public_run_dir);
  fs::path out(out_dir.empty() ? (priv_dir / "eval_vs_public").string() : out_dir);
  fs::create_directories(out);

  std::map<int, std::string> priv_by_cluster, pub_by_cluster;
  auto priv_summaries = run_summaries(priv_dir, &priv_by_cluster);
  auto pub_summaries = run_summaries(pub_dir, &pub_by_cluster);
  if (priv_summaries.empty() || pub_summaries.empty()) {
    throw ConfigError("eval: both runs must have released summaries");
  }

  auto stack = make_stack(config, out / "embeddings");

  eval::MetricReport metrics;
  auto lexical = eval::lexical_similarity(priv_summaries, pub_summaries);
  metrics.keyphrase_jaccard = lexical.keyphrase_jaccard;
  metrics.nounchunk_jaccard = lexical.nounchunk_jaccard;
  metrics.tfidf_cosine = lexical.tfidf_cosine;
  std::tie(metrics.token_overlap, metrics.bigram_overlap) =
      eval::ngram_overlap(priv_summaries, pub_summaries);
  metrics.topic_coverage = eval::topic_coverage(priv_summaries, pub_summaries,
                                                stack.embedder(), config.eval.match_threshold);
  std::tie(metrics.mean_cosine, metrics.median_cosine) =
      eval::embedding_proximity(priv_summaries, pub_summaries, stack.embedder());

  // Judge metrics need the eval-only assignments and the dataset; the
  // dataset path falls back to the one recorded in the private run's config.
  auto priv_assignment = read_assignment(priv_dir);
  auto pub_assignment = read_assignment(pub_dir);
  std::string dataset_path = config.dataset_path;
  std::uint64_t dataset_seed = config.urania.seed;
  if (dataset_path.empty() && fs::exists(priv_dir / "config.json")) {
    auto run_config = RunConfig::from_json(read_json_file(priv_dir / "config.json"));
    dataset_path = run_config.dataset_path;
    dataset_seed = run_config.urania.seed;
  }
  if (!priv_assignment.empty() && !pub_assignment.empty() && !dataset_path.empty()) {
    auto dataset = resolve_dataset(dataset_path, dataset_seed);
    std::map<std::string, const Conversation*> by_id;
    for (const auto& conv : dataset) by_id[conv.id] = &conv;

    std::vector<eval::JudgeSample> samples;
    for (const auto& [id, priv_cluster] : priv_assignment) {
      auto pub_it = pub_assignment.find(id);
      auto conv_it = by_id.find(id);
      if (pub_it == pub_assignment.end() || conv_it == by_id.end()) continue;
      auto priv_sum = priv_by_cluster.find(priv_cluster);
      auto pub_sum = pub_by_cluster.find(pub_it->second);
      if (priv_sum == priv_by_cluster.end() || pub_sum == pub_by_cluster.end()) continue;
      samples.push_back(
          {flatten_conversation(*conv_it->second), priv_sum->second, pub_sum->second});
    }
    if (!samples.empty()) {
      Rng rng(config.eval.seed);
      for (std::size_t i = samples.size(); i > 1; --i) {
        std::swap(samples[i - 1], samples[rng.below(i)]);
      }
      if (samples.size() > static_cast<std::size_t>(config.eval.judge_samples)) {
        samples.resize(static_cast<std::size_t>(config.eval.judge_samples));
      }
      auto binary = eval::llm_binary_preference(samples, stack.llm(), config.eval.seed);
      metrics.binary_dp_preferred_pct = binary.dp_preferred_pct;
      auto ranking = eval::llm_comparative_ranking(samples, stack.llm(), config.eval.seed + 1);
      metrics.comparative_ranking_mean = ranking.mean;

      std::vector<std::pair<std::string, std::string>> priv_pairs, pub_pairs;
      for (const auto& s : samples) {
        priv_pairs.emplace_back(s.conversation_text, s.private_summary);
        pub_pairs.emplace_back(s.conversation_text, s.public_summary);
      }
      metrics.independent_score_private = eval::llm_independent_score(priv_pairs, stack.llm());
      metrics.independent_score_public = eval::llm_independent_score(pub_pairs, stack.llm());
    }
  } else {
    log_info("eval: no assignments available; judge metrics skipped "
             "(re-run with --unsafe-keep-assignment to enable them)");
  }

  write_json_file(out / "metrics.json", eval::metric_report_to_json(metrics));
  write_text_file(out / "report.html",
                  eval::render_metric_report_html(metrics, "Private vs public summaries"));
  stack.embedder_cached->flush();
  std::printf("metrics -> %s\n", (out / "metrics.json").string().c_str());
  return 0;
}

int cmd_audit(const RunConfig& config_in) {
  RunConfig config = config_in;
  resolve_seed(config);
  fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  auto stack = make_stack(config, out_dir / "embeddings");

  audit::LeakageConfig leakage;
  leakage.n_runs = config.audit.n_runs;
  leakage.n_background = config.audit.n_background;
  leakage.seed = config.audit.seed;
  leakage.workers = config.urania.workers;
  leakage.threshold_grid = config.audit.threshold_grid;
  if (!config.audit.sensitive_path.empty()) {
    auto sensitive_set = load_dataset_jsonl(config.audit.sensitive_path);
    if (sensitive_set.empty()) throw ConfigError("audit: sensitive dataset is empty");
    leakage.sensitive = sensitive_set.front();
  }

  // The predefined keyword set is fixed across runs: the planted vocabulary
  // of the background topics.
  KeywordSet kwset = planted_keyword_set(background_topics());

  audit::PipelineRunner runner;
  if (config.audit.pipeline == "urania") {
    runner = [&](const std::vector<Conversation>& dataset, std::uint64_t run_seed) {
      UraniaParams params = config.urania;
      params.seed = run_seed;
      params.k = config.audit.k;
      PrivacyLedger ledger;
      auto report = run_urania(dataset, kwset, params, stack.llm(), stack.embedder(), ledger);
      return release_summary_texts(report);
    };
  } else if (config.audit.pipeline == "baseline") {
    runner = [&](const std::vector<Conversation>& dataset, std::uint64_t run_seed) {
      auto summaries = run_simple_clio(dataset, config.audit.k, stack.llm(), stack.embedder(),
                                       run_seed);
      return clio_summary_texts(summaries);
    };
  } else {
    throw ConfigError("audit.pipeline must be 'urania' or 'baseline'");
  }

  auto result = audit::run_leakage_experiment(runner, leakage, stack.llm(), stack.embedder());
  write_json_file(out_dir / "roc.json", audit::roc_to_json(result));
  write_text_file(out_dir / "roc_points.csv", audit::roc_points_csv(result));
  stack.embedder_cached->flush();
  std::printf("leakage AUC (%s pipeline, %d runs): %.4f -> %s\n",
              config.audit.pipeline.c_str(), config.audit.n_runs, result.auc,
              (out_dir / "roc.json").string().c_str());
  return 0;
}

int cmd_hierarchy(const std::string& run_dir, const RunConfig& config) {
  fs::path dir(run_dir);
  json report = read_json_file(dir / "report.json");
  std::vector<ClusterRelease> releases;
  for (const auto& c : report.at("clusters")) {
    ClusterRelease r;
    r.cluster_index = c.at("cluster_index").get<int>();
    r.noisy_size = c.at("noisy_size").get<std::int64_t>();
    r.keywords = c.at("keywords").get<std::vector<std::string>>();
    r.topic = c.at("topic").get<std::string>();
    r.description = c.value("description", std::string());
    r.keyword_source = c.value("keyword_source", std::string("histogram"));
    releases.push_back(std::move(r));
  }
  if (releases.empty()) throw ConfigError("hierarchy: the report has no released clusters");

  auto stack = make_stack(config, dir / "embeddings");
  auto nodes = build_hierarchy(releases, default_k_top(releases.size()), stack.llm(),
                               stack.embedder(), config.urania.seed);
  export_hierarchy(nodes, dir / "hierarchy.json");
  stack.embedder_cached->flush();
  std::printf("hierarchy -> %s\n", (dir / "hierarchy.json").string().c_str());
  return 0;
}

int cmd_report(const std::string& run_dir, const std::string& out_path) {
  fs::path dir(run_dir);
  json report = read_json_file(dir / "report.json");

  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>Released "
          "summaries</title>\n<style>body{font-family:sans-serif;margin:2em}table{border-"
          "collapse:collapse}td,th{border:1px solid #999;padding:4px 10px}th{background:#eee}"
          "</style>\n</head>\n<body>\n<h1>Released summaries</h1>\n";
  html << "<p>Keyword set: " << report.value("kwset_id", std::string("?")) << "</p>\n";
  if (report.contains("privacy_budget")) {
    html << "<p>Privacy budget: epsilon = "
         << report["privacy_budget"].value("total_epsilon", 0.0)
         << ", delta = " << report["privacy_budget"].value("total_delta", 0.0) << "</p>\n";
  }
  html << "<table>\n<tr><th>Cluster</th><th>Noisy size</th><th>Topic</th><th>Description</th>"
          "<th>Keywords</th><th>Source</th></tr>\n";
  for (const auto& c : report.at("clusters")) {
    html << "<tr><td>" << c.at("cluster_index").get<int>() << "</td><td>"
         << c.at("noisy_size").get<std::int64_t>() << "</td><td>"
         << c.at("topic").get<std::string>() << "</td><td>"
         << c.value("description", std::string()) << "</td><td>";
    bool first = true;
    for (const auto& kw : c.at("keywords")) {
      if (!first) html << ", ";
      html << kw.get<std::string>();
      first = false;
    }
    html << "</td><td>" << c.value("keyword_source", std::string()) << "</td></tr>\n";
  }
  html << "</table>\n</body>\n</html>\n";

  std::string out = out_path.empty() ? (dir / "run_report.html").string() : out_path;
  write_text_file(out, html.str());
  std::printf("report -> %s\n", out.c_str());
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e) != nullptr) return 4;
  if (dynamic_cast<const ProviderError*>(&e) != nullptr) return 3;
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return 2;
  if (dynamic_cast<const ParameterError*>(&e) != nullptr) return 2;
  return 1;
}

}  // namespace urania::cli
