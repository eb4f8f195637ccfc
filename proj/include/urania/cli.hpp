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

#ifndef URANIA_CLI_HPP_
#define URANIA_CLI_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "urania/pipeline.hpp"
#include "urania/privacy_audit.hpp"

namespace urania::cli {

// One structured config file drives every command; CLI flags override
// individual fields. The resolved config is copied into the run directory
// for provenance.
struct RunConfig {
  std::string dataset_path;  // JSONL, or "synthetic:<n>" for the built-in corpus
  std::string output_dir = "runs/out";

  bool provider_mock = true;
  llm::ProviderConfig provider;
  bool embedder_mock = true;
  llm::ProviderConfig embedder_provider;
  // Low-dimensional on purpose: random-initialization DP clustering needs
  // the concentration of a small sphere for desk-scale corpora to separate.
  int mock_embedder_dim = 8;

  UraniaParams urania;
  int baseline_k = 0;  // 0 = same ceil(n/150) rule

  struct Kwset {
    std::string method = "tfidf";  // tfidf | llm | public | hybrid | planted
    double epsilon = 1.0;
    double delta = 1e-5;
    int target_size = 200;
    std::string path;                 // load an existing kwset.json instead
    std::string public_dataset_path;  // for public/hybrid
  } kwset;

  struct Eval {
    double match_threshold = 0.7;
    int judge_samples = 100;
    std::uint64_t seed = 99;
  } eval;

  struct Audit {
    int n_runs = 200;
    int n_background = 99;
    std::uint64_t seed = 7;
    std::string pipeline = "urania";  // urania | baseline
    int k = 4;
    std::string sensitive_path;  // JSONL with one conversation; empty = built-in
    std::vector<double> threshold_grid;  // empty = all observed scores
  } audit;

  bool unsafe_keep_assignment = false;
  std::string timestamp;  // fixed value; empty = epoch for mock runs, now otherwise

  // False when neither the config file nor a flag named a seed; commands
  // then draw one from OS entropy and record it for provenance.
  bool seed_set = true;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static RunConfig load(const std::filesystem::path& path);
};

// JSONL loader: one conversation per line,
// {"id": str?, "messages": [{"role": "user"|"assistant", "content": str}]}.
// Missing ids are assigned deterministically from the line number. Malformed
// lines and duplicate ids raise ConfigError naming the line.
std::vector<Conversation> load_dataset_jsonl(const std::filesystem::path& path);

// Resolves either a JSONL path or the "synthetic:<n>" scheme.
std::vector<Conversation> resolve_dataset(const std::string& dataset_path, std::uint64_t seed);

nlohmann::json dataset_manifest(const std::vector<Conversation>& dataset);
std::vector<std::string> manifest_ids(const nlohmann::json& manifest);

int cmd_ingest(const std::string& dataset_path, const std::string& manifest_out);
int cmd_kwset(const RunConfig& config);
int cmd_run(const RunConfig& config, bool baseline);
int cmd_eval(const std::string& private_run_dir, const std::string& public_run_dir,
             const std::string& out_dir, const RunConfig& config);
int cmd_audit(const RunConfig& config);
int cmd_hierarchy(const std::string& run_dir, const RunConfig& config);
int cmd_report(const std::string& run_dir, const std::string& out_path);

// Exit-code contract: 0 success, 2 config error, 3 provider error,
// 4 release-validation failure.
int exit_code_for(const std::exception& e);

}  // namespace urania::cli

#endif  // URANIA_CLI_HPP_
