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

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "urania/cli.hpp"
#include "urania/common.hpp"

namespace {

using urania::cli::RunConfig;

RunConfig load_config(const std::string& config_path) {
  if (config_path.empty()) {
    RunConfig config;
    config.seed_set = false;  // no config file: commands draw an entropy seed
    return config;
  }
  return RunConfig::load(config_path);
}

struct Overrides {
  std::string dataset;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<int> k;
  bool unsafe_keep_assignment = false;

  void apply(RunConfig& config) const {
    if (!dataset.empty()) config.dataset_path = dataset;
    if (!output.empty()) config.output_dir = output;
    if (seed) {
      config.urania.seed = *seed;
      config.seed_set = true;
    }
    if (k) {
      config.urania.k = *k;
      config.baseline_k = *k;
    }
    if (unsafe_keep_assignment) config.unsafe_keep_assignment = true;
  }
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--dataset", o.dataset, "Dataset JSONL path or synthetic:<n>");
  cmd->add_option("--output", o.output, "Output directory");
  cmd->add_option("--seed", o.seed, "Run seed");
  cmd->add_option("-k,--clusters", o.k, "Number of clusters (0 = auto)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"urania: differentially private text-corpus summarization"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path, "Run config JSON (shared by all subcommands)");

  // ingest
  std::string ingest_path, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Validate a JSONL dataset and write its manifest");
  ingest->add_option("dataset", ingest_path, "Dataset JSONL path")->required();
  ingest->add_option("-o,--out", ingest_out, "Manifest output path");

  // kwset
  Overrides kwset_overrides;
  std::string kwset_method;
  auto* kwset = app.add_subcommand("kwset", "Build a keyword set");
  add_override_flags(kwset, kwset_overrides);
  kwset->add_option("--method", kwset_method, "tfidf | llm | public | hybrid | planted");

  // run
  Overrides run_overrides;
  bool baseline = false;
  std::string run_kwset_method;
  auto* run = app.add_subcommand("run", "Run the DP pipeline end to end");
  add_override_flags(run, run_overrides);
  run->add_flag("--baseline", baseline, "Run the non-private baseline instead");
  run->add_option("--kwset-method", run_kwset_method,
                  "tfidf | llm | public | hybrid | planted");
  run->add_flag("--unsafe-keep-assignment", run_overrides.unsafe_keep_assignment,
                "Write the internal assignment into an eval-only subdirectory");

  // eval
  std::string eval_private, eval_public, eval_out, eval_dataset;
  auto* evalc = app.add_subcommand("eval", "Compare two run directories");
  evalc->add_option("private_run", eval_private, "Run directory of the DP pipeline")->required();
  evalc->add_option("public_run", eval_public, "Run directory of the baseline")->required();
  evalc->add_option("-o,--out", eval_out, "Output directory for metrics");
  evalc->add_option("--dataset", eval_dataset,
                    "Dataset for judge metrics (default: the private run's recorded dataset)");

  // audit
  Overrides audit_overrides;
  std::string audit_pipeline;
  std::optional<int> audit_runs;
  auto* auditc = app.add_subcommand("audit", "Run the empirical privacy-leakage experiment");
  add_override_flags(auditc, audit_overrides);
  auditc->add_option("--pipeline", audit_pipeline, "urania | baseline");
  auditc->add_option("--runs", audit_runs, "Number of experiment runs (even)");

  // hierarchy
  std::string hierarchy_dir;
  auto* hier = app.add_subcommand("hierarchy", "Rebuild hierarchy.json for a run directory");
  hier->add_option("run_dir", hierarchy_dir, "Run directory")->required();

  // report
  std::string report_dir, report_out;
  auto* reportc = app.add_subcommand("report", "Render a static HTML view of a run");
  reportc->add_option("run_dir", report_dir, "Run directory")->required();
  reportc->add_option("-o,--out", report_out, "HTML output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ingest) return urania::cli::cmd_ingest(ingest_path, ingest_out);

    RunConfig config = load_config(config_path);
    if (*kwset) {
      kwset_overrides.apply(config);
      if (!kwset_method.empty()) config.kwset.method = kwset_method;
      return urania::cli::cmd_kwset(config);
    }
    if (*run) {
      run_overrides.apply(config);
      if (!run_kwset_method.empty()) config.kwset.method = run_kwset_method;
      return urania::cli::cmd_run(config, baseline);
    }
    if (*evalc) {
      if (!eval_dataset.empty()) config.dataset_path = eval_dataset;
      return urania::cli::cmd_eval(eval_private, eval_public, eval_out, config);
    }
    if (*auditc) {
      audit_overrides.apply(config);
      if (!audit_pipeline.empty()) config.audit.pipeline = audit_pipeline;
      if (audit_runs) config.audit.n_runs = *audit_runs;
      return urania::cli::cmd_audit(config);
    }
    if (*hier) return urania::cli::cmd_hierarchy(hierarchy_dir, config);
    if (*reportc) return urania::cli::cmd_report(report_dir, report_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return urania::cli::exit_code_for(e);
  }
  return 0;
}
