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

#ifndef URANIA_LLM_CLIENT_HPP_
#define URANIA_LLM_CLIENT_HPP_

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "urania/llm/templates.hpp"

namespace urania::llm {

struct CompletionRequest {
  std::string rendered_prompt;
  int max_output_tokens = 1024;
  double temperature = 0.0;  // 0 by default: reproducible summaries
  std::string model_id;
  // Metadata for offline mocks; HTTP providers ignore both fields.
  std::string template_name;
  std::map<std::string, std::string> bindings;
};

struct ProviderConfig {
  std::string endpoint_url;
  std::string auth_token_env_var;  // token read from env, never from config
  std::string model_id;
  int timeout_ms = 30000;
  int max_retries = 3;
  int backoff_base_ms = 250;
  int rate_limit_per_min = 0;  // 0 = unlimited
  int max_output_tokens = 1024;
  double temperature = 0.0;
  // JSON pointer into the response body holding the completion text; lets
  // the same client talk to chat-completions variants.
  std::string response_json_pointer = "/choices/0/message/content";

  void validate() const;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

// render() + complete() with mock metadata attached.
std::string complete_template(LlmClient& client, TemplateId id,
                              const std::map<std::string, std::string>& bindings,
                              int max_output_tokens = 1024);

// Content of the first <tag>...</tag> pair, whitespace-trimmed.
std::string parse_tagged(const std::string& text, const std::string& tag);

// Strips optional code fences and parses the first JSON object or array.
// Lenient about single-quoted strings and trailing commas, since real model
// output drifts.
nlohmann::json parse_json_block(const std::string& text);

// Parses a JSON array or Python-style list of strings ("['a', 'b']").
std::vector<std::string> parse_string_list(const std::string& text);

}  // namespace urania::llm

#endif  // URANIA_LLM_CLIENT_HPP_
