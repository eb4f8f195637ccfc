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

#ifndef URANIA_LLM_HTTP_CLIENT_HPP_
#define URANIA_LLM_HTTP_CLIENT_HPP_

#include <chrono>
#include <memory>
#include <mutex>
#include <string>

#include "urania/llm/client.hpp"

namespace urania::llm {

// Shared requests-per-minute limiter; acquire() blocks until the next
// request is allowed.
class RateLimiter {
 public:
  explicit RateLimiter(int requests_per_min);
  void acquire();

 private:
  std::chrono::steady_clock::duration min_interval_{};
  std::chrono::steady_clock::time_point next_allowed_{};
  std::mutex mu_;
};

// Chat-completions style JSON client. POSTs
//   {"model": ..., "messages": [{"role": "user", "content": prompt}],
//    "temperature": ..., "max_tokens": ...}
// and reads the completion text through config.response_json_pointer.
// Transient failures (transport errors, 408/429/5xx) are retried with
// exponential backoff up to max_retries; other non-2xx codes raise
// ProviderError immediately.
class HttpLlmClient : public LlmClient {
 public:
  explicit HttpLlmClient(ProviderConfig config);
  ~HttpLlmClient() override;

  std::string complete(const CompletionRequest& request) override;

 private:
  ProviderConfig config_;
  std::string host_base_;  // scheme://host:port
  std::string path_;
  std::string auth_token_;
  std::shared_ptr<RateLimiter> limiter_;
};

// Splits "http://host:port/some/path" into (scheme://host:port, /some/path).
std::pair<std::string, std::string> split_endpoint(const std::string& url);

// POST `body_json` to the endpoint with the same retry/backoff policy and
// return the response body. Shared by the LLM and embedding clients.
std::string http_post_json(const ProviderConfig& config, const std::string& auth_token,
                           RateLimiter* limiter, const std::string& body_json);

}  // namespace urania::llm

#endif  // URANIA_LLM_HTTP_CLIENT_HPP_
