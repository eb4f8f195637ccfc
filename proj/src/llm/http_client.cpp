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

#include "urania/llm/http_client.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace urania::llm {

using nlohmann::json;

RateLimiter::RateLimiter(int requests_per_min) {
  if (requests_per_min > 0) {
    min_interval_ = std::chrono::microseconds(60'000'000 / requests_per_min);
  }
  next_allowed_ = std::chrono::steady_clock::now();
}

void RateLimiter::acquire() {
  if (min_interval_.count() == 0) return;
  std::chrono::steady_clock::time_point wake;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto now = std::chrono::steady_clock::now();
    wake = std::max(next_allowed_, now);
    next_allowed_ = wake + min_interval_;
  }
  std::this_thread::sleep_until(wake);
}

std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("provider: endpoint_url must start with http:// or https://");
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  // TODO: build httplib with OpenSSL so https endpoints work out of the box.
  if (url.rfind("https://", 0) == 0) {
    throw ConfigError(
        "provider: https endpoints need a build with CPPHTTPLIB_OPENSSL_SUPPORT; "
        "use an http:// endpoint or rebuild with OpenSSL");
  }
#endif
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

namespace {

bool retryable_status(int status) {
  return status == 408 || status == 429 || (status >= 500 && status < 600);
}

}  // namespace

std::string http_post_json(const ProviderConfig& config, const std::string& auth_token,
                           RateLimiter* limiter, const std::string& body_json) {
  auto [base, path] = split_endpoint(config.endpoint_url);
  httplib::Client client(base);
  client.set_connection_timeout(std::chrono::milliseconds(config.timeout_ms));
  client.set_read_timeout(std::chrono::milliseconds(config.timeout_ms));
  client.set_write_timeout(std::chrono::milliseconds(config.timeout_ms));

  httplib::Headers headers;
  if (!auth_token.empty()) {
    headers.emplace("Authorization", "Bearer " + auth_token);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (attempt > 0) {
      auto backoff = std::chrono::milliseconds(config.backoff_base_ms) * (1 << (attempt - 1));
      std::this_thread::sleep_for(backoff);
    }
    if (limiter) limiter->acquire();

    auto res = client.Post(path, headers, body_json, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) return res->body;
    if (retryable_status(res->status)) {
      last_error = "retryable status " + std::to_string(res->status);
      continue;
    }
    throw ProviderError("provider returned status " + std::to_string(res->status) + ": " +
                        res->body.substr(0, 512));
  }
  throw ProviderError("provider unreachable after " + std::to_string(config.max_retries + 1) +
                      " attempts (" + last_error + ")");
}

HttpLlmClient::HttpLlmClient(ProviderConfig config) : config_(std::move(config)) {
  config_.validate();
  std::tie(host_base_, path_) = split_endpoint(config_.endpoint_url);
  if (!config_.auth_token_env_var.empty()) {
    const char* tok = std::getenv(config_.auth_token_env_var.c_str());
    if (tok != nullptr) auth_token_ = tok;
  }
  limiter_ = std::make_shared<RateLimiter>(config_.rate_limit_per_min);
}

HttpLlmClient::~HttpLlmClient() = default;

std::string HttpLlmClient::complete(const CompletionRequest& request) {
  json body;
  body["model"] = request.model_id.empty() ? config_.model_id : request.model_id;
  body["messages"] = json::array({json{{"role", "user"}, {"content", request.rendered_prompt}}});
  // Per-request values win; the config supplies the operator's default
  // temperature and an upper cap on output tokens.
  body["temperature"] = request.temperature != 0.0 ? request.temperature : config_.temperature;
  body["max_tokens"] = std::min(request.max_output_tokens, config_.max_output_tokens);

  std::string response = http_post_json(config_, auth_token_, limiter_.get(), body.dump());

  json parsed = json::parse(response, nullptr, false);
  if (parsed.is_discarded()) {
    throw ProviderError("provider returned unparseable JSON body");
  }
  try {
    return parsed.at(json::json_pointer(config_.response_json_pointer)).get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("response missing completion text at '") +
                        config_.response_json_pointer + "': " + e.what());
  }
}

}  // namespace urania::llm
