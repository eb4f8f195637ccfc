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

#ifndef URANIA_LLM_MOCK_CLIENT_HPP_
#define URANIA_LLM_MOCK_CLIENT_HPP_

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "urania/llm/client.hpp"

namespace urania::llm {

// Canned responses keyed on template name; unknown keys get a deterministic
// fallback of ["NA"].
class CannedLlm : public LlmClient {
 public:
  explicit CannedLlm(std::map<std::string, std::string> responses,
                     std::string fallback = "[\"NA\"]")
      : responses_(std::move(responses)), fallback_(std::move(fallback)) {}

  std::string complete(const CompletionRequest& request) override {
    auto it = responses_.find(request.template_name);
    return it == responses_.end() ? fallback_ : it->second;
  }

 private:
  std::map<std::string, std::string> responses_;
  std::string fallback_;
};

// Test hook: arbitrary function of the request.
class LambdaLlm : public LlmClient {
 public:
  explicit LambdaLlm(std::function<std::string(const CompletionRequest&)> fn)
      : fn_(std::move(fn)) {}
  std::string complete(const CompletionRequest& request) override { return fn_(request); }

 private:
  std::function<std::string(const CompletionRequest&)> fn_;
};

// Deterministic offline model: a pure function of (template, bindings, seed)
// that produces content-aware answers good enough for end-to-end runs with
// no provider. Facet summaries reflect the conversation's salient words,
// keyword selection respects the offered set, and cluster summaries name
// frequent (and occasionally distinctive) terms.
class MockLlm : public LlmClient {
 public:
  explicit MockLlm(std::uint64_t seed = 0) : seed_(seed) {}

  std::string complete(const CompletionRequest& request) override;

  int calls() const { return calls_.load(); }

 private:
  std::uint64_t seed_;
  std::atomic<int> calls_{0};
};

}  // namespace urania::llm

#endif  // URANIA_LLM_MOCK_CLIENT_HPP_
