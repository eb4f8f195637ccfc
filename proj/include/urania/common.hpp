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

#ifndef URANIA_COMMON_HPP_
#define URANIA_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace urania {

// Error hierarchy. The CLI maps these to process exit codes:
// ParameterError/ConfigError -> 2, ProviderError -> 3, ValidationError -> 4.
class UraniaError : public std::runtime_error {
 public:
  explicit UraniaError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParameterError : public UraniaError {
 public:
  explicit ParameterError(const std::string& msg) : UraniaError(msg) {}
};

class ConfigError : public UraniaError {
 public:
  explicit ConfigError(const std::string& msg) : UraniaError(msg) {}
};

// A caller broke a documented precondition (e.g. a contribution above cap).
class ContractViolation : public UraniaError {
 public:
  explicit ContractViolation(const std::string& msg) : UraniaError(msg) {}
};

class ProviderError : public UraniaError {
 public:
  explicit ProviderError(const std::string& msg) : UraniaError(msg) {}
};

// Carries the raw model output so call sites can log what failed to parse.
class ParseError : public UraniaError {
 public:
  ParseError(const std::string& msg, std::string raw)
      : UraniaError(msg), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

class ValidationError : public UraniaError {
 public:
  explicit ValidationError(const std::string& msg) : UraniaError(msg) {}
};

class IoError : public UraniaError {
 public:
  explicit IoError(const std::string& msg) : UraniaError(msg) {}
};

void log_warn(const std::string& msg);
void log_info(const std::string& msg);

// 64-bit FNV-1a, the hash used for cache keys and seed derivation.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ULL);

std::uint64_t splitmix64(std::uint64_t x);

// 32 hex chars built from two independently seeded FNV-1a passes.
std::string content_hash_hex(std::string_view data);

}  // namespace urania

#endif  // URANIA_COMMON_HPP_
