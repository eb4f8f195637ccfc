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

#ifndef URANIA_EMBEDDING_EMBEDDER_HPP_
#define URANIA_EMBEDDING_EMBEDDER_HPP_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "urania/common.hpp"
#include "urania/llm/client.hpp"

namespace urania::emb {

// All embedders return unit-norm vectors.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<float> embed(const std::string& text) = 0;
  virtual int dim() const = 0;
  // Identity string mixed into cache keys; distinct models never share
  // cached vectors.
  virtual std::string id() const = 0;
};

// Deterministic offline embedder: the vector is the normalized average of
// per-token seeded Gaussian vectors, so texts sharing tokens get a cosine
// boost proportional to their overlap. Thread-safe and stateless apart from
// the call counter.
class MockEmbedder : public Embedder {
 public:
  explicit MockEmbedder(std::uint64_t seed = 0, int dim = 768) : seed_(seed), dim_(dim) {}

  std::vector<float> embed(const std::string& text) override;
  int dim() const override { return dim_; }
  std::string id() const override;

  int calls() const { return calls_.load(); }

 private:
  std::uint64_t seed_;
  int dim_;
  std::atomic<int> calls_{0};
};

// Remote embeddings endpoint: POST {"model": ..., "input": [text]} and read
// the vector at response_json_pointer (default "/data/0/embedding").
class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(llm::ProviderConfig config, int expected_dim = 768);

  std::vector<float> embed(const std::string& text) override;
  int dim() const override { return dim_; }
  std::string id() const override;

 private:
  llm::ProviderConfig config_;
  std::string auth_token_;
  int dim_;
};

// Persistent content-hash-keyed cache: vectors.bin holds little-endian
// float32 vectors back to back, index.json maps key -> {offset, dim}.
// Reload is bit-exact.
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path dir);
  ~EmbeddingCache();

  std::optional<std::vector<float>> get(const std::string& key);
  void put(const std::string& key, const std::vector<float>& vec);
  void flush();

  std::size_t size() const { return index_.size(); }

 private:
  struct Slot {
    std::uint64_t offset;  // bytes into vectors.bin
    std::uint32_t dim;
  };
  std::filesystem::path dir_;
  std::map<std::string, Slot> index_;
  int unflushed_ = 0;
};

// Wraps an embedder with an in-memory map and an optional on-disk cache.
// Identical text embeds to a bit-identical vector; warm lookups make no
// provider calls. Thread-safe.
class CachingEmbedder : public Embedder {
 public:
  CachingEmbedder(Embedder& inner, std::optional<std::filesystem::path> cache_dir);

  std::vector<float> embed(const std::string& text) override;
  int dim() const override { return inner_.dim(); }
  std::string id() const override { return inner_.id(); }

  void flush();

 private:
  Embedder& inner_;
  std::unique_ptr<EmbeddingCache> disk_;
  std::map<std::string, std::vector<float>> memory_;
  std::mutex mu_;
};

void l2_normalize(std::vector<float>& v);
double cosine(const std::vector<float>& a, const std::vector<float>& b);

}  // namespace urania::emb

#endif  // URANIA_EMBEDDING_EMBEDDER_HPP_
