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

#include "urania/embedding/embedder.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "urania/llm/http_client.hpp"
#include "urania/rng.hpp"
#include "urania/text.hpp"

namespace urania::emb {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "embedding cache assumes a little-endian host");

void l2_normalize(std::vector<float>& v) {
  double norm2 = 0.0;
  for (float x : v) norm2 += static_cast<double>(x) * x;
  if (norm2 <= 0.0) {
    if (!v.empty()) v[0] = 1.0f;
    return;
  }
  auto inv = static_cast<float>(1.0 / std::sqrt(norm2));
  for (float& x : v) x *= inv;
}

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) throw ParameterError("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

std::vector<float> MockEmbedder::embed(const std::string& text) {
  ++calls_;
  auto tokens = tokenize(text);
  std::vector<double> acc(static_cast<std::size_t>(dim_), 0.0);
  if (tokens.empty()) tokens.push_back("");
  for (const auto& tok : tokens) {
    Rng token_rng(splitmix64(seed_ ^ fnv1a64(tok)));
    for (int d = 0; d < dim_; ++d) acc[d] += token_rng.gaussian();
  }
  std::vector<float> out(static_cast<std::size_t>(dim_));
  for (int d = 0; d < dim_; ++d) {
    out[d] = static_cast<float>(acc[d] / static_cast<double>(tokens.size()));
  }
  l2_normalize(out);
  return out;
}

std::string MockEmbedder::id() const {
  return "mock-embedder/seed=" + std::to_string(seed_) + "/dim=" + std::to_string(dim_);
}

HttpEmbedder::HttpEmbedder(llm::ProviderConfig config, int expected_dim)
    : config_(std::move(config)), dim_(expected_dim) {
  if (config_.response_json_pointer == "/choices/0/message/content") {
    config_.response_json_pointer = "/data/0/embedding";
  }
  config_.validate();
  if (!config_.auth_token_env_var.empty()) {
    const char* tok = std::getenv(config_.auth_token_env_var.c_str());
    if (tok != nullptr) auth_token_ = tok;
  }
}

std::vector<float> HttpEmbedder::embed(const std::string& text) {
  json body;
  body["model"] = config_.model_id;
  body["input"] = json::array({text});
  std::string response = llm::http_post_json(config_, auth_token_, nullptr, body.dump());
  json parsed = json::parse(response, nullptr, false);
  if (parsed.is_discarded()) throw ProviderError("embedder returned unparseable JSON");
  std::vector<float> out;
  try {
    for (const auto& x : parsed.at(json::json_pointer(config_.response_json_pointer))) {
      out.push_back(x.get<float>());
    }
  } catch (const json::exception& e) {
    throw ProviderError(std::string("embedding missing at '") + config_.response_json_pointer +
                        "': " + e.what());
  }
  if (out.empty()) throw ProviderError("embedder returned an empty vector");
  dim_ = static_cast<int>(out.size());
  l2_normalize(out);
  return out;
}

std::string HttpEmbedder::id() const {
  return "http-embedder/" + config_.model_id + "@" + config_.endpoint_url;
}

EmbeddingCache::EmbeddingCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  auto index_path = dir_ / "index.json";
  if (std::filesystem::exists(index_path)) {
    std::ifstream in(index_path);
    json idx = json::parse(in, nullptr, false);
    if (!idx.is_discarded() && idx.is_object()) {
      for (auto& [key, slot] : idx.items()) {
        index_[key] = {slot.at("offset").get<std::uint64_t>(), slot.at("dim").get<std::uint32_t>()};
      }
    }
  }
}

EmbeddingCache::~EmbeddingCache() {
  try {
    flush();
  } catch (...) {
  }
}

std::optional<std::vector<float>> EmbeddingCache::get(const std::string& key) {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  std::ifstream bin(dir_ / "vectors.bin", std::ios::binary);
  if (!bin) return std::nullopt;
  bin.seekg(static_cast<std::streamoff>(it->second.offset));
  std::vector<float> out(it->second.dim);
  bin.read(reinterpret_cast<char*>(out.data()),
           static_cast<std::streamsize>(out.size() * sizeof(float)));
  if (!bin) return std::nullopt;
  return out;
}

void EmbeddingCache::put(const std::string& key, const std::vector<float>& vec) {
  if (index_.count(key)) return;
  std::ofstream bin(dir_ / "vectors.bin", std::ios::binary | std::ios::app);
  if (!bin) throw IoError("embedding cache: cannot open vectors.bin for append");
  bin.seekp(0, std::ios::end);
  auto offset = static_cast<std::uint64_t>(bin.tellp());
  bin.write(reinterpret_cast<const char*>(vec.data()),
            static_cast<std::streamsize>(vec.size() * sizeof(float)));
  bin.close();
  index_[key] = {offset, static_cast<std::uint32_t>(vec.size())};
  if (++unflushed_ >= 256) flush();
}

void EmbeddingCache::flush() {
  if (unflushed_ == 0) return;
  json idx = json::object();
  for (const auto& [key, slot] : index_) {
    idx[key] = {{"offset", slot.offset}, {"dim", slot.dim}};
  }
  std::ofstream out(dir_ / "index.json");
  if (!out) throw IoError("embedding cache: cannot write index.json");
  out << idx.dump(1) << "\n";
  unflushed_ = 0;
}

CachingEmbedder::CachingEmbedder(Embedder& inner, std::optional<std::filesystem::path> cache_dir)
    : inner_(inner) {
  if (cache_dir) disk_ = std::make_unique<EmbeddingCache>(*cache_dir);
}

std::vector<float> CachingEmbedder::embed(const std::string& text) {
  std::string key = content_hash_hex(inner_.id() + "\x1f" + text);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = memory_.find(key); it != memory_.end()) return it->second;
    if (disk_) {
      if (auto hit = disk_->get(key)) {
        memory_[key] = *hit;
        return *hit;
      }
    }
  }
  std::vector<float> vec = inner_.embed(text);
  l2_normalize(vec);
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = memory_.emplace(key, std::move(vec));
  if (inserted && disk_) disk_->put(key, it->second);
  return it->second;
}

void CachingEmbedder::flush() {
  std::lock_guard<std::mutex> lock(mu_);
  if (disk_) disk_->flush();
}

}  // namespace urania::emb
