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

#include "urania/keywords.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "urania/dp/mechanisms.hpp"
#include "urania/text.hpp"

namespace urania {

using nlohmann::json;

std::string provenance_name(KwProvenance p) {
  switch (p) {
    case KwProvenance::kTfidfPrivate:
      return "tfidf_private";
    case KwProvenance::kLlmPrivate:
      return "llm_private";
    case KwProvenance::kPublic:
      return "public";
    case KwProvenance::kHybrid:
      return "hybrid";
  }
  throw ParameterError("unknown keyword provenance");
}

KwProvenance provenance_from_name(const std::string& name) {
  if (name == "tfidf_private") return KwProvenance::kTfidfPrivate;
  if (name == "llm_private") return KwProvenance::kLlmPrivate;
  if (name == "public") return KwProvenance::kPublic;
  if (name == "hybrid") return KwProvenance::kHybrid;
  throw ParameterError("unknown keyword provenance '" + name + "'");
}

void KeywordSet::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& kw : keywords) {
    if (kw != normalize_keyword(kw)) {
      throw ParameterError("keyword set: '" + kw + "' is not normalized");
    }
    if (!seen.insert(kw).second) {
      throw ParameterError("keyword set: duplicate keyword '" + kw + "'");
    }
  }
  bool is_private =
      provenance == KwProvenance::kTfidfPrivate || provenance == KwProvenance::kLlmPrivate;
  if (is_private && !(epsilon_spent > 0.0)) {
    throw ParameterError("keyword set: private provenance requires epsilon_spent > 0");
  }
  if (target_size < 1) throw ParameterError("keyword set: target_size must be >= 1");
}

namespace {

std::vector<std::string> parse_keyword_list_with_retry(
    llm::LlmClient& llm, llm::TemplateId tpl,
    const std::map<std::string, std::string>& bindings) {
  auto attempt = [&](bool remind) -> std::vector<std::string> {
    if (!remind) return llm::parse_string_list(llm::complete_template(llm, tpl, bindings));
    llm::CompletionRequest req;
    req.rendered_prompt = llm::render(tpl, bindings) +
                          "\n\nReminder: return only the list of keywords, nothing else.";
    req.template_name = llm::template_for(tpl).name;
    req.bindings = bindings;
    return llm::parse_string_list(llm.complete(req));
  };
  try {
    return attempt(false);
  } catch (const ParseError&) {
  }
  try {
    return attempt(true);
  } catch (const ParseError&) {
    return {};
  }
}

bool is_na_sentinel(const std::vector<std::string>& items) {
  return items.size() == 1 && to_lower(trim(items[0])) == "na";
}

// Post-processing of partition-selection survivors: the model may only
// reorder and drop, never introduce new keywords.
std::vector<std::string> refine_to_target(const std::vector<std::string>& survivors,
                                          int target_size, llm::LlmClient& llm) {
  if (static_cast<int>(survivors.size()) <= target_size) return survivors;

  std::unordered_set<std::string> allowed(survivors.begin(), survivors.end());
  std::map<std::string, std::string> bindings{
      {"num", std::to_string(target_size)},
      {"keywords_json", json(survivors).dump(2)},
  };
  auto picked = parse_keyword_list_with_retry(llm, llm::TemplateId::kKwsetRefine, bindings);

  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& raw : picked) {
    std::string kw = normalize_keyword(raw);
    if (kw.empty() || !allowed.count(kw) || !seen.insert(kw).second) continue;
    out.push_back(kw);
    if (static_cast<int>(out.size()) == target_size) break;
  }
  if (out.empty()) {
    log_warn("keyword refinement returned nothing usable; keeping the first " +
             std::to_string(target_size) + " survivors");
    out.assign(survivors.begin(), survivors.begin() + target_size);
  }
  return out;
}

struct TfidfStats {
  std::vector<std::vector<std::string>> doc_tokens;  // content tokens per doc
  std::map<std::string, std::int64_t> df;            // distinct docs per term
};

TfidfStats corpus_stats(const std::vector<std::string>& docs) {
  TfidfStats stats;
  stats.doc_tokens.reserve(docs.size());
  for (const auto& doc : docs) {
    auto toks = content_tokens(doc);
    std::set<std::string> uniq(toks.begin(), toks.end());
    for (const auto& t : uniq) ++stats.df[t];
    stats.doc_tokens.push_back(std::move(toks));
  }
  return stats;
}

// Top (up to) `limit` terms of one document by tf * idf, ties broken
// lexicographically.
std::vector<std::string> doc_top_terms(const std::vector<std::string>& tokens,
                                       const std::map<std::string, std::int64_t>& df,
                                       std::size_t n_docs, std::size_t limit) {
  std::unordered_map<std::string, int> tf;
  for (const auto& t : tokens) ++tf[t];
  std::vector<std::pair<double, std::string>> scored;
  scored.reserve(tf.size());
  for (const auto& [term, count] : tf) {
    auto it = df.find(term);
    std::int64_t d = (it == df.end()) ? 0 : std::max<std::int64_t>(it->second, 0);
    double idf = std::log(static_cast<double>(n_docs + 1) / static_cast<double>(d + 1));
    scored.emplace_back(count * idf, term);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  for (const auto& [_, term] : scored) {
    out.push_back(normalize_keyword(term));
    if (out.size() == limit) break;
  }
  return out;
}

KeywordSet finish_private_set(std::vector<std::string> survivors, KwProvenance provenance,
                              double epsilon, double delta, int target_size,
                              llm::LlmClient& llm) {
  if (static_cast<int>(survivors.size()) < target_size) {
    log_warn("partition selection kept " + std::to_string(survivors.size()) +
             " keywords, below the target of " + std::to_string(target_size));
  }
  KeywordSet set;
  set.keywords = refine_to_target(survivors, target_size, llm);
  set.provenance = provenance;
  set.epsilon_spent = epsilon;
  set.delta_spent = delta;
  set.target_size = target_size;
  set.validate();
  return set;
}

}  // namespace

std::vector<std::string> llm_select_keywords(const std::string& summary,
                                             const KeywordSet& kwset, int m,
                                             llm::LlmClient& llm) {
  if (kwset.keywords.empty()) throw ParameterError("llm_select_keywords: empty keyword set");
  if (m < 1) throw ParameterError("llm_select_keywords: m must be >= 1");

  std::map<std::string, std::string> bindings{
      {"m", std::to_string(m)},
      {"summary", summary},
      {"keywords", join(kwset.keywords, ", ")},
  };
  auto picked =
      parse_keyword_list_with_retry(llm, llm::TemplateId::kLlmSelectKeywords, bindings);
  if (is_na_sentinel(picked)) return {};

  std::unordered_set<std::string> members(kwset.keywords.begin(), kwset.keywords.end());
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& raw : picked) {
    std::string kw = normalize_keyword(raw);
    if (kw.empty() || !members.count(kw) || !seen.insert(kw).second) continue;
    out.push_back(kw);
    if (static_cast<int>(out.size()) == m) break;
  }
  return out;
}

KeywordSet build_kwset_tfidf(const std::vector<std::string>& docs, double epsilon,
                             double delta, llm::LlmClient& llm, Rng& rng, int target_size,
                             PrivacyLedger* ledger) {
  if (docs.empty()) throw ParameterError("build_kwset_tfidf: corpus is empty");
  if (!(epsilon > 0.0)) throw ParameterError("build_kwset_tfidf: epsilon must be positive");

  auto stats = corpus_stats(docs);

  // Noisy document frequencies, half the budget.
  dp::DiscreteLaplaceParams df_noise{epsilon / 2.0, std::nullopt};
  std::map<std::string, std::int64_t> noisy_df;
  for (const auto& [term, count] : stats.df) {
    noisy_df[term] = count + dp::sample_dlap(df_noise, rng);
  }

  // Per-document top terms scored against the noisy DF.
  std::vector<dp::ContributionSet> contribs;
  contribs.reserve(docs.size());
  for (const auto& tokens : stats.doc_tokens) {
    contribs.push_back({doc_top_terms(tokens, noisy_df, docs.size(), 5)});
  }

  auto survivors =
      dp::private_partition_selection(contribs, 5, epsilon / 2.0, delta, rng);

  if (ledger != nullptr) {
    ledger->record({"kwset/tfidf_noisy_df", epsilon / 2.0, 0.0, CompositionMode::kBasic, ""});
    ledger->record({"kwset/tfidf_pps", epsilon / 2.0, delta, CompositionMode::kBasic, ""});
  }
  return finish_private_set(std::move(survivors), KwProvenance::kTfidfPrivate, epsilon, delta,
                            target_size, llm);
}

KeywordSet build_kwset_llm(const std::vector<std::string>& summaries, double epsilon,
                           double delta, llm::LlmClient& llm, Rng& rng, int target_size,
                           PrivacyLedger* ledger) {
  if (summaries.empty()) throw ParameterError("build_kwset_llm: corpus is empty");
  if (!(epsilon > 0.0)) throw ParameterError("build_kwset_llm: epsilon must be positive");

  std::vector<dp::ContributionSet> contribs;
  contribs.reserve(summaries.size());
  for (const auto& summary : summaries) {
    auto raw = parse_keyword_list_with_retry(llm, llm::TemplateId::kKwsetLlmGenerate,
                                             {{"conversation_summary", summary}});
    if (is_na_sentinel(raw)) raw.clear();
    auto normalized = normalize_keyword_list(raw);
    if (normalized.size() > 5) normalized.resize(5);
    contribs.push_back({std::move(normalized)});
  }

  auto survivors = dp::private_partition_selection(contribs, 5, epsilon, delta, rng);
  if (ledger != nullptr) {
    ledger->record({"kwset/llm_pps", epsilon, delta, CompositionMode::kBasic, ""});
  }
  return finish_private_set(std::move(survivors), KwProvenance::kLlmPrivate, epsilon, delta,
                            target_size, llm);
}

KeywordSet build_kwset_public(const std::vector<std::string>& public_docs,
                              llm::LlmClient& llm, int target_size) {
  if (public_docs.empty()) throw ParameterError("build_kwset_public: corpus is empty");
  if (target_size < 1) throw ParameterError("build_kwset_public: target_size must be >= 1");

  // Seed: plain TF-IDF over a sample, keywords ranked by how many sample
  // documents picked them.
  std::size_t sample_size = std::min<std::size_t>(public_docs.size(), 200);
  std::vector<std::string> sample(public_docs.begin(), public_docs.begin() + sample_size);
  auto stats = corpus_stats(sample);
  std::map<std::string, int> popularity;
  for (const auto& tokens : stats.doc_tokens) {
    for (const auto& term : doc_top_terms(tokens, stats.df, sample.size(), 5)) {
      ++popularity[term];
    }
  }
  std::vector<std::pair<int, std::string>> ranked;
  for (const auto& [term, pop] : popularity) ranked.emplace_back(-pop, term);
  std::sort(ranked.begin(), ranked.end());

  std::vector<std::string> current;
  std::unordered_set<std::string> members;
  for (const auto& [_, term] : ranked) {
    if (static_cast<int>(current.size()) == target_size) break;
    if (members.insert(term).second) current.push_back(term);
  }

  constexpr std::size_t kBatchSize = 20;
  constexpr int kMaxBatches = 50;
  int stable_size_streak = 0;
  bool changed_this_pass = false;
  std::size_t cursor = 0;

  for (int batch = 0; batch < kMaxBatches; ++batch) {
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < kBatchSize && cursor + i < public_docs.size(); ++i) {
      lines.push_back("- " + public_docs[cursor + i]);
    }
    std::map<std::string, std::string> bindings{
        {"current_keywords_json", json(current).dump(2)},
        {"conversations", join(lines, "\n")},
        {"target_size", std::to_string(target_size)},
    };

    bool changed = false;
    try {
      auto reply = llm::parse_json_block(
          llm::complete_template(llm, llm::TemplateId::kKwsetPublicUpdate, bindings));
      auto get_list = [&](const char* key) {
        std::vector<std::string> out;
        if (reply.contains(key) && reply[key].is_array()) {
          for (const auto& x : reply[key]) {
            if (x.is_string()) out.push_back(x.get<std::string>());
          }
        }
        return normalize_keyword_list(out);
      };
      for (const auto& kw : get_list("words_to_remove")) {
        auto it = std::find(current.begin(), current.end(), kw);
        if (it != current.end()) {
          current.erase(it);
          members.erase(kw);
          changed = true;
        }
      }
      for (const auto& kw : get_list("words_to_add")) {
        if (members.insert(kw).second) {
          current.push_back(kw);
          changed = true;
        }
      }
    } catch (const ParseError&) {
      log_warn("keyword set update batch returned unparseable output; batch skipped");
    }

    changed_this_pass = changed_this_pass || changed;
    double drift = std::fabs(static_cast<double>(current.size()) - target_size);
    stable_size_streak = (drift <= 0.1 * target_size) ? stable_size_streak + 1 : 0;

    cursor += kBatchSize;
    if (cursor >= public_docs.size()) {
      if (!changed_this_pass) break;  // a full pass with no net change
      cursor = 0;
      changed_this_pass = false;
    }
    if (stable_size_streak >= 3) break;
  }

  KeywordSet set;
  set.keywords = std::move(current);
  set.provenance = KwProvenance::kPublic;
  set.target_size = target_size;
  set.validate();
  return set;
}

KeywordSet build_kwset_hybrid(const KeywordSet& public_set,
                              const std::vector<std::string>& private_summaries,
                              double epsilon, double delta, llm::LlmClient& llm, Rng& rng,
                              PrivacyLedger* ledger) {
  if (public_set.provenance != KwProvenance::kPublic) {
    throw ParameterError("build_kwset_hybrid: base set must have public provenance");
  }
  std::unordered_set<std::string> existing(public_set.keywords.begin(),
                                           public_set.keywords.end());

  std::string public_json = json(public_set.keywords).dump(2);
  std::vector<dp::ContributionSet> contribs;
  contribs.reserve(private_summaries.size());
  for (const auto& summary : private_summaries) {
    auto raw = parse_keyword_list_with_retry(
        llm, llm::TemplateId::kKwsetHybridSuggest,
        {{"public_keywords_json", public_json}, {"conversation_summary", summary}});
    if (is_na_sentinel(raw)) raw.clear();
    std::vector<std::string> fresh;
    for (const auto& kw : normalize_keyword_list(raw)) {
      // Only new-keyword contributions count toward the cap.
      if (!existing.count(kw)) fresh.push_back(kw);
      if (fresh.size() == 5) break;
    }
    contribs.push_back({std::move(fresh)});
  }

  auto survivors = dp::private_partition_selection(contribs, 5, epsilon, delta, rng);
  if (ledger != nullptr) {
    ledger->record({"kwset/hybrid_pps", epsilon, delta, CompositionMode::kBasic, ""});
  }

  KeywordSet set;
  set.keywords = public_set.keywords;
  for (const auto& kw : survivors) {
    if (!existing.count(kw)) set.keywords.push_back(kw);
  }
  set.provenance = KwProvenance::kHybrid;
  set.epsilon_spent = epsilon;
  set.delta_spent = delta;
  set.target_size = public_set.target_size;
  set.validate();
  return set;
}

std::vector<std::string> top_keywords(const KeywordHistogram& hist, int t) {
  if (t < 0) throw ParameterError("top_keywords: t must be >= 0");
  if (static_cast<int>(hist.counts.size()) < t) {
    throw ParameterError("top_keywords: histogram has fewer keywords than t");
  }
  std::vector<std::pair<std::int64_t, std::string>> ranked;
  ranked.reserve(hist.counts.size());
  for (const auto& [kw, count] : hist.counts) ranked.emplace_back(count, kw);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  out.reserve(t);
  for (int i = 0; i < t; ++i) out.push_back(ranked[i].second);
  return out;
}

std::vector<std::string> random_keywords(const KeywordSet& kwset, int t, Rng& rng) {
  if (t < 0) throw ParameterError("random_keywords: t must be >= 0");
  if (static_cast<int>(kwset.keywords.size()) < t) {
    throw ParameterError("random_keywords: t exceeds the keyword set size");
  }
  std::vector<std::string> pool = kwset.keywords;
  std::vector<std::string> out;
  out.reserve(t);
  for (int i = 0; i < t; ++i) {
    std::size_t pick = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[pick]);
    out.push_back(pool[i]);
  }
  return out;
}

}  // namespace urania
