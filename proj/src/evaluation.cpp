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

#include "urania/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "urania/clustering.hpp"
#include "urania/rng.hpp"
#include "urania/text.hpp"

namespace urania::eval {

using nlohmann::json;

namespace {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// Multiword candidate phrases: consecutive content-token runs of length 2
// and 3 that do not cross stopwords.
std::vector<std::string> phrases_of(const std::string& text) {
  auto tokens = tokenize(text);
  std::vector<std::string> out;
  std::vector<std::string> run;
  auto flush = [&] {
    for (std::size_t len = 2; len <= 3; ++len) {
      if (run.size() < len) continue;
      for (std::size_t i = 0; i + len <= run.size(); ++i) {
        std::vector<std::string> span(run.begin() + i, run.begin() + i + len);
        out.push_back(join(span, " "));
      }
    }
    run.clear();
  };
  for (const auto& t : tokens) {
    if (is_stopword(t) || t.size() < 2) {
      flush();
    } else {
      run.push_back(t);
    }
  }
  flush();
  return out;
}

// Top-N terms of a corpus by summed TF-IDF (documents = summaries).
std::set<std::string> top_tfidf_terms(const std::vector<std::string>& docs,
                                      const std::function<std::vector<std::string>(
                                          const std::string&)>& extractor,
                                      std::size_t n_top) {
  std::unordered_map<std::string, double> tf;
  std::unordered_map<std::string, int> df;
  for (const auto& doc : docs) {
    auto terms = extractor(doc);
    std::unordered_set<std::string> uniq(terms.begin(), terms.end());
    for (const auto& t : terms) tf[t] += 1.0;
    for (const auto& t : uniq) df[t] += 1;
  }
  std::vector<std::pair<double, std::string>> scored;
  scored.reserve(tf.size());
  for (const auto& [term, count] : tf) {
    double idf =
        std::log(static_cast<double>(docs.size() + 1) / static_cast<double>(df[term] + 1)) + 1.0;
    scored.emplace_back(count * idf, term);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::set<std::string> out;
  for (const auto& [_, term] : scored) {
    out.insert(term);
    if (out.size() == n_top) break;
  }
  return out;
}

void check_non_empty(const std::vector<std::string>& priv, const std::vector<std::string>& pub,
                     const char* where) {
  if (priv.empty() || pub.empty()) {
    throw ParameterError(std::string(where) + ": both summary sets must be non-empty");
  }
}

}  // namespace

LexicalSimilarity lexical_similarity(const std::vector<std::string>& private_set,
                                     const std::vector<std::string>& public_set) {
  check_non_empty(private_set, public_set, "lexical_similarity");
  LexicalSimilarity out;

  auto phrase_extractor = [](const std::string& s) { return phrases_of(s); };
  out.keyphrase_jaccard = jaccard(top_tfidf_terms(private_set, phrase_extractor, 100),
                                  top_tfidf_terms(public_set, phrase_extractor, 100));

  std::set<std::string> chunks_a, chunks_b;
  for (const auto& s : private_set) {
    for (auto& c : noun_chunks(s)) chunks_a.insert(std::move(c));
  }
  for (const auto& s : public_set) {
    for (auto& c : noun_chunks(s)) chunks_b.insert(std::move(c));
  }
  out.nounchunk_jaccard = jaccard(chunks_a, chunks_b);

  // Corpus-level TF-IDF vectors on the union vocabulary; the IDF treats
  // every summary in both corpora as one document.
  std::unordered_map<std::string, int> df;
  std::size_t n_docs = private_set.size() + public_set.size();
  auto add_df = [&](const std::vector<std::string>& docs) {
    for (const auto& doc : docs) {
      auto toks = content_tokens(doc);
      std::unordered_set<std::string> uniq(toks.begin(), toks.end());
      for (const auto& t : uniq) ++df[t];
    }
  };
  add_df(private_set);
  add_df(public_set);

  auto corpus_vector = [&](const std::vector<std::string>& docs) {
    std::unordered_map<std::string, double> vec;
    for (const auto& doc : docs) {
      for (const auto& t : content_tokens(doc)) {
        double idf =
            std::log(static_cast<double>(n_docs + 1) / static_cast<double>(df[t] + 1)) + 1.0;
        vec[t] += idf;
      }
    }
    return vec;
  };
  auto va = corpus_vector(private_set);
  auto vb = corpus_vector(public_set);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [term, x] : va) {
    na += x * x;
    auto it = vb.find(term);
    if (it != vb.end()) dot += x * it->second;
  }
  for (const auto& [_, x] : vb) nb += x * x;
  if (na == 0.0 || nb == 0.0) {
    log_warn("lexical_similarity: empty vocabulary, cosine reported as 0");
    out.tfidf_cosine = 0.0;
  } else {
    out.tfidf_cosine = dot / (std::sqrt(na) * std::sqrt(nb));
  }
  return out;
}

std::pair<double, double> ngram_overlap(const std::vector<std::string>& private_set,
                                        const std::vector<std::string>& public_set) {
  auto token_set = [](const std::vector<std::string>& docs) {
    std::set<std::string> out;
    for (const auto& doc : docs) {
      for (auto& t : tokenize(doc)) out.insert(std::move(t));
    }
    return out;
  };
  auto bigram_set = [](const std::vector<std::string>& docs) {
    std::set<std::string> out;
    for (const auto& doc : docs) {
      auto toks = tokenize(doc);
      for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        out.insert(toks[i] + " " + toks[i + 1]);
      }
    }
    return out;
  };
  return {jaccard(token_set(private_set), token_set(public_set)),
          jaccard(bigram_set(private_set), bigram_set(public_set))};
}

double topic_coverage(const std::vector<std::string>& private_set,
                      const std::vector<std::string>& public_set, emb::Embedder& embedder,
                      double match_threshold) {
  check_non_empty(private_set, public_set, "topic_coverage");

  auto topic_centroids = [&](const std::vector<std::string>& docs) {
    Matrix vecs;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      vecs.push_back(embedder.embed(docs[i]));
      ids.push_back(std::to_string(i));
    }
    int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(docs.size()))));
    k = std::min<int>(k, static_cast<int>(docs.size()));
    auto [centers, assignment] = kmeans(ids, vecs, k, 50, /*seed=*/17);
    std::vector<std::vector<float>> centroids;
    std::vector<int> counts(k, 0);
    for (const auto& [_, c] : assignment.cluster_of) ++counts[c];
    for (int j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;
      std::vector<float> c(centers.centers[j].begin(), centers.centers[j].end());
      centroids.push_back(std::move(c));
    }
    return centroids;
  };

  auto priv_topics = topic_centroids(private_set);
  auto pub_topics = topic_centroids(public_set);
  if (pub_topics.empty()) return 0.0;

  int covered = 0;
  for (const auto& pt : pub_topics) {
    for (const auto& qt : priv_topics) {
      if (emb::cosine(pt, qt) >= match_threshold) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(pub_topics.size());
}

std::pair<double, double> embedding_proximity(const std::vector<std::string>& private_set,
                                              const std::vector<std::string>& public_set,
                                              emb::Embedder& embedder) {
  check_non_empty(private_set, public_set, "embedding_proximity");
  std::vector<std::vector<float>> pub_vecs;
  pub_vecs.reserve(public_set.size());
  for (const auto& s : public_set) pub_vecs.push_back(embedder.embed(s));

  std::vector<double> best;
  best.reserve(private_set.size());
  for (const auto& s : private_set) {
    auto v = embedder.embed(s);
    double m = -1.0;
    for (const auto& p : pub_vecs) m = std::max(m, emb::cosine(v, p));
    best.push_back(m);
  }
  double mean = 0.0;
  for (double b : best) mean += b;
  mean /= static_cast<double>(best.size());
  std::sort(best.begin(), best.end());
  double median = (best.size() % 2 == 1)
                      ? best[best.size() / 2]
                      : 0.5 * (best[best.size() / 2 - 1] + best[best.size() / 2]);
  return {mean, median};
}

BinaryPreferenceResult llm_binary_preference(const std::vector<JudgeSample>& samples,
                                             llm::LlmClient& llm, std::uint64_t seed) {
  if (samples.empty()) throw ParameterError("llm_binary_preference: no samples");
  Rng rng(seed);
  int dp_preferred = 0;
  int valid = 0;
  int excluded = 0;
  for (const auto& sample : samples) {
    bool private_first = rng.below(2) == 0;
    std::map<std::string, std::string> bindings{
        {"text", sample.conversation_text},
        {"summary_a", private_first ? sample.private_summary : sample.public_summary},
        {"summary_b", private_first ? sample.public_summary : sample.private_summary},
    };
    try {
      std::string raw =
          llm::complete_template(llm, llm::TemplateId::kEvalBinaryPreference, bindings);
      std::string choice = to_lower(llm::parse_tagged(raw, "choice"));
      if (choice != "a" && choice != "b") {
        ++excluded;
        continue;
      }
      bool chose_private = (choice == "a") == private_first;
      dp_preferred += chose_private ? 1 : 0;
      ++valid;
    } catch (const ParseError&) {
      ++excluded;
    }
  }
  BinaryPreferenceResult out;
  out.excluded = excluded;
  out.dp_preferred_pct =
      valid == 0 ? 0.0 : 100.0 * static_cast<double>(dp_preferred) / static_cast<double>(valid);
  return out;
}

ComparativeRankingResult llm_comparative_ranking(const std::vector<JudgeSample>& samples,
                                                 llm::LlmClient& llm, std::uint64_t seed) {
  if (samples.empty()) throw ParameterError("llm_comparative_ranking: no samples");
  Rng rng(seed);
  double total = 0.0;
  int valid = 0;
  int excluded = 0;
  for (const auto& sample : samples) {
    bool private_first = rng.below(2) == 0;
    std::map<std::string, std::string> bindings{
        {"text", sample.conversation_text},
        {"summary_a", private_first ? sample.private_summary : sample.public_summary},
        {"summary_b", private_first ? sample.public_summary : sample.private_summary},
    };
    try {
      std::string raw =
          llm::complete_template(llm, llm::TemplateId::kEvalComparativeRanking, bindings);
      int rating = std::stoi(llm::parse_tagged(raw, "rating"));
      if (rating < 1 || rating > 5) {
        ++excluded;
        continue;
      }
      // Normalize so 1 always means the private summary is clearly better.
      total += private_first ? rating : (6 - rating);
      ++valid;
    } catch (const ParseError&) {
      ++excluded;
    } catch (const std::exception&) {
      ++excluded;
    }
  }
  ComparativeRankingResult out;
  out.excluded = excluded;
  out.mean = valid == 0 ? 3.0 : total / static_cast<double>(valid);
  return out;
}

double llm_independent_score(
    const std::vector<std::pair<std::string, std::string>>& text_and_summary,
    llm::LlmClient& llm) {
  if (text_and_summary.empty()) throw ParameterError("llm_independent_score: no samples");
  double total = 0.0;
  int valid = 0;
  for (const auto& [text, summary] : text_and_summary) {
    try {
      std::string raw = llm::complete_template(llm, llm::TemplateId::kEvalIndependentScore,
                                               {{"text", text}, {"summary", summary}});
      int score = std::stoi(llm::parse_tagged(raw, "score"));
      if (score < 1 || score > 5) continue;
      total += score;
      ++valid;
    } catch (const ParseError&) {
    } catch (const std::exception&) {
    }
  }
  return valid == 0 ? 0.0 : total / static_cast<double>(valid);
}

json metric_report_to_json(const MetricReport& r) {
  json j{{"keyphrase_jaccard", r.keyphrase_jaccard},
         {"nounchunk_jaccard", r.nounchunk_jaccard},
         {"tfidf_cosine", r.tfidf_cosine},
         {"token_overlap", r.token_overlap},
         {"bigram_overlap", r.bigram_overlap},
         {"topic_coverage", r.topic_coverage},
         {"mean_cosine", r.mean_cosine},
         {"median_cosine", r.median_cosine}};
  auto set_opt = [&](const char* key, const std::optional<double>& v) {
    if (v) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  };
  set_opt("comparative_ranking_mean", r.comparative_ranking_mean);
  set_opt("binary_dp_preferred_pct", r.binary_dp_preferred_pct);
  set_opt("independent_score_private", r.independent_score_private);
  set_opt("independent_score_public", r.independent_score_public);
  return j;
}

std::string render_metric_report_html(const MetricReport& r, const std::string& title) {
  auto row = [](const std::string& name, const std::string& value) {
    return "    <tr><td>" + name + "</td><td>" + value + "</td></tr>\n";
  };
  auto fmt = [](double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
  };
  auto opt = [&](const std::optional<double>& v) { return v ? fmt(*v) : std::string("n/a"); };

  std::string html;
  html += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" + title +
          "</title>\n<style>body{font-family:sans-serif;margin:2em}table{border-collapse:"
          "collapse}td,th{border:1px solid #999;padding:4px 10px}th{background:#eee}</style>\n"
          "</head>\n<body>\n<h1>" +
          title + "</h1>\n";
  html += "<h2>Lexical, n-gram, and topic similarity</h2>\n<table>\n"
          "    <tr><th>Metric</th><th>Value</th></tr>\n";
  html += row("Key phrases (Jaccard)", fmt(r.keyphrase_jaccard));
  html += row("Noun chunks (Jaccard)", fmt(r.nounchunk_jaccard));
  html += row("TF-IDF cosine", fmt(r.tfidf_cosine));
  html += row("Tokens (Jaccard)", fmt(r.token_overlap));
  html += row("2-grams (Jaccard)", fmt(r.bigram_overlap));
  html += row("Topic coverage", fmt(r.topic_coverage));
  html += "</table>\n<h2>Embedding proximity and judge metrics</h2>\n<table>\n"
          "    <tr><th>Metric</th><th>Value</th></tr>\n";
  html += row("Mean cosine (nearest public)", fmt(r.mean_cosine));
  html += row("Median cosine (nearest public)", fmt(r.median_cosine));
  html += row("Comparative ranking mean (1-5, lower = private better)",
              opt(r.comparative_ranking_mean));
  html += row("Binary preference (% DP preferred)", opt(r.binary_dp_preferred_pct));
  html += row("Independent score, private (1-5)", opt(r.independent_score_private));
  html += row("Independent score, public (1-5)", opt(r.independent_score_public));
  html += "</table>\n</body>\n</html>\n";
  return html;
}

}  // namespace urania::eval
