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

#include <cmath>
#include <set>

#include <doctest.h>

#include "urania/evaluation.hpp"
#include "urania/llm/mock_client.hpp"
#include "urania/rng.hpp"
#include "urania/synthetic.hpp"
#include "urania/text.hpp"

using namespace urania;
using namespace urania::eval;

namespace {

// Brute-force Jaccard over two string sets.
double jaccard_oracle(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const auto& x : a) {
    if (b.count(x)) ++inter;
  }
  std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::set<std::string> token_set_oracle(const std::vector<std::string>& docs) {
  std::set<std::string> out;
  for (const auto& d : docs) {
    for (auto& t : tokenize(d)) out.insert(t);
  }
  return out;
}

std::set<std::string> bigram_set_oracle(const std::vector<std::string>& docs) {
  std::set<std::string> out;
  for (const auto& d : docs) {
    auto toks = tokenize(d);
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) out.insert(toks[i] + " " + toks[i + 1]);
  }
  return out;
}

std::vector<std::string> random_summaries(Rng& rng, std::size_t n) {
  static const std::vector<std::string> words = {
      "cooking", "recipes", "travel", "flights", "algebra", "homework",
      "python",  "fitness", "sleep",  "museum",  "essay",   "database"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t len = 1 + rng.below(6);
    std::vector<std::string> doc;
    for (std::size_t w = 0; w < len; ++w) doc.push_back(words[rng.below(words.size())]);
    out.push_back(join(doc, " "));
  }
  return out;
}

}  // namespace

TEST_CASE("identical sets score 1.0 on every lexical metric") {
  std::vector<std::string> set = {"cooking recipes and fresh ingredients",
                                  "travel flights and cheap hotels"};
  auto lex = lexical_similarity(set, set);
  CHECK(lex.keyphrase_jaccard == doctest::Approx(1.0));
  CHECK(lex.nounchunk_jaccard == doctest::Approx(1.0));
  CHECK(lex.tfidf_cosine == doctest::Approx(1.0));
  auto [tokens, bigrams] = ngram_overlap(set, set);
  CHECK(tokens == doctest::Approx(1.0));
  CHECK(bigrams == doctest::Approx(1.0));
}

TEST_CASE("disjoint vocabularies score 0.0") {
  std::vector<std::string> a = {"cooking recipes baking flavors"};
  std::vector<std::string> b = {"python debugging compiler database"};
  auto lex = lexical_similarity(a, b);
  CHECK(lex.keyphrase_jaccard == doctest::Approx(0.0));
  CHECK(lex.tfidf_cosine == doctest::Approx(0.0));
  auto [tokens, bigrams] = ngram_overlap(a, b);
  CHECK(tokens == doctest::Approx(0.0));
  CHECK(bigrams == doctest::Approx(0.0));
}

TEST_CASE("hand-computed n-gram example: 'a b c' vs 'b c d'") {
  auto [tokens, bigrams] = ngram_overlap({"a b c"}, {"b c d"});
  CHECK(tokens == doctest::Approx(0.5));          // {b,c} / {a,b,c,d}
  CHECK(bigrams == doctest::Approx(1.0 / 3.0));   // {bc} / {ab,bc,cd}
}

TEST_CASE("single-token summaries have zero bigram overlap") {
  auto [tokens, bigrams] = ngram_overlap({"cooking"}, {"cooking"});
  CHECK(tokens == doctest::Approx(1.0));
  CHECK(bigrams == doctest::Approx(0.0));
}

TEST_CASE("token and bigram overlap equal the brute-force oracle on 200 random instances") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_summaries(rng, 1 + rng.below(5));
    auto b = random_summaries(rng, 1 + rng.below(5));
    auto [tokens, bigrams] = ngram_overlap(a, b);
    double tok_oracle = jaccard_oracle(token_set_oracle(a), token_set_oracle(b));
    double big_oracle = jaccard_oracle(bigram_set_oracle(a), bigram_set_oracle(b));
    REQUIRE(std::fabs(tokens - tok_oracle) < 1e-12);
    REQUIRE(std::fabs(bigrams - big_oracle) < 1e-12);
  }
}

TEST_CASE("all jaccard metrics are symmetric and bounded on random inputs") {
  Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = random_summaries(rng, 1 + rng.below(4));
    auto b = random_summaries(rng, 1 + rng.below(4));
    auto [t_ab, b_ab] = ngram_overlap(a, b);
    auto [t_ba, b_ba] = ngram_overlap(b, a);
    REQUIRE(t_ab == t_ba);
    REQUIRE(b_ab == b_ba);
    REQUIRE(t_ab >= 0.0);
    REQUIRE(t_ab <= 1.0);
    auto lex_ab = lexical_similarity(a, b);
    auto lex_ba = lexical_similarity(b, a);
    REQUIRE(lex_ab.keyphrase_jaccard == lex_ba.keyphrase_jaccard);
    REQUIRE(lex_ab.nounchunk_jaccard == lex_ba.nounchunk_jaccard);
    REQUIRE(lex_ab.tfidf_cosine == doctest::Approx(lex_ba.tfidf_cosine));
    REQUIRE(lex_ab.tfidf_cosine >= 0.0);
    REQUIRE(lex_ab.tfidf_cosine <= 1.0 + 1e-12);
  }
}

TEST_CASE("lexical jaccard on planted phrase sets matches set arithmetic") {
  // Key phrases here are the bigrams of each corpus; the sets below share
  // exactly one phrase.
  std::vector<std::string> a = {"travel tips matter", "street food stalls"};
  std::vector<std::string> b = {"street food stalls", "visa rules differ"};
  auto lex = lexical_similarity(a, b);
  // Phrases of a: {travel tips, tips matter, travel tips matter, street food,
  // food stalls, street food stalls}; b analogous; intersection = the three
  // "street food stalls" sub-phrases.
  std::set<std::string> phrases_a = {"travel tips", "tips matter", "travel tips matter",
                                     "street food", "food stalls", "street food stalls"};
  std::set<std::string> phrases_b = {"street food", "food stalls", "street food stalls",
                                     "visa rules", "rules differ", "visa rules differ"};
  CHECK(lex.keyphrase_jaccard == doctest::Approx(jaccard_oracle(phrases_a, phrases_b)));
}

TEST_CASE("topic coverage is 1.0 for identical sets and 0.0 for disjoint planted sets") {
  emb::MockEmbedder embedder(3, 16);
  std::vector<std::string> priv = {"cooking recipes baking", "flights hotels luggage",
                                   "algebra geometry exam"};
  CHECK(topic_coverage(priv, priv, embedder) == doctest::Approx(1.0));

  std::vector<std::string> pub = {"glaciology moraine cirque", "numismatics mintmark obverse",
                                  "falconry jesses tiercel"};
  CHECK(topic_coverage(priv, pub, embedder) == doctest::Approx(0.0));
}

TEST_CASE("topic coverage of half-covered planted topics lands near 0.5") {
  // Ten public topics; the private set covers the first five vocabularies.
  std::vector<std::vector<std::string>> vocabs = {
      {"alphaword", "alphatwo", "alphathree"}, {"betaword", "betatwo", "betathree"},
      {"gammaword", "gammatwo", "gammathree"}, {"deltaword", "deltatwo", "deltathree"},
      {"epsword", "epstwo", "epsthree"},       {"zetaword", "zetatwo", "zetathree"},
      {"etaword", "etatwo", "etathree"},       {"thetaword", "thetatwo", "thetathree"},
      {"iotaword", "iotatwo", "iotathree"},    {"kappaword", "kappatwo", "kappathree"}};
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    emb::MockEmbedder embedder(seed, 32);
    std::vector<std::string> pub, priv;
    Rng rng(seed);
    for (int t = 0; t < 10; ++t) {
      for (int i = 0; i < 4; ++i) {
        pub.push_back(vocabs[t][0] + " " + vocabs[t][1] + " " + vocabs[t][2]);
        if (t < 5) priv.push_back(vocabs[t][rng.below(2)] + " " + vocabs[t][2]);
      }
    }
    total += topic_coverage(priv, pub, embedder, 0.7);
  }
  double mean = total / 10.0;
  CHECK(mean > 0.4);
  CHECK(mean < 0.6);
}

TEST_CASE("embedding proximity equals a brute-force double loop") {
  emb::MockEmbedder embedder(11, 24);
  std::vector<std::string> priv = {"cooking recipes", "flights hotels", "python debugging"};
  std::vector<std::string> pub = {"cooking baking", "luggage hotels"};
  auto [mean, median] = embedding_proximity(priv, pub, embedder);

  std::vector<double> best;
  for (const auto& p : priv) {
    double m = -1.0;
    for (const auto& q : pub) {
      m = std::max(m, emb::cosine(embedder.embed(p), embedder.embed(q)));
    }
    best.push_back(m);
  }
  double mean_oracle = (best[0] + best[1] + best[2]) / 3.0;
  std::sort(best.begin(), best.end());
  CHECK(mean == doctest::Approx(mean_oracle));
  CHECK(median == doctest::Approx(best[1]));

  // private subset of public: both statistics hit 1.
  auto [m1, md1] = embedding_proximity({"cooking baking"}, pub, embedder);
  CHECK(m1 == doctest::Approx(1.0));
  CHECK(md1 == doctest::Approx(1.0));
}

TEST_CASE("a position-biased judge is nulled to 50% by order randomization") {
  llm::CannedLlm always_a(std::map<std::string, std::string>{
      {"eval_binary_preference", "reasoning...\n<choice>A</choice>"}});
  std::vector<JudgeSample> samples(10'000, {"conversation text", "private one", "public one"});
  auto result = llm_binary_preference(samples, always_a, 1234);
  CHECK(result.excluded == 0);
  CHECK(result.dp_preferred_pct > 48.0);
  CHECK(result.dp_preferred_pct < 52.0);
}

TEST_CASE("a judge keyed to the private text reports 100%") {
  llm::LambdaLlm judge([](const llm::CompletionRequest& req) -> std::string {
    bool a_is_private = req.bindings.at("summary_a").find("dpsumm") != std::string::npos;
    return std::string("<choice>") + (a_is_private ? "A" : "B") + "</choice>";
  });
  std::vector<JudgeSample> samples(200, {"text", "dpsumm private", "public"});
  auto result = llm_binary_preference(samples, judge, 77);
  CHECK(result.dp_preferred_pct == doctest::Approx(100.0));
}

TEST_CASE("unparseable judgments are excluded, not counted") {
  int call = 0;
  llm::LambdaLlm flaky([&](const llm::CompletionRequest&) -> std::string {
    return (call++ % 2 == 0) ? "<choice>A</choice>" : "no choice here";
  });
  std::vector<JudgeSample> samples(100, {"text", "private", "public"});
  auto result = llm_binary_preference(samples, flaky, 5);
  CHECK(result.excluded == 50);
}

TEST_CASE("comparative ranking: a constant-3 judge means 3.0") {
  llm::CannedLlm threes(std::map<std::string, std::string>{
      {"eval_comparative_ranking", "<rating>3</rating>"}});
  std::vector<JudgeSample> samples(500, {"text", "private", "public"});
  auto result = llm_comparative_ranking(samples, threes, 3);
  CHECK(result.mean == doctest::Approx(3.0));
}

TEST_CASE("comparative ranking: first-presented bias averages out to 3.0") {
  // Always rates the first presented summary as clearly better; with
  // randomized order the normalized scores 1 and 5 cancel.
  llm::CannedLlm first_wins(std::map<std::string, std::string>{
      {"eval_comparative_ranking", "<rating>1</rating>"}});
  std::vector<JudgeSample> samples(10'000, {"text", "private", "public"});
  auto result = llm_comparative_ranking(samples, first_wins, 99);
  CHECK(result.mean > 2.95);
  CHECK(result.mean < 3.05);
}

TEST_CASE("out-of-range ratings are excluded") {
  llm::CannedLlm nines(std::map<std::string, std::string>{
      {"eval_comparative_ranking", "<rating>9</rating>"}});
  std::vector<JudgeSample> samples(10, {"text", "private", "public"});
  auto result = llm_comparative_ranking(samples, nines, 1);
  CHECK(result.excluded == 10);
  CHECK(result.mean == doctest::Approx(3.0));  // neutral default
}

TEST_CASE("independent scoring: constant judges") {
  llm::CannedLlm fives(std::map<std::string, std::string>{
      {"eval_independent_score", "<score>5</score>"}});
  llm::CannedLlm ones(std::map<std::string, std::string>{
      {"eval_independent_score", "<score>1</score>"}});
  std::vector<std::pair<std::string, std::string>> samples(20, {"convs", "summary"});
  CHECK(llm_independent_score(samples, fives) == doctest::Approx(5.0));
  CHECK(llm_independent_score(samples, ones) == doctest::Approx(1.0));
}

TEST_CASE("metric report serializes its optionals as null when unset") {
  MetricReport report;
  report.keyphrase_jaccard = 0.25;
  auto j = metric_report_to_json(report);
  CHECK(j["keyphrase_jaccard"] == doctest::Approx(0.25));
  CHECK(j["comparative_ranking_mean"].is_null());

  report.binary_dp_preferred_pct = 65.0;
  j = metric_report_to_json(report);
  CHECK(j["binary_dp_preferred_pct"] == doctest::Approx(65.0));

  auto html = render_metric_report_html(report, "test");
  CHECK(html.find("65") != std::string::npos);
  CHECK(html.find("<table>") != std::string::npos);
}

TEST_CASE("empty inputs are parameter errors") {
  emb::MockEmbedder embedder(1, 8);
  std::vector<std::string> none;
  std::vector<std::string> one = {"text"};
  CHECK_THROWS_AS(lexical_similarity(none, one), ParameterError);
  CHECK_THROWS_AS(topic_coverage(one, none, embedder), ParameterError);
  CHECK_THROWS_AS(embedding_proximity(none, one, embedder), ParameterError);
  llm::MockLlm mock(1);
  CHECK_THROWS_AS(llm_binary_preference({}, mock, 1), ParameterError);
}
