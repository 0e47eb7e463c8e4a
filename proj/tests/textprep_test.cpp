#include "corpusminer/textprep.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "corpusminer/rng.hpp"
#include "doctest.h"

using namespace cm::text;

TEST_CASE("tokenize splits words and records years") {
  const TokenDoc doc = tokenize("Pricing in 1987 crashed");
  CHECK(doc.tokens == std::vector<std::string>{"Pricing", "in", "1987",
                                               "crashed"});
  CHECK(doc.years_found == std::vector<int>{1987});
  CHECK(doc.stage == Stage::raw);
}

TEST_CASE("tokenize of empty text") {
  const TokenDoc doc = tokenize("");
  CHECK(doc.tokens.empty());
  CHECK(doc.years_found.empty());
}

TEST_CASE("tokenize keeps Latin letter runs only") {
  // Greek alpha is not in the Latin letter class; the hyphen splits.
  const TokenDoc doc = tokenize("α-stable Lévy");
  CHECK(doc.tokens == std::vector<std::string>{"stable", "Lévy"});
}

TEST_CASE("tokenize year bounds") {
  const TokenDoc doc = tokenize("codes 0999 1000 2999 3000 12345 987");
  CHECK(doc.years_found == std::vector<int>{1000, 2999});
  // All numerals stay in the raw token stream.
  CHECK(doc.tokens.size() == 7);
}

TEST_CASE("lemmatize applies the suffix rule table") {
  TokenDoc doc = tokenize("models priced volatilities");
  const TokenDoc lemma = lemmatize(doc);
  CHECK(lemma.tokens ==
        std::vector<std::string>{"model", "price", "volatility"});
  CHECK(lemma.stage == Stage::lemmatized);
}

TEST_CASE("lemmatize fixed point and lowercase") {
  CHECK(lemmatize(tokenize("risk")).tokens == std::vector<std::string>{"risk"});
  CHECK(lemmatize(tokenize("Markets")).tokens ==
        std::vector<std::string>{"market"});
}

TEST_CASE("lemma_of rule spot checks") {
  CHECK(lemma_of("studies") == "study");
  CHECK(lemma_of("boxes") == "box");
  CHECK(lemma_of("classes") == "class");
  CHECK(lemma_of("prices") == "price");
  CHECK(lemma_of("uses") == "use");
  CHECK(lemma_of("analysis") == "analysis");
  CHECK(lemma_of("stopped") == "stop");
  CHECK(lemma_of("agreed") == "agree");
  CHECK(lemma_of("studied") == "study");
  CHECK(lemma_of("settled") == "settle");
  CHECK(lemma_of("called") == "call");
  CHECK(lemma_of("pricing") == "price");
  CHECK(lemma_of("modeling") == "model");
  CHECK(lemma_of("hedging") == "hedge");
  CHECK(lemma_of("trading") == "trade");
  CHECK(lemma_of("volatilities") == "volatility");
  CHECK(lemma_of("process") == "process");
  CHECK(lemma_of("thus") == "thus");
}

TEST_CASE("lemmatize rejects non-raw input") {
  TokenDoc doc = tokenize("models");
  const TokenDoc lemma = lemmatize(doc);
  CHECK_THROWS_AS(lemmatize(lemma), std::invalid_argument);
}

TEST_CASE("clean applies every filter") {
  const StopwordConfig cfg = default_stopword_config();
  TokenDoc doc;
  doc.stage = Stage::lemmatized;
  doc.tokens = {"the", "model", "of", "xx"};
  FreqMap freq = {{"the", 1000}, {"model", 100}, {"of", 900}, {"xx", 50}};
  const TokenDoc cleaned = clean(doc, cfg, freq);
  CHECK(cleaned.tokens == std::vector<std::string>{"model"});
  CHECK(cleaned.stage == Stage::cleaned);
}

TEST_CASE("clean of empty doc") {
  const StopwordConfig cfg = default_stopword_config();
  TokenDoc doc;
  doc.stage = Stage::lemmatized;
  CHECK(clean(doc, cfg, {}).tokens.empty());
}

TEST_CASE("clean drops tokens longer than 25 characters") {
  const StopwordConfig cfg = default_stopword_config();
  TokenDoc doc;
  doc.stage = Stage::lemmatized;
  const std::string long_token(26, 'a');
  const std::string max_token(25, 'b');
  doc.tokens = {long_token, max_token};
  FreqMap freq = {{long_token, 100}, {max_token, 100}};
  const TokenDoc cleaned = clean(doc, cfg, freq);
  CHECK(cleaned.tokens == std::vector<std::string>{max_token});
}

TEST_CASE("clean drops -ly adverbs but keeps the exception list") {
  const StopwordConfig cfg = default_stopword_config();
  TokenDoc doc;
  doc.stage = Stage::lemmatized;
  doc.tokens = {"likely", "supply", "closely"};
  FreqMap freq = {{"likely", 100}, {"supply", 100}, {"closely", 100}};
  const TokenDoc cleaned = clean(doc, cfg, freq);
  CHECK(cleaned.tokens == std::vector<std::string>{"supply"});
}

TEST_CASE("clean below min count and numeral removal") {
  const StopwordConfig cfg = default_stopword_config();
  TokenDoc doc;
  doc.stage = Stage::lemmatized;
  doc.tokens = {"model", "rare", "1987"};
  FreqMap freq = {{"model", 25}, {"rare", 24}, {"1987", 500}};
  const TokenDoc cleaned = clean(doc, cfg, freq);
  CHECK(cleaned.tokens == std::vector<std::string>{"model"});
}

TEST_CASE("clean is idempotent") {
  const StopwordConfig cfg = default_stopword_config();
  cm::Rng rng(11);
  const char* pool[] = {"model",  "the",    "market", "risk", "proof",
                        "likely", "supply", "of",     "ab",   "volatility"};
  for (int trial = 0; trial < 20; ++trial) {
    TokenDoc doc;
    doc.stage = Stage::lemmatized;
    for (int i = 0; i < 40; ++i) {
      doc.tokens.push_back(pool[rng.uniform_u32(10)]);
    }
    FreqMap freq = corpus_frequencies({doc});
    const TokenDoc once = clean(doc, cfg, freq, 3);
    TokenDoc again_input = once;
    again_input.stage = Stage::lemmatized;
    const TokenDoc twice = clean(again_input, cfg, freq, 3);
    CHECK(once.tokens == twice.tokens);
  }
}

TEST_CASE("stage monotonicity of token counts") {
  const StopwordConfig cfg = default_stopword_config();
  const std::string text =
      "The market model explains 1987 volatility dynamics. Models were "
      "priced daily and the risks are measured; see α-quantiles of returns.";
  const TokenDoc raw = tokenize(text);
  const TokenDoc lemma = lemmatize(raw);
  const FreqMap freq = corpus_frequencies({lemma});
  const TokenDoc cleaned = clean(lemma, cfg, freq, 1);
  CHECK(cleaned.tokens.size() <= lemma.tokens.size());
  CHECK(lemma.tokens.size() <= raw.tokens.size());
}

namespace {
const char* kEnglishFixture =
    "This article investigates how traders respond to sudden movements in "
    "asset values when uncertainty about future policy is high. We collect "
    "daily observations from several exchanges and estimate a simple "
    "regression that links volume to volatility. The findings suggest that "
    "liquidity falls sharply after unexpected announcements and recovers "
    "within a few sessions.";

const char* kFrenchFixture =
    "Cet article examine comment les investisseurs réagissent aux mouvements "
    "soudains des valeurs lorsque l'incertitude sur la politique future est "
    "élevée. Nous recueillons des observations quotidiennes de plusieurs "
    "bourses et estimons une régression simple qui relie le volume à la "
    "volatilité. Les résultats suggèrent que la liquidité baisse fortement "
    "après des annonces inattendues et se rétablit en quelques séances.";
}  // namespace

TEST_CASE("detect_english accepts an English paragraph") {
  const LanguageCall call = detect_english(tokenize(kEnglishFixture));
  CHECK(call.is_english);
  CHECK_FALSE(call.low_confidence);
}

TEST_CASE("detect_english rejects a French paragraph") {
  const LanguageCall call = detect_english(tokenize(kFrenchFixture));
  CHECK_FALSE(call.is_english);
  CHECK_FALSE(call.low_confidence);
}

TEST_CASE("detect_english short input is low confidence") {
  const LanguageCall call = detect_english(tokenize("cinq mots seulement ici"));
  CHECK(call.is_english);
  CHECK(call.low_confidence);
}

TEST_CASE("detect_english is deterministic") {
  const TokenDoc doc = tokenize(kEnglishFixture);
  const LanguageCall a = detect_english(doc);
  const LanguageCall b = detect_english(doc);
  CHECK(a.is_english == b.is_english);
  CHECK(a.low_confidence == b.low_confidence);
}

TEST_CASE("flesch score of the cat sentence") {
  const ReadabilityScore score = flesch_score("The cat sat on the mat.");
  CHECK(score.words == 6);
  CHECK(score.sentences == 1);
  CHECK(score.syllables == 6);
  CHECK(score.flesch == doctest::Approx(116.145).epsilon(1e-9));
}

TEST_CASE("flesch empty text convention") {
  const ReadabilityScore score = flesch_score("");
  CHECK(score.words == 0);
  CHECK(score.flesch == doctest::Approx(206.835));
}

TEST_CASE("flesch two-sentence fixture matches the hand computation") {
  // words = 8, sentences = 2, syllables (rule table by hand):
  // simple 2, markets 2, move 1, fast 1, traders 2, watch 1, prices 2,
  // closely 3 -> 14. 206.835 - 1.015*(8/2) - 84.6*(14/8) = 54.725.
  const ReadabilityScore score =
      flesch_score("Simple markets move fast. Traders watch prices closely.");
  CHECK(score.words == 8);
  CHECK(score.sentences == 2);
  CHECK(score.syllables == 14);
  CHECK(score.flesch == doctest::Approx(54.725).epsilon(1e-6));
}

TEST_CASE("flesch is whitespace invariant") {
  const ReadabilityScore a = flesch_score("The cat sat on the mat.");
  const ReadabilityScore b =
      flesch_score("  The   cat\tsat\n on   the mat.  ");
  CHECK(a.flesch == b.flesch);
  CHECK(a.words == b.words);
  CHECK(a.sentences == b.sentences);
}

TEST_CASE("frequency_table shares and ordering") {
  TokenDoc doc;
  doc.stage = Stage::cleaned;
  doc.tokens = {"model", "model", "rate"};
  const auto table = frequency_table({doc});
  REQUIRE(table.size() == 2);
  CHECK(table[0].token == "model");
  CHECK(table[0].count == 2);
  CHECK(table[0].percent == doctest::Approx(100.0 * 2.0 / 3.0));
}

TEST_CASE("frequency_table empty corpus") {
  CHECK(frequency_table({}).empty());
}

TEST_CASE("frequency_table planted one-percent share") {
  std::vector<TokenDoc> corpus;
  TokenDoc doc;
  doc.stage = Stage::cleaned;
  for (int i = 0; i < 99; ++i) {
    doc.tokens.push_back("filler" + std::to_string(i));
  }
  doc.tokens.push_back("model");
  corpus.push_back(doc);
  const auto table = frequency_table(corpus);
  for (const auto& e : table) {
    if (e.token == "model") {
      CHECK(e.percent == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("frequency_table rejects mixed stages") {
  TokenDoc a, b;
  a.stage = Stage::raw;
  b.stage = Stage::cleaned;
  a.tokens = {"x"};
  b.tokens = {"y"};
  CHECK_THROWS_AS(frequency_table({a, b}), std::invalid_argument);
}

TEST_CASE("stopword files replace the built-in sets") {
  const auto path =
      std::filesystem::temp_directory_path() / "cm_stopwords.txt";
  {
    std::ofstream out(path);
    out << "# comment\nFoo\n  bar  \n\n";
  }
  StopwordConfig cfg = default_stopword_config();
  load_stopwords(path, cfg.domain_stopwords);
  CHECK(cfg.domain_stopwords == std::set<std::string>{"foo", "bar"});
  std::filesystem::remove(path);
}

TEST_CASE("corpus ndjson round trip") {
  TokenDoc a = tokenize("Pricing in 1987 crashed", "doc-a");
  TokenDoc b = lemmatize(tokenize("Models were priced", "doc-b"));
  const auto path = std::filesystem::temp_directory_path() /
                    "cm_textprep_roundtrip.ndjson";
  save_corpus({a, b}, path);
  const auto loaded = load_corpus(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].doc_id == "doc-a");
  CHECK(loaded[0].tokens == a.tokens);
  CHECK(loaded[0].years_found == a.years_found);
  CHECK(loaded[1].stage == Stage::lemmatized);
  CHECK(loaded[1].tokens == b.tokens);
  std::filesystem::remove(path);
}
