#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace cm::text {

enum class Stage { raw, lemmatized, cleaned };

std::string stage_name(Stage s);
std::optional<Stage> stage_from_name(const std::string& name);

/// A document at one preprocessing stage. `tokens` keeps corpus order;
/// `years_found` records standalone 4-digit numerals in [1000, 2999].
struct TokenDoc {
  std::string doc_id;
  Stage stage = Stage::raw;
  std::vector<std::string> tokens;
  std::vector<int> years_found;
};

struct StopwordConfig {
  std::set<std::string> english_stopwords;
  std::set<std::string> domain_stopwords;
  // Adverb filter: tokens ending in "ly" are dropped unless kept here.
  bool drop_ly_adverbs = true;
  std::set<std::string> ly_keep;
};

/// Built-in defaults; file loaders replace the corresponding set.
StopwordConfig default_stopword_config();
void load_stopwords(const std::filesystem::path& file,
                    std::set<std::string>& into);

struct ReadabilityScore {
  std::string doc_id;
  double flesch = 0.0;
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
};

/// Splits text into Latin-letter runs (words) and ASCII-digit runs
/// (numerals), both kept in the token stream in order. Every 4-digit
/// numeral valued 1000..2999 is also recorded in years_found.
TokenDoc tokenize(const std::string& text, const std::string& doc_id = "");

/// Lowercases every token and applies the suffix rule table below to
/// alphabetic tokens. Numeral tokens pass through unchanged.
///
/// Rules (applied after an exceptions lookup, first match wins):
///   -ies  -> -y        (studies -> study; 4-letter words drop only the s)
///   -es   -> strip     when the stem ends in s/x/z/ch/sh (boxes -> box)
///   -s    -> strip     unless the word ends in ss/us/is
///   -ied  -> -y        (studied -> study)
///   -eed  -> drop d    (agreed -> agree, words of 6+ letters)
///   -ed   -> strip     with doubled-consonant undo (stopped -> stop) or
///                      silent-e restore on stems ending c/u/v or
///                      consonant+l (priced -> price, settled -> settle)
///   -ing  -> strip     same doubling/e-restore treatment
///   -ities -> -ity     (volatilities -> volatility)
TokenDoc lemmatize(const TokenDoc& doc);

/// Lemma of a single lowercase token (rule table above).
std::string lemma_of(const std::string& lowercase_token);

/// Corpus frequency of each token type, used by the min-count filter.
using FreqMap = std::unordered_map<std::string, std::size_t>;
FreqMap corpus_frequencies(const std::vector<TokenDoc>& corpus);

inline constexpr std::size_t kDefaultVocabMinCount = 25;
inline constexpr std::size_t kMinTokenLength = 3;
inline constexpr std::size_t kMaxTokenLength = 25;

/// Drops non-alphabetic tokens, stopwords, tokens outside [3, 25]
/// code points, -ly adverbs (when configured) and tokens whose corpus
/// frequency is below vocab_min_count.
TokenDoc clean(const TokenDoc& doc, const StopwordConfig& cfg,
               const FreqMap& frequencies,
               std::size_t vocab_min_count = kDefaultVocabMinCount);

struct LanguageCall {
  bool is_english = false;
  // Set when the document has fewer than 20 tokens; such calls return
  // is_english = true regardless of content.
  bool low_confidence = false;
};

/// Character-trigram cosine match against built-in profiles for English,
/// French, German, Spanish and Italian.
LanguageCall detect_english(const TokenDoc& doc);

/// Flesch reading ease. Sentences are terminal-punctuation runs (min 1
/// when there are words); syllables use vowel-group counting with a
/// silent-e rule. Empty text scores the formula's constant term 206.835.
ReadabilityScore flesch_score(const std::string& text,
                              const std::string& doc_id = "");

struct FrequencyEntry {
  std::string token;
  std::size_t count = 0;
  double percent = 0.0;  // 100 * count / total tokens
};

/// Per-token corpus counts and percentages, sorted by count descending
/// (ties alphabetical). All docs must share one stage.
std::vector<FrequencyEntry> frequency_table(const std::vector<TokenDoc>& corpus);

// NDJSON persistence for token corpora ({"id","stage","tokens","years"}).
void save_corpus(const std::vector<TokenDoc>& corpus,
                 const std::filesystem::path& path);
std::vector<TokenDoc> load_corpus(const std::filesystem::path& path);

}  // namespace cm::text
