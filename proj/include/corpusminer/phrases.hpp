#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "corpusminer/textprep.hpp"

namespace cm::phrases {

/// Collocation statistics over a corpus. Adjacent token pairs whose score
///   (count(a,b) - min_count) * vocab_size / (count(a) * count(b))
/// reaches the threshold are merged into a single underscore-joined token.
class PhraseModel {
 public:
  static constexpr std::size_t kDefaultMinCount = 250;
  static constexpr double kDefaultThreshold = 10.0;

  static PhraseModel fit(const std::vector<text::TokenDoc>& corpus,
                         std::size_t min_count = kDefaultMinCount,
                         double threshold = kDefaultThreshold);

  /// Collocation score for a pair; throws if either token is unknown.
  double score(const std::string& a, const std::string& b) const;

  /// Greedy left-to-right single pass: a qualifying adjacent pair is merged
  /// and the merged token is not reconsidered within the same pass.
  text::TokenDoc transform(const text::TokenDoc& doc) const;

  std::size_t min_count() const { return min_count_; }
  double threshold() const { return threshold_; }
  std::size_t vocab_size() const { return unigram_counts_.size(); }
  std::size_t unigram_count(const std::string& token) const;
  std::size_t bigram_count(const std::string& a, const std::string& b) const;

  void save(const std::filesystem::path& path) const;
  static PhraseModel load(const std::filesystem::path& path);

 private:
  std::size_t min_count_ = kDefaultMinCount;
  double threshold_ = kDefaultThreshold;
  std::unordered_map<std::string, std::size_t> unigram_counts_;
  // Keyed "a\tb"; tokens themselves never contain a tab.
  std::unordered_map<std::string, std::size_t> bigram_counts_;
};

/// Fits and applies `passes` successive models (bigrams first, then
/// tri/four-grams), returning the rewritten corpus and the fitted models.
struct PhrasePipelineResult {
  std::vector<text::TokenDoc> corpus;
  std::vector<PhraseModel> models;
};
PhrasePipelineResult run_phrase_passes(std::vector<text::TokenDoc> corpus,
                                       int passes, std::size_t min_count,
                                       double threshold);

}  // namespace cm::phrases
