#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "corpusminer/textprep.hpp"

namespace cm::vec {

/// Token <-> index table with corpus totals and document frequencies.
/// Indices follow lexicographic token order for reproducibility.
class Vocabulary {
 public:
  Vocabulary() = default;
  static Vocabulary build(const std::vector<text::TokenDoc>& corpus);
  static Vocabulary from_parts(std::vector<std::string> tokens,
                               std::vector<std::size_t> counts,
                               std::vector<std::size_t> doc_freq,
                               std::size_t total_docs);

  std::size_t size() const { return tokens_.size(); }
  std::size_t total_docs() const { return total_docs_; }

  std::optional<std::size_t> index_of(const std::string& token) const;
  const std::string& token_at(std::size_t index) const { return tokens_[index]; }
  std::size_t corpus_count(std::size_t index) const { return counts_[index]; }
  std::size_t doc_freq(std::size_t index) const { return doc_freq_[index]; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// ln(total_docs / doc_freq); 0 for tokens present in every document.
  double idf(std::size_t index) const;

  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> doc_freq_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t total_docs_ = 0;
};

enum class Weighting { count, tfidf };

/// Sparse document-term matrix. Columns whose document frequency exceeds
/// max_df (strictly) are dropped at construction.
struct DocTermMatrix {
  struct Entry {
    std::size_t col = 0;
    double value = 0.0;
  };
  std::vector<std::string> doc_ids;
  std::vector<std::vector<Entry>> rows;  // entries sorted by column
  Vocabulary vocab;                      // retained columns only
  double max_df = 1.0;
  Weighting weighting = Weighting::count;

  std::size_t n_docs() const { return rows.size(); }
  std::size_t n_terms() const { return vocab.size(); }
  double row_sum(std::size_t i) const;
};

/// Builds the matrix from a cleaned corpus. TF-IDF weighting uses
/// count * ln(total_docs / doc_freq). Throws if the corpus is empty or no
/// vocabulary survives the max_df filter.
DocTermMatrix build_matrix(const std::vector<text::TokenDoc>& corpus,
                           double max_df = 0.75,
                           Weighting weighting = Weighting::count);

}  // namespace cm::vec
