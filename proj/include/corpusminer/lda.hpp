#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "corpusminer/assignment.hpp"
#include "corpusminer/vocab.hpp"

namespace cm::cluster {

struct LdaOptions {
  int k = 30;
  double alpha = 0.0;  // <= 0 selects the 50/k default
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 1;
};

/// Topic/word and document/topic count state of a collapsed Gibbs run.
class LdaModel {
 public:
  static LdaModel fit(const vec::DocTermMatrix& matrix, const LdaOptions& opts);

  int k() const { return k_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t n_docs() const { return doc_ids_.size(); }
  std::size_t total_tokens() const { return total_tokens_; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }

  std::size_t topic_word_count(int topic, std::size_t word) const {
    return topic_word_[static_cast<std::size_t>(topic) * vocab_size_ + word];
  }
  std::size_t doc_topic_count(std::size_t doc, int topic) const {
    return doc_topic_[doc * static_cast<std::size_t>(k_) +
                      static_cast<std::size_t>(topic)];
  }
  std::size_t topic_total(int topic) const {
    return topic_totals_[static_cast<std::size_t>(topic)];
  }

  /// Highest-probability words of one topic (count desc, index asc).
  std::vector<std::size_t> top_words(int topic, std::size_t n) const;

  /// argmax of each document's topic counts; ties break to the lowest
  /// topic index.
  ClusterAssignment doc_labels() const;

  /// JSON header plus a little-endian binary counts file at `<path>.counts`.
  void save(const std::filesystem::path& path) const;
  static LdaModel load(const std::filesystem::path& path);

  /// Rebuilds a model from externally held count state (deserialization,
  /// tooling).
  static LdaModel from_counts(int k, double alpha, double beta,
                              std::vector<std::string> doc_ids,
                              std::size_t vocab_size,
                              std::vector<std::size_t> topic_word,
                              std::vector<std::size_t> doc_topic,
                              std::vector<std::size_t> topic_totals);

 private:
  int k_ = 0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::size_t iterations_ = 0;
  std::uint64_t seed_ = 0;
  std::size_t vocab_size_ = 0;
  std::size_t total_tokens_ = 0;
  std::vector<std::string> doc_ids_;
  std::vector<std::size_t> topic_word_;   // k x V
  std::vector<std::size_t> doc_topic_;    // D x k
  std::vector<std::size_t> topic_totals_; // k
};

}  // namespace cm::cluster
