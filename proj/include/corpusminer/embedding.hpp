#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "corpusminer/matrix.hpp"
#include "corpusminer/textprep.hpp"
#include "corpusminer/vocab.hpp"

namespace cm::vec {

enum class ModelKind { word2vec, doc2vec };
enum class Doc2VecMode { dbow, dm };
enum class DocWeighting { uniform, tfidf };

struct TrainingConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 40;
  double alpha = 0.025;      // initial learning rate, decays linearly
  double min_alpha = 1e-4;
  std::uint64_t seed = 1;
  std::size_t workers = 1;   // >1 enables the lock-free (non-deterministic) path
  Doc2VecMode mode = Doc2VecMode::dbow;
};

/// Learned vectors. word_vectors holds the trained word representation
/// (input vectors for word2vec/dm, output vectors for dbow); doc_vectors
/// is populated for doc2vec only.
struct EmbeddingModel {
  ModelKind kind = ModelKind::word2vec;
  std::size_t dim = 0;
  Vocabulary vocab;
  Matrix word_vectors;
  Matrix doc_vectors;
  std::vector<std::string> doc_ids;
  TrainingConfig config;

  /// Binary container (little-endian f32 rows) plus a JSON vocabulary
  /// sidecar at `<path>.vocab.json`.
  void save(const std::filesystem::path& path) const;
  static EmbeddingModel load(const std::filesystem::path& path);
};

/// Skip-gram with negative sampling. Input vectors start uniform in
/// [-0.5/dim, 0.5/dim], output vectors at zero; negatives are drawn from
/// the unigram^(3/4) distribution. Deterministic for workers == 1.
EmbeddingModel train_word2vec(const std::vector<text::TokenDoc>& corpus,
                              const TrainingConfig& cfg);

/// Paragraph vectors: dbow trains one vector per document to predict its
/// tokens; dm predicts each token from the mean of the document vector
/// and the context word vectors.
EmbeddingModel train_doc2vec(const std::vector<text::TokenDoc>& corpus,
                             const TrainingConfig& cfg);

struct DocVector {
  std::vector<double> values;
  bool all_out_of_vocabulary = false;
};

/// Weighted mean of in-vocabulary word vectors. TF-IDF weights fall back
/// to uniform when every weight is zero.
DocVector doc_vector_from_words(const EmbeddingModel& model,
                                const text::TokenDoc& doc,
                                DocWeighting weighting = DocWeighting::tfidf);

/// Loss and analytic gradients of one negative-sampling step:
///   L = -ln s(v.p) - sum_n ln s(-v.n)      (s = logistic sigmoid)
/// Exposed so the finite-difference check exercises the exact expressions
/// the trainers use.
struct SgnsGradients {
  double loss = 0.0;
  std::vector<double> d_input;
  std::vector<double> d_positive;
  std::vector<std::vector<double>> d_negatives;
};
SgnsGradients sgns_loss_and_gradients(
    const std::vector<double>& input, const std::vector<double>& positive,
    const std::vector<std::vector<double>>& negatives);

}  // namespace cm::vec
