#include "corpusminer/chunkseq.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "corpusminer/embedding.hpp"
#include "corpusminer/kmeans.hpp"
#include "corpusminer/lda.hpp"
#include "corpusminer/vocab.hpp"

namespace cm::cluster {

std::vector<text::TokenDoc> split_chunks(const text::TokenDoc& doc,
                                         std::size_t chunk_size) {
  if (chunk_size == 0) {
    throw std::invalid_argument("chunk_size must be >= 1");
  }
  std::vector<text::TokenDoc> chunks;
  if (doc.tokens.empty()) {
    text::TokenDoc chunk;
    chunk.doc_id = doc.doc_id + "#0";
    chunk.stage = doc.stage;
    chunks.push_back(std::move(chunk));
    return chunks;
  }
  for (std::size_t start = 0; start < doc.tokens.size(); start += chunk_size) {
    const std::size_t end = std::min(start + chunk_size, doc.tokens.size());
    text::TokenDoc chunk;
    chunk.doc_id = doc.doc_id + "#" + std::to_string(chunks.size());
    chunk.stage = doc.stage;
    chunk.tokens.assign(doc.tokens.begin() + static_cast<std::ptrdiff_t>(start),
                        doc.tokens.begin() + static_cast<std::ptrdiff_t>(end));
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

ClusterAssignment chunk_topic_sequence_cluster(
    const std::vector<text::TokenDoc>& corpus, const ChunkSeqOptions& opts) {
  if (corpus.empty()) {
    throw std::invalid_argument("chunkseq requires a nonempty corpus");
  }

  // 1. Chunk every document, remembering ownership.
  std::vector<text::TokenDoc> chunks;
  std::vector<std::size_t> chunk_owner;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (auto& c : split_chunks(corpus[d], opts.chunk_size)) {
      chunks.push_back(std::move(c));
      chunk_owner.push_back(d);
    }
  }
  if (chunks.empty()) {
    throw std::invalid_argument("chunkseq: corpus has no tokens");
  }

  // 2. Label chunks with a topic model.
  const vec::DocTermMatrix matrix =
      vec::build_matrix(chunks, 1.0, vec::Weighting::count);
  LdaOptions lda_opts;
  lda_opts.k = opts.chunk_model_k;
  lda_opts.iterations = opts.chunk_lda_iterations;
  lda_opts.seed = opts.seed;
  const LdaModel chunk_model = LdaModel::fit(matrix, lda_opts);
  const ClusterAssignment chunk_labels = chunk_model.doc_labels();

  // 3. Each document's topic-label sequence becomes a sentence of label
  //    tokens ("t7 t3 t3 ...").
  std::vector<text::TokenDoc> sequences(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    sequences[d].doc_id = corpus[d].doc_id;
    sequences[d].stage = text::Stage::cleaned;
  }
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    sequences[chunk_owner[c]].tokens.push_back(
        "t" + std::to_string(chunk_labels.labels[c]));
  }

  // 4. Embed the label tokens and average per document.
  std::size_t distinct = 0;
  {
    std::set<std::string> labels;
    for (const auto& s : sequences) {
      labels.insert(s.tokens.begin(), s.tokens.end());
    }
    distinct = labels.size();
  }
  Matrix doc_vectors(corpus.size(), opts.label_embedding_dim);
  if (distinct >= 2) {
    vec::TrainingConfig w2v;
    w2v.dim = opts.label_embedding_dim;
    w2v.window = 5;
    w2v.negatives = std::min<std::size_t>(5, distinct - 1);
    w2v.epochs = opts.label_epochs;
    w2v.seed = opts.seed;
    const vec::EmbeddingModel label_model = vec::train_word2vec(sequences, w2v);
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      const vec::DocVector dv = vec::doc_vector_from_words(
          label_model, sequences[d], vec::DocWeighting::uniform);
      std::copy(dv.values.begin(), dv.values.end(), doc_vectors.row(d));
    }
  }
  // distinct < 2: every document keeps the zero vector and k-means
  // degenerates accordingly.

  // 5. Cluster the document vectors.
  l2_normalize_rows(doc_vectors);
  KMeansOptions km;
  km.k = opts.final_k;
  km.seed = opts.seed;
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& d : corpus) ids.push_back(d.doc_id);
  ClusterAssignment result = kmeans(doc_vectors, km, ids);
  result.model_tag = "chunkseq";
  return result;
}

}  // namespace cm::cluster
