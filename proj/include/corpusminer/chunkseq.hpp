#pragma once

#include <cstdint>
#include <vector>

#include "corpusminer/assignment.hpp"
#include "corpusminer/textprep.hpp"

namespace cm::cluster {

/// Splits a document into consecutive chunks of chunk_size tokens; the
/// last chunk may be shorter. Chunk lengths always sum to the input
/// length; a document of at most chunk_size tokens yields one chunk.
std::vector<text::TokenDoc> split_chunks(const text::TokenDoc& doc,
                                         std::size_t chunk_size);

struct ChunkSeqOptions {
  std::size_t chunk_size = 300;
  int chunk_model_k = 50;       // chunk-level topic count
  int final_k = 30;
  std::uint64_t seed = 1;
  std::size_t chunk_lda_iterations = 200;
  std::size_t label_embedding_dim = 16;
  std::size_t label_epochs = 40;
};

/// Chunk-level topic labeling reduced to a sequence-clustering problem:
/// each document's chunk-topic sequence is treated as a sentence of label
/// tokens, embedded with the skip-gram trainer, averaged per document and
/// clustered with k-means.
ClusterAssignment chunk_topic_sequence_cluster(
    const std::vector<text::TokenDoc>& corpus, const ChunkSeqOptions& opts);

}  // namespace cm::cluster
