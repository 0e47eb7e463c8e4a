#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corpusminer/matrix.hpp"

namespace cm::insight {

struct TsneOptions {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  std::uint64_t seed = 1;
  // Early exaggeration and the momentum switch both end here.
  std::size_t exaggeration_iters = 250;
  double exaggeration = 12.0;
};

struct Projection2D {
  std::vector<std::string> doc_ids;
  Matrix coordinates;  // n x 2
  double perplexity = 0.0;  // effective (possibly auto-shrunk) value
  std::size_t iterations = 0;
  double final_kl = 0.0;
  std::vector<double> kl_history;  // KL after every iteration
  bool perplexity_shrunk = false;
};

/// Exact (pairwise) t-SNE. Per-point bandwidths are binary-searched to
/// match the target perplexity; affinities are symmetrized. When rows
/// < 3*perplexity the perplexity is shrunk to (rows-1)/3 with a warning.
Projection2D tsne(const Matrix& vectors, const TsneOptions& opts,
                  const std::vector<std::string>& doc_ids = {});

}  // namespace cm::insight
