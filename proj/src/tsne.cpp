#include "corpusminer/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "corpusminer/rng.hpp"

namespace cm::insight {

namespace {

constexpr double kMinProb = 1e-12;

/// Conditional distribution row for point i at precision beta, returning
/// its Shannon entropy (nats).
double fill_conditional_row(const std::vector<double>& d2_row, std::size_t i,
                            double beta, std::vector<double>& p_row) {
  const std::size_t n = d2_row.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    p_row[j] = j == i ? 0.0 : std::exp(-beta * d2_row[j]);
    sum += p_row[j];
  }
  if (sum <= 0.0) sum = 1e-300;
  double entropy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    p_row[j] /= sum;
    if (p_row[j] > 1e-300) entropy -= p_row[j] * std::log(p_row[j]);
  }
  return entropy;
}

}  // namespace

Projection2D tsne(const Matrix& vectors, const TsneOptions& opts,
                  const std::vector<std::string>& doc_ids) {
  const std::size_t n = vectors.rows();
  const std::size_t dim = vectors.cols();
  if (n < 2) throw std::invalid_argument("tsne requires at least two points");
  if (!vectors.all_finite()) {
    throw std::invalid_argument("tsne input contains non-finite values");
  }

  Projection2D result;
  result.perplexity = opts.perplexity;
  result.iterations = opts.iterations;
  if (static_cast<double>(n) < 3.0 * opts.perplexity) {
    result.perplexity =
        std::max(1.0, (static_cast<double>(n) - 1.0) / 3.0);
    result.perplexity_shrunk = true;
    std::cerr << "tsne: perplexity " << opts.perplexity << " too large for "
              << n << " points, shrunk to " << result.perplexity << "\n";
  }
  const double target_entropy = std::log(result.perplexity);

  // Pairwise squared distances.
  std::vector<std::vector<double>> d2(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = squared_distance(vectors.row(i), vectors.row(j), dim);
      d2[i][j] = d;
      d2[j][i] = d;
    }
  }

  // Per-point precision search, then symmetrization.
  std::vector<double> P(n * n, 0.0);
  {
    std::vector<double> p_row(n);
    for (std::size_t i = 0; i < n; ++i) {
      double beta = 1.0, beta_lo = 0.0, beta_hi = -1.0;
      for (int it = 0; it < 64; ++it) {
        const double entropy = fill_conditional_row(d2[i], i, beta, p_row);
        const double diff = entropy - target_entropy;
        if (std::abs(diff) < 1e-7) break;
        if (diff > 0.0) {
          beta_lo = beta;
          beta = beta_hi < 0.0 ? beta * 2.0 : (beta + beta_hi) / 2.0;
        } else {
          beta_hi = beta;
          beta = beta_lo <= 0.0 ? beta / 2.0 : (beta + beta_lo) / 2.0;
        }
      }
      fill_conditional_row(d2[i], i, beta, p_row);
      for (std::size_t j = 0; j < n; ++j) P[i * n + j] = p_row[j];
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double pij = (P[i * n + j] + P[j * n + i]) /
                           (2.0 * static_cast<double>(n));
        P[i * n + j] = pij;
        P[j * n + i] = pij;
        total += 2.0 * pij;
      }
      P[i * n + i] = 0.0;
    }
    // Guard against degenerate inputs where mass was lost.
    if (total > 0.0 && std::abs(total - 1.0) > 1e-9) {
      for (auto& p : P) p /= total;
    }
    for (auto& p : P) p = std::max(p, kMinProb);
    for (std::size_t i = 0; i < n; ++i) P[i * n + i] = 0.0;
  }

  // Seeded small-variance start.
  Rng rng(opts.seed);
  Matrix Y(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    Y(i, 0) = rng.normal() * 1e-4;
    Y(i, 1) = rng.normal() * 1e-4;
  }

  Matrix velocity(n, 2);
  Matrix gains(n, 2);
  std::fill(gains.data().begin(), gains.data().end(), 1.0);
  std::vector<double> Q(n * n, 0.0);
  std::vector<double> num(n * n, 0.0);

  result.kl_history.reserve(opts.iterations);
  for (std::size_t iter = 0; iter < opts.iterations; ++iter) {
    const bool exaggerating = iter < opts.exaggeration_iters;
    const double momentum = exaggerating ? 0.5 : 0.8;
    const double exaggeration = exaggerating ? opts.exaggeration : 1.0;

    // Student-t affinities in the embedding.
    double q_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dy0 = Y(i, 0) - Y(j, 0);
        const double dy1 = Y(i, 1) - Y(j, 1);
        const double t = 1.0 / (1.0 + dy0 * dy0 + dy1 * dy1);
        num[i * n + j] = t;
        num[j * n + i] = t;
        q_total += 2.0 * t;
      }
    }
    for (std::size_t i = 0; i < n * n; ++i) {
      Q[i] = std::max(num[i] / q_total, kMinProb);
    }

    // Gradient and KL (on the unexaggerated P).
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double g0 = 0.0, g1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double pij = P[i * n + j];
        const double mult =
            (exaggeration * pij - Q[i * n + j]) * num[i * n + j];
        g0 += 4.0 * mult * (Y(i, 0) - Y(j, 0));
        g1 += 4.0 * mult * (Y(i, 1) - Y(j, 1));
        if (pij > kMinProb && j > i) {
          kl += 2.0 * pij * std::log(pij / Q[i * n + j]);
        }
      }
      // Adaptive per-coordinate gains, then momentum update.
      for (int c = 0; c < 2; ++c) {
        const double g = c == 0 ? g0 : g1;
        const bool same_sign = (g > 0.0) == (velocity(i, c) > 0.0);
        gains(i, c) = same_sign ? std::max(gains(i, c) * 0.8, 0.01)
                                : gains(i, c) + 0.2;
        velocity(i, c) =
            momentum * velocity(i, c) - opts.learning_rate * gains(i, c) * g;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      Y(i, 0) += velocity(i, 0);
      Y(i, 1) += velocity(i, 1);
    }
    result.kl_history.push_back(std::max(kl, 0.0));
  }

  result.final_kl = result.kl_history.empty() ? 0.0 : result.kl_history.back();
  result.coordinates = std::move(Y);
  if (doc_ids.empty()) {
    result.doc_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      result.doc_ids.push_back(std::to_string(i));
    }
  } else {
    if (doc_ids.size() != n) {
      throw std::invalid_argument("tsne: doc_ids size mismatch");
    }
    result.doc_ids = doc_ids;
  }
  return result;
}

}  // namespace cm::insight
