#include "corpusminer/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "corpusminer/rng.hpp"

namespace cm::cluster {

namespace {

std::size_t nearest_centroid(const Matrix& centroids, const double* p,
                             std::size_t dim, double* dist_out = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(centroids.row(c), p, dim);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist_out) *dist_out = best_d;
  return best;
}

Matrix kmeanspp_init(const Matrix& points, int k, Rng& rng) {
  const std::size_t n = points.rows();
  const std::size_t dim = points.cols();
  Matrix centroids(static_cast<std::size_t>(k), dim);

  std::size_t first = rng.uniform_u32(static_cast<std::uint32_t>(n));
  std::copy_n(points.row(first), dim, centroids.row(0));

  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d =
          squared_distance(points.row(i), centroids.row(c - 1), dim);
      d2[i] = std::min(d2[i], d);
      total += d2[i];
    }
    std::size_t chosen = 0;
    if (total > 0.0) {
      double u = rng.uniform01() * total;
      for (std::size_t i = 0; i < n; ++i) {
        u -= d2[i];
        if (u <= 0.0) {
          chosen = i;
          break;
        }
        chosen = i;  // numeric tail: fall through to the last point
      }
    } else {
      chosen = rng.uniform_u32(static_cast<std::uint32_t>(n));
    }
    std::copy_n(points.row(chosen), dim, centroids.row(c));
  }
  return centroids;
}

}  // namespace

ClusterAssignment kmeans(const Matrix& points, const KMeansOptions& opts,
                         const std::vector<std::string>& doc_ids) {
  const std::size_t n = points.rows();
  const std::size_t dim = points.cols();
  if (opts.k <= 0 || static_cast<std::size_t>(opts.k) > n) {
    throw std::invalid_argument("kmeans: k must be in [1, n_points]");
  }
  if (!doc_ids.empty() && doc_ids.size() != n) {
    throw std::invalid_argument("kmeans: doc_ids size mismatch");
  }

  Rng rng(opts.seed);
  Matrix centroids = kmeanspp_init(points, opts.k, rng);
  const std::size_t k = static_cast<std::size_t>(opts.k);

  std::vector<int> labels(n, 0);
  std::vector<double> point_dist(n, 0.0);
  double prev_inertia = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    // Assignment step.
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(
          nearest_centroid(centroids, points.row(i), dim, &point_dist[i]));
      inertia += point_dist[i];
    }
    if (inertia > prev_inertia + 1e-9 * (1.0 + prev_inertia)) {
      throw std::logic_error("kmeans: inertia increased across iterations");
    }
    prev_inertia = inertia;

    // Update step.
    Matrix next(k, dim);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      double* row = next.row(c);
      const double* p = points.row(i);
      for (std::size_t j = 0; j < dim; ++j) row[j] += p[j];
      ++sizes[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) {
        // Reseed an empty cluster to the point farthest from its centroid.
        std::size_t farthest = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (point_dist[i] > best) {
            best = point_dist[i];
            farthest = i;
          }
        }
        std::copy_n(points.row(farthest), dim, next.row(c));
        labels[farthest] = static_cast<int>(c);
        point_dist[farthest] = 0.0;
        continue;
      }
      double* row = next.row(c);
      for (std::size_t j = 0; j < dim; ++j) {
        row[j] /= static_cast<double>(sizes[c]);
      }
    }

    double max_shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      max_shift = std::max(
          max_shift, squared_distance(centroids.row(c), next.row(c), dim));
    }
    centroids = std::move(next);
    if (std::sqrt(max_shift) < opts.tol) break;
  }

  // Final assignment against the converged centroids.
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] =
        static_cast<int>(nearest_centroid(centroids, points.row(i), dim));
  }

  ClusterAssignment result;
  result.k = opts.k;
  result.model_tag = "kmeans";
  result.labels = std::move(labels);
  result.centroids = std::move(centroids);
  if (doc_ids.empty()) {
    result.doc_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      result.doc_ids.push_back(std::to_string(i));
    }
  } else {
    result.doc_ids = doc_ids;
  }
  result.validate();
  return result;
}

double kmeans_inertia(const Matrix& points, const ClusterAssignment& a) {
  if (!a.centroids) {
    throw std::invalid_argument("kmeans_inertia requires centroids");
  }
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    inertia += squared_distance(
        points.row(i), a.centroids->row(static_cast<std::size_t>(a.labels[i])),
        points.cols());
  }
  return inertia;
}

}  // namespace cm::cluster
