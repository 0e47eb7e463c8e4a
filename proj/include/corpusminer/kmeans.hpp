#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corpusminer/assignment.hpp"
#include "corpusminer/matrix.hpp"

namespace cm::cluster {

struct KMeansOptions {
  int k = 2;
  std::uint64_t seed = 1;
  std::size_t max_iter = 300;
  double tol = 1e-6;  // stop when the largest centroid shift drops below
};

/// Lloyd iterations from a k-means++ start. Empty clusters are reseeded
/// to the point farthest from its centroid; inertia is checked to be
/// non-increasing across iterations.
ClusterAssignment kmeans(const Matrix& points, const KMeansOptions& opts,
                         const std::vector<std::string>& doc_ids = {});

/// Sum of squared distances of each point to its assigned centroid.
double kmeans_inertia(const Matrix& points, const ClusterAssignment& a);

}  // namespace cm::cluster
