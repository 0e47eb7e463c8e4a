#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "corpusminer/matrix.hpp"

namespace cm::cluster {

/// Per-document integer labels in [0, k) plus model provenance.
struct ClusterAssignment {
  std::vector<std::string> doc_ids;
  std::vector<int> labels;
  int k = 0;
  std::string model_tag;
  std::optional<Matrix> centroids;  // k rows when present

  void validate() const;

  /// CSV with a `doc_id,label` header.
  void save_csv(const std::filesystem::path& path) const;
  static ClusterAssignment load_csv(const std::filesystem::path& path);
};

}  // namespace cm::cluster
