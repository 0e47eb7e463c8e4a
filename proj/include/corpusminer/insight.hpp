#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "corpusminer/assignment.hpp"
#include "corpusminer/matrix.hpp"
#include "corpusminer/tsne.hpp"

namespace cm::insight {

struct Representative {
  std::string doc_id;
  double distance = 0.0;  // Euclidean distance to the cluster centroid
};

struct TopicSummary {
  int topic_id = 0;
  std::string label;
  std::vector<Representative> representatives;  // ascending distance
  std::map<int, std::size_t> yearly_counts;
  std::size_t size = 0;
};

/// Ranks each cluster's members by distance to the member mean and keeps
/// the top_n nearest. Empty clusters yield an empty list with a warning.
std::vector<TopicSummary> representatives(
    const Matrix& doc_vectors, const cluster::ClusterAssignment& assignment,
    std::size_t top_n = 20);

/// Per-topic counts by year. Throws listing every doc_id missing from
/// the year map.
std::map<int, std::map<int, std::size_t>> topic_trends(
    const cluster::ClusterAssignment& assignment,
    const std::map<std::string, int>& year_by_doc);

/// Topic labels with an optional merge redirect, loaded from a
/// `topic_id,label[,merge_into]` CSV. Missing topics default to
/// "topic-<id>".
struct TopicLabels {
  std::map<int, std::string> labels;
  std::map<int, int> merge_into;

  std::string label_of(int topic) const;
  /// Follows merge redirects (single hop).
  int resolve(int topic) const;

  static TopicLabels load_csv(const std::filesystem::path& path);
  static void write_seed_csv(const std::filesystem::path& path, int k);
};

struct ReportFile {
  std::string path;  // relative to the output directory
  std::size_t bytes = 0;
};

/// Writes trends.csv, topics.json, projection.csv and the two SVG plots
/// (per-topic trend small-multiples, labeled scatter). Returns the file
/// manifest. All outputs are byte-deterministic.
std::vector<ReportFile> emit_reports(
    const std::vector<TopicSummary>& summaries,
    const std::map<int, std::map<int, std::size_t>>& trends,
    const Projection2D& projection,
    const cluster::ClusterAssignment& assignment, const TopicLabels& labels,
    const std::map<std::string, std::string>& title_by_doc,
    const std::filesystem::path& out_dir);

}  // namespace cm::insight
