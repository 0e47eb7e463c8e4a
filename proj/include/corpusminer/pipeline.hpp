#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "corpusminer/assignment.hpp"
#include "corpusminer/config.hpp"
#include "corpusminer/metrics.hpp"

namespace cm::pipeline {

struct UpstreamMissing : std::runtime_error {
  explicit UpstreamMissing(const std::string& stage)
      : std::runtime_error("requires stage " + stage), required_stage(stage) {}
  std::string required_stage;
};

struct StageManifest {
  std::string stage;
  std::map<std::string, std::string> input_hashes;
  std::string config_hash;
  std::vector<std::pair<std::string, std::size_t>> outputs;  // path, bytes
  double wall_ms = 0.0;
  bool skipped = false;  // not persisted; true when served from cache

  void save(const std::filesystem::path& path) const;
  static StageManifest load(const std::filesystem::path& path);
};

const std::vector<std::string>& stage_names();

/// Sequential stage runner with content-hash caching: a stage whose input
/// hashes and config fingerprint match its stored manifest is skipped
/// unless forced.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  StageManifest run_stage(const std::string& name, bool force = false);
  std::vector<StageManifest> run_all(bool force = false);

  struct ComparisonRow {
    std::string algo;
    metrics::MetricReport report;
  };
  /// Runs every configured algorithm at the same k against the reference
  /// labels; writes comparison.csv and comparison.md (per-column maxima
  /// bolded) under the work dir.
  std::vector<ComparisonRow> compare_models();

  const PipelineConfig& config() const { return config_; }
  std::filesystem::path manifest_path(const std::string& stage) const;

 private:
  std::map<std::string, std::string> collect_inputs(
      const std::string& stage) const;
  void check_upstream(const std::string& stage) const;

  void stage_harvest(StageManifest& manifest);
  void stage_prep(StageManifest& manifest);
  void stage_phrases(StageManifest& manifest);
  void stage_vectorize(StageManifest& manifest);
  void stage_cluster(StageManifest& manifest);
  void stage_eval(StageManifest& manifest);
  void stage_report(StageManifest& manifest);
  void stage_entities(StageManifest& manifest);

  /// Shared by stage_cluster and compare_models.
  cluster::ClusterAssignment run_algorithm(const std::string& algo, int k);

  /// doc_id -> label index derived from the records' reference categories;
  /// throws listing ids without a reference category.
  std::vector<int> reference_labels(const std::vector<std::string>& doc_ids);

  void record_output(StageManifest& manifest, const std::filesystem::path& file);

  PipelineConfig config_;
};

}  // namespace cm::pipeline
