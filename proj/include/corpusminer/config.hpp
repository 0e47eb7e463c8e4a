#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cm::pipeline {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg,
                       std::vector<std::string> violation_list = {})
      : std::runtime_error(msg), violations(std::move(violation_list)) {}
  std::vector<std::string> violations;
};

/// Minimal TOML-style file: [section] headers, `key = value` lines,
/// strings in double quotes, integers, floats, booleans, and flat arrays.
/// `#` starts a comment.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::filesystem::path& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback = "") const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::vector<std::string> get_string_list(const std::string& section,
                                           const std::string& key) const;

  /// Canonical serialization of one section (sorted keys); feeds the
  /// stage cache hash.
  std::string section_fingerprint(const std::string& section) const;

 private:
  // section -> key -> raw value (strings unquoted; arrays joined by \x1f).
  std::map<std::string, std::map<std::string, std::string>> values_;
};

/// Typed view used by the pipeline stages.
struct PipelineConfig {
  std::filesystem::path config_dir;  // directory of the config file

  // [paths]
  std::filesystem::path records;
  std::filesystem::path text_dir;
  std::filesystem::path work_dir;
  std::filesystem::path stopwords_english;  // optional, built-ins otherwise
  std::filesystem::path stopwords_domain;
  std::filesystem::path ly_keep;
  std::filesystem::path first_names;
  std::filesystem::path journal_aliases;
  std::filesystem::path exclude_names;
  std::filesystem::path labels;  // topic label csv (seeded when absent)

  // [harvest]
  std::string harvest_mode = "import";  // "import" or "fetch"
  std::vector<std::string> categories;
  int from_year = 1997;
  int to_year = 2022;
  std::size_t page_size = 200;
  std::optional<std::size_t> max_records;

  // [prep]
  std::size_t min_count = 25;
  std::size_t threads = 1;

  // [phrases]
  int phrase_passes = 2;
  std::size_t phrase_min_count = 250;
  double phrase_threshold = 10.0;

  // [vectorize]
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t w2v_epochs = 5;
  std::size_t d2v_epochs = 40;
  std::string d2v_mode = "dbow";
  std::uint64_t seed = 1;
  double max_df = 0.75;
  std::size_t workers = 1;  // >1 is faster but not reproducible

  // [cluster]
  std::string algo = "doc2vec-kmeans";
  int k = 30;
  std::size_t lda_iterations = 1000;
  double lda_alpha = 0.0;  // <=0 -> 50/k
  double lda_beta = 0.01;
  std::size_t chunk_size = 300;
  int chunk_model_k = 50;
  std::size_t chunk_lda_iterations = 200;

  // [eval]
  std::vector<std::string> compare_algos;

  // [report]
  std::size_t top_n = 20;
  double tsne_perplexity = 30.0;
  std::size_t tsne_iterations = 1000;

  // [entities]
  std::size_t journal_min_occurrences = 500;
  std::size_t author_min_occurrences = 0;
  std::size_t author_top_n = 100;

  ConfigFile raw;  // fingerprints for stage hashing

  /// Loads and validates; collects every violation before throwing.
  static PipelineConfig load(const std::filesystem::path& path);
};

}  // namespace cm::pipeline
