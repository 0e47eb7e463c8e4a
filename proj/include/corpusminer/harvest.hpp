#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corpusminer/records.hpp"

namespace cm::harvest {

struct HarvestQuery {
  std::vector<std::string> category_filter;  // e.g. {"q-fin.PR", "q-fin.PM"}
  int from_year = 1991;
  int to_year = 2100;
  std::size_t page_size = 200;
  std::optional<std::size_t> max_records;

  void validate() const;  // page_size <= 2000, from <= to
};

struct FeedParseError : std::runtime_error {
  FeedParseError(const std::string& msg, std::size_t entry)
      : std::runtime_error("entry " + std::to_string(entry) + ": " + msg),
        entry_index(entry) {}
  std::size_t entry_index;
};

/// Parses one Atom result page. Version suffixes are stripped from ids,
/// the year comes from <published>, and the reference category is the
/// first q-fin code among the <category> terms.
std::vector<DocumentRecord> parse_atom_feed(const std::string& atom_xml);

/// Transport abstraction so tests can serve fixture files.
class FeedSource {
 public:
  virtual ~FeedSource() = default;
  /// Returns the Atom XML for one page or throws on transport failure.
  virtual std::string fetch(const HarvestQuery& query, std::size_t offset) = 0;
};

/// Live arXiv query API transport (Atom XML over HTTP GET).
class HttpFeedSource : public FeedSource {
 public:
  explicit HttpFeedSource(std::string host = "export.arxiv.org");
  std::string fetch(const HarvestQuery& query, std::size_t offset) override;
  static std::string build_path(const HarvestQuery& query, std::size_t offset);

 private:
  std::string host_;
};

/// Serves pre-recorded pages: page i covers offsets [i*page_size, ...).
/// Offsets beyond the recorded pages return an empty feed.
class FileFeedSource : public FeedSource {
 public:
  explicit FileFeedSource(std::vector<std::filesystem::path> pages);
  std::string fetch(const HarvestQuery& query, std::size_t offset) override;

 private:
  std::vector<std::filesystem::path> pages_;
};

struct HarvestError : std::runtime_error {
  HarvestError(const std::string& msg, int attempt_count)
      : std::runtime_error(msg + " after " + std::to_string(attempt_count) +
                           " attempts"),
        attempts(attempt_count) {}
  int attempts;
};

/// Enforces a minimum interval between consecutive permits.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds interval)
      : interval_(interval) {}
  void wait();
  std::chrono::milliseconds interval() const { return interval_; }

 private:
  std::chrono::milliseconds interval_;
  std::optional<std::chrono::steady_clock::time_point> last_;
};

inline constexpr std::chrono::milliseconds kPolitenessInterval{3000};

/// Single rate-limited fetch stream over a FeedSource with retries.
class Harvester {
 public:
  explicit Harvester(std::unique_ptr<FeedSource> source,
                     std::chrono::milliseconds politeness = kPolitenessInterval,
                     int max_attempts = 3);

  /// One page of records; [] signals the end of results. offset must be a
  /// multiple of query.page_size. Transport failures surface as
  /// HarvestError carrying the attempt count.
  std::vector<DocumentRecord> fetch_page(const HarvestQuery& query,
                                         std::size_t offset);

  /// Paginates to exhaustion (or max_records), keeping records within the
  /// query's year range.
  std::vector<DocumentRecord> fetch_all(const HarvestQuery& query);

 private:
  std::unique_ptr<FeedSource> source_;
  RateLimiter limiter_;
  int max_attempts_;
};

/// PDF URL list (one per record) for an external fetch step.
void write_url_list(const std::vector<DocumentRecord>& records,
                    const std::filesystem::path& path);

}  // namespace cm::harvest
