#include "corpusminer/harvest.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "corpusminer/io_util.hpp"
#include "corpusminer/text_util.hpp"
#include "corpusminer/xml.hpp"
#include "httplib.h"

namespace cm::harvest {

void HarvestQuery::validate() const {
  if (page_size == 0 || page_size > 2000) {
    throw std::invalid_argument("page_size must be in [1, 2000]");
  }
  if (from_year > to_year) {
    throw std::invalid_argument("from_year must not exceed to_year");
  }
  for (const auto& code : category_filter) {
    if (!is_valid_category_code(code)) {
      throw std::invalid_argument("invalid category code: " + code);
    }
  }
}

namespace {

/// "http://arxiv.org/abs/2005.06390v2" -> "2005.06390";
/// old-style "http://arxiv.org/abs/q-fin/0701001v1" -> "q-fin/0701001".
std::string id_from_entry_url(const std::string& url) {
  std::string id = url;
  const auto abs = id.find("/abs/");
  if (abs != std::string::npos) id = id.substr(abs + 5);
  // Strip a trailing version suffix vN.
  std::size_t i = id.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(id[i - 1]))) --i;
  if (i > 0 && i < id.size() && id[i - 1] == 'v') id = id.substr(0, i - 1);
  return id;
}

int year_from_timestamp(const std::string& iso) {
  if (iso.size() < 4) return 0;
  int year = 0;
  for (int i = 0; i < 4; ++i) {
    const char c = iso[static_cast<std::size_t>(i)];
    if (!std::isdigit(static_cast<unsigned char>(c))) return 0;
    year = year * 10 + (c - '0');
  }
  return year;
}

}  // namespace

std::vector<DocumentRecord> parse_atom_feed(const std::string& atom_xml) {
  const xml::Node feed = xml::parse(atom_xml);
  if (xml::local_name(feed.name) != "feed") {
    throw std::runtime_error("document root is not an Atom <feed>");
  }
  std::vector<DocumentRecord> records;
  std::size_t entry_index = 0;
  for (const xml::Node* entry : feed.children_named("entry")) {
    DocumentRecord r;
    const xml::Node* id_node = entry->first_child("id");
    if (id_node == nullptr || collapse_whitespace(id_node->text).empty()) {
      throw FeedParseError("missing <id>", entry_index);
    }
    r.id = id_from_entry_url(collapse_whitespace(id_node->text));

    if (const xml::Node* title = entry->first_child("title")) {
      r.title = collapse_whitespace(title->text);
    }
    if (const xml::Node* summary = entry->first_child("summary")) {
      r.abstract = collapse_whitespace(summary->text);
    }
    const xml::Node* published = entry->first_child("published");
    if (published == nullptr) {
      throw FeedParseError("missing <published>", entry_index);
    }
    r.year = year_from_timestamp(collapse_whitespace(published->text));
    if (r.year == 0) {
      throw FeedParseError("unparseable <published> timestamp", entry_index);
    }
    if (const xml::Node* updated = entry->first_child("updated")) {
      const std::string ts = collapse_whitespace(updated->text);
      if (ts.size() >= 10) r.updated = ts.substr(0, 10);
    }
    for (const xml::Node* author : entry->children_named("author")) {
      if (const xml::Node* name = author->first_child("name")) {
        r.authors.push_back(collapse_whitespace(name->text));
      }
    }
    for (const xml::Node* category : entry->children_named("category")) {
      const std::string term = category->attribute("term");
      if (!term.empty()) r.all_categories.push_back(term);
    }
    r.reference_category = assign_reference_category(r.all_categories);
    for (const xml::Node& child : entry->children) {
      if (xml::local_name(child.name) == "doi") {
        r.doi = collapse_whitespace(child.text);
      }
    }
    records.push_back(std::move(r));
    ++entry_index;
  }
  return records;
}

// ---------------------------------------------------------------------------
// Transports

HttpFeedSource::HttpFeedSource(std::string host) : host_(std::move(host)) {}

std::string HttpFeedSource::build_path(const HarvestQuery& query,
                                       std::size_t offset) {
  std::ostringstream path;
  path << "/api/query?search_query=";
  if (query.category_filter.empty()) {
    path << "cat:q-fin.*";
  } else {
    for (std::size_t i = 0; i < query.category_filter.size(); ++i) {
      if (i > 0) path << "+OR+";
      path << "cat:" << query.category_filter[i];
    }
  }
  path << "&start=" << offset << "&max_results=" << query.page_size
       << "&sortBy=submittedDate&sortOrder=ascending";
  return path.str();
}

std::string HttpFeedSource::fetch(const HarvestQuery& query,
                                  std::size_t offset) {
  httplib::Client client(host_);
  client.set_connection_timeout(30);
  client.set_read_timeout(60);
  const auto res = client.Get(build_path(query, offset));
  if (!res) {
    throw std::runtime_error("HTTP request to " + host_ + " failed: " +
                             httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw std::runtime_error("HTTP status " + std::to_string(res->status) +
                             " from " + host_);
  }
  return res->body;
}

FileFeedSource::FileFeedSource(std::vector<std::filesystem::path> pages)
    : pages_(std::move(pages)) {}

std::string FileFeedSource::fetch(const HarvestQuery& query,
                                  std::size_t offset) {
  const std::size_t page = offset / query.page_size;
  if (page >= pages_.size()) {
    return "<feed xmlns=\"http://www.w3.org/2005/Atom\"></feed>";
  }
  return read_file(pages_[page]);
}

// ---------------------------------------------------------------------------
// Harvester

void RateLimiter::wait() {
  const auto now = std::chrono::steady_clock::now();
  if (last_) {
    const auto next = *last_ + interval_;
    if (now < next) std::this_thread::sleep_until(next);
  }
  last_ = std::chrono::steady_clock::now();
}

Harvester::Harvester(std::unique_ptr<FeedSource> source,
                     std::chrono::milliseconds politeness, int max_attempts)
    : source_(std::move(source)),
      limiter_(politeness),
      max_attempts_(max_attempts) {}

std::vector<DocumentRecord> Harvester::fetch_page(const HarvestQuery& query,
                                                  std::size_t offset) {
  query.validate();
  if (offset % query.page_size != 0) {
    throw std::invalid_argument("offset must be a multiple of page_size");
  }
  std::string body;
  std::string last_error;
  int attempt = 0;
  for (; attempt < max_attempts_; ++attempt) {
    limiter_.wait();
    try {
      body = source_->fetch(query, offset);
      break;
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  if (attempt == max_attempts_) {
    throw HarvestError("feed fetch failed (" + last_error + ")", attempt);
  }
  return parse_atom_feed(body);
}

std::vector<DocumentRecord> Harvester::fetch_all(const HarvestQuery& query) {
  query.validate();
  std::vector<DocumentRecord> all;
  std::set<std::string> seen;
  for (std::size_t offset = 0;; offset += query.page_size) {
    const auto page = fetch_page(query, offset);
    if (page.empty()) break;
    for (const auto& r : page) {
      if (r.year < query.from_year || r.year > query.to_year) continue;
      if (!seen.insert(r.id).second) continue;  // latest-version dedup
      all.push_back(r);
      if (query.max_records && all.size() >= *query.max_records) return all;
    }
    if (page.size() < query.page_size) break;
  }
  return all;
}

void write_url_list(const std::vector<DocumentRecord>& records,
                    const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& r : records) {
    out << "https://arxiv.org/pdf/" << r.id << "\n";
  }
  write_file(path, out.str());
}

}  // namespace cm::harvest
