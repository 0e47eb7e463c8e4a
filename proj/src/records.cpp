#include "corpusminer/records.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "corpusminer/io_util.hpp"
#include "json.hpp"

namespace cm::harvest {

const std::vector<std::string>& qfin_categories() {
  static const std::vector<std::string> codes = {
      "q-fin.CP", "q-fin.EC", "q-fin.GN", "q-fin.MF", "q-fin.PM",
      "q-fin.PR", "q-fin.RM", "q-fin.ST", "q-fin.TR",
  };
  return codes;
}

bool is_valid_category_code(const std::string& code) {
  const auto dot = code.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= code.size()) {
    return false;
  }
  const std::string domain = code.substr(0, dot);
  const std::string sub = code.substr(dot + 1);
  for (char c : domain) {
    if (!std::islower(static_cast<unsigned char>(c)) && c != '-') return false;
  }
  if (sub.size() < 2 || sub.size() > 3) return false;
  for (char c : sub) {
    if (!std::isupper(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool is_qfin_category(const std::string& code) {
  return code.rfind("q-fin.", 0) == 0;
}

std::optional<std::string> assign_reference_category(
    const std::vector<std::string>& all_categories) {
  for (const auto& code : all_categories) {
    if (is_qfin_category(code)) return code;
  }
  return std::nullopt;
}

namespace {
int current_year() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  return tm.tm_year + 1900;
}
}  // namespace

void DocumentRecord::validate() const {
  if (id.empty()) throw std::invalid_argument("record has an empty id");
  if (year < 1991 || year > current_year()) {
    throw std::invalid_argument("record " + id + " has year out of range: " +
                                std::to_string(year));
  }
  if (reference_category) {
    if (!is_qfin_category(*reference_category)) {
      throw std::invalid_argument("record " + id +
                                  " reference category is not q-fin");
    }
    if (std::find(all_categories.begin(), all_categories.end(),
                  *reference_category) == all_categories.end()) {
      throw std::invalid_argument(
          "record " + id + " reference category missing from all_categories");
    }
  }
}

namespace {

nlohmann::ordered_json record_to_json(const DocumentRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["title"] = r.title;
  j["authors"] = r.authors;
  j["categories"] = r.all_categories;
  if (r.reference_category) j["reference_category"] = *r.reference_category;
  else j["reference_category"] = nullptr;
  j["year"] = r.year;
  j["abstract"] = r.abstract;
  if (r.doi) j["doi"] = *r.doi;
  if (r.updated) j["updated"] = *r.updated;
  return j;
}

DocumentRecord record_from_json(const nlohmann::json& j) {
  DocumentRecord r;
  r.id = j.at("id").get<std::string>();
  r.title = j.at("title").get<std::string>();
  r.authors = j.at("authors").get<std::vector<std::string>>();
  r.all_categories = j.at("categories").get<std::vector<std::string>>();
  if (j.contains("reference_category") && !j["reference_category"].is_null()) {
    r.reference_category = j["reference_category"].get<std::string>();
  }
  r.year = j.at("year").get<int>();
  r.abstract = j.at("abstract").get<std::string>();
  if (j.contains("doi")) r.doi = j["doi"].get<std::string>();
  if (j.contains("updated")) r.updated = j["updated"].get<std::string>();
  return r;
}

}  // namespace

std::size_t store_records(const std::vector<DocumentRecord>& records,
                          const std::filesystem::path& store_path) {
  if (records.empty()) return 0;

  std::map<std::string, DocumentRecord> by_id;
  if (std::filesystem::exists(store_path)) {
    for (auto& r : load_records(store_path)) {
      by_id.emplace(r.id, std::move(r));
    }
  }
  std::size_t applied = 0;
  std::map<std::string, std::size_t> batch_seen;
  for (const auto& r : records) {
    r.validate();
    auto [it, inserted] = batch_seen.emplace(r.id, 1);
    if (!inserted) {
      ++it->second;
      std::cerr << "store_records: duplicate id " << r.id
                << " in batch, keeping the last occurrence\n";
    } else {
      ++applied;
    }
    by_id[r.id] = r;  // last writer wins
  }

  std::ostringstream out;
  for (const auto& [id, r] : by_id) {
    out << record_to_json(r).dump() << "\n";
  }
  write_file(store_path, out.str());
  return applied;
}

std::vector<DocumentRecord> load_records(
    const std::filesystem::path& store_path) {
  std::ifstream in(store_path);
  if (!in) {
    throw std::runtime_error("cannot open record store: " +
                             store_path.string());
  }
  std::vector<DocumentRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw std::runtime_error("record store parse error at line " +
                               std::to_string(lineno));
    }
    records.push_back(record_from_json(j));
  }
  return records;
}

}  // namespace cm::harvest
