#include "corpusminer/assignment.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "corpusminer/io_util.hpp"

namespace cm::cluster {

void ClusterAssignment::validate() const {
  if (doc_ids.size() != labels.size()) {
    throw std::logic_error("assignment: |labels| != |doc_ids|");
  }
  for (int label : labels) {
    if (label < 0 || label >= k) {
      throw std::logic_error("assignment: label out of [0, k)");
    }
  }
  if (centroids && centroids->rows() != static_cast<std::size_t>(k)) {
    throw std::logic_error("assignment: centroid rows != k");
  }
}

void ClusterAssignment::save_csv(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "doc_id,label\n";
  for (std::size_t i = 0; i < doc_ids.size(); ++i) {
    out << csv_escape(doc_ids[i]) << "," << labels[i] << "\n";
  }
  write_file(path, out.str());
}

ClusterAssignment ClusterAssignment::load_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open assignment: " + path.string());
  }
  ClusterAssignment a;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("doc_id", 0) == 0) continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() < 2) {
      throw std::runtime_error("malformed assignment line: " + line);
    }
    a.doc_ids.push_back(fields[0]);
    a.labels.push_back(std::stoi(fields[1]));
  }
  a.k = a.labels.empty()
            ? 0
            : *std::max_element(a.labels.begin(), a.labels.end()) + 1;
  return a;
}

}  // namespace cm::cluster
