#include "corpusminer/insight.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "corpusminer/io_util.hpp"
#include "json.hpp"

namespace cm::insight {

std::vector<TopicSummary> representatives(
    const Matrix& doc_vectors, const cluster::ClusterAssignment& assignment,
    std::size_t top_n) {
  if (doc_vectors.rows() != assignment.labels.size()) {
    throw std::invalid_argument(
        "representatives: vectors/assignment size mismatch");
  }
  const std::size_t dim = doc_vectors.cols();
  std::vector<TopicSummary> summaries(static_cast<std::size_t>(assignment.k));
  std::vector<std::vector<std::size_t>> members(summaries.size());
  for (std::size_t i = 0; i < assignment.labels.size(); ++i) {
    members[static_cast<std::size_t>(assignment.labels[i])].push_back(i);
  }

  for (std::size_t c = 0; c < summaries.size(); ++c) {
    TopicSummary& summary = summaries[c];
    summary.topic_id = static_cast<int>(c);
    summary.size = members[c].size();
    if (members[c].empty()) {
      std::cerr << "representatives: cluster " << c << " is empty\n";
      continue;
    }
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i : members[c]) {
      const double* row = doc_vectors.row(i);
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += row[j];
    }
    for (double& v : centroid) v /= static_cast<double>(members[c].size());

    std::vector<Representative> ranked;
    ranked.reserve(members[c].size());
    for (std::size_t i : members[c]) {
      ranked.push_back(
          {assignment.doc_ids[i],
           std::sqrt(squared_distance(doc_vectors.row(i), centroid.data(),
                                      dim))});
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const Representative& a, const Representative& b) {
                if (a.distance != b.distance) return a.distance < b.distance;
                return a.doc_id < b.doc_id;
              });
    if (ranked.size() > top_n) ranked.resize(top_n);
    summary.representatives = std::move(ranked);
  }
  return summaries;
}

std::map<int, std::map<int, std::size_t>> topic_trends(
    const cluster::ClusterAssignment& assignment,
    const std::map<std::string, int>& year_by_doc) {
  std::vector<std::string> missing;
  std::map<int, std::map<int, std::size_t>> trends;
  for (std::size_t i = 0; i < assignment.doc_ids.size(); ++i) {
    const auto it = year_by_doc.find(assignment.doc_ids[i]);
    if (it == year_by_doc.end()) {
      missing.push_back(assignment.doc_ids[i]);
      continue;
    }
    ++trends[assignment.labels[i]][it->second];
  }
  if (!missing.empty()) {
    std::string msg = "topic_trends: no year for doc ids:";
    for (const auto& id : missing) msg += " " + id;
    throw std::runtime_error(msg);
  }
  return trends;
}

std::string TopicLabels::label_of(int topic) const {
  auto it = labels.find(topic);
  if (it != labels.end()) return it->second;
  return "topic-" + std::to_string(topic);
}

int TopicLabels::resolve(int topic) const {
  auto it = merge_into.find(topic);
  return it == merge_into.end() ? topic : it->second;
}

TopicLabels TopicLabels::load_csv(const std::filesystem::path& path) {
  TopicLabels result;
  for (const auto& line : read_lines(path)) {
    if (line.rfind("topic_id", 0) == 0) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 2) continue;
    const int topic = std::stoi(fields[0]);
    result.labels[topic] = fields[1];
    if (fields.size() >= 3 && !fields[2].empty()) {
      result.merge_into[topic] = std::stoi(fields[2]);
    }
  }
  return result;
}

void TopicLabels::write_seed_csv(const std::filesystem::path& path, int k) {
  std::ostringstream out;
  out << "topic_id,label,merge_into\n";
  for (int t = 0; t < k; ++t) {
    out << t << ",topic-" << t << ",\n";
  }
  write_file(path, out.str());
}

namespace {

std::string svg_color(int topic, int k) {
  // Evenly spaced hues, fixed saturation/lightness.
  const int hue = k <= 0 ? 0 : (topic * 360) / std::max(k, 1);
  return "hsl(" + std::to_string(hue) + ",65%,45%)";
}

std::string trend_svg(const std::map<int, std::map<int, std::size_t>>& trends,
                      const TopicLabels& labels, int k) {
  const int cols = 5;
  const int rows = (k + cols - 1) / cols;
  const int panel_w = 180, panel_h = 120, pad = 28;
  const int width = cols * (panel_w + pad) + pad;
  const int height = rows * (panel_h + pad) + pad;

  int min_year = 0, max_year = 0;
  std::size_t max_count = 1;
  bool any = false;
  for (const auto& [topic, by_year] : trends) {
    for (const auto& [year, count] : by_year) {
      if (!any) {
        min_year = max_year = year;
        any = true;
      }
      min_year = std::min(min_year, year);
      max_year = std::max(max_year, year);
      max_count = std::max(max_count, count);
    }
  }
  if (!any) {
    min_year = 2000;
    max_year = 2001;
  }
  if (min_year == max_year) max_year = min_year + 1;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int topic = 0; topic < k; ++topic) {
    const int col = topic % cols;
    const int row = topic / cols;
    const double x0 = pad + col * (panel_w + pad);
    const double y0 = pad + row * (panel_h + pad);
    svg << "<g>\n";
    svg << "<rect x=\"" << format_double(x0, 1) << "\" y=\""
        << format_double(y0, 1) << "\" width=\"" << panel_w << "\" height=\""
        << panel_h << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    svg << "<text x=\"" << format_double(x0 + 4, 1) << "\" y=\""
        << format_double(y0 + 14, 1)
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << topic << ": ";
    // Escape the few XML-significant characters in labels.
    for (char c : labels.label_of(topic)) {
      switch (c) {
        case '&': svg << "&amp;"; break;
        case '<': svg << "&lt;"; break;
        case '>': svg << "&gt;"; break;
        default: svg << c;
      }
    }
    svg << "</text>\n";
    const auto it = trends.find(topic);
    if (it != trends.end() && !it->second.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << svg_color(topic, k)
          << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (const auto& [year, count] : it->second) {
        const double fx =
            x0 + 8 +
            (panel_w - 16) * static_cast<double>(year - min_year) /
                static_cast<double>(max_year - min_year);
        const double fy =
            y0 + panel_h - 8 -
            (panel_h - 30) * static_cast<double>(count) /
                static_cast<double>(max_count);
        if (!first) svg << " ";
        svg << format_double(fx, 1) << "," << format_double(fy, 1);
        first = false;
      }
      svg << "\"/>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string scatter_svg(const Projection2D& projection,
                        const cluster::ClusterAssignment& assignment,
                        const TopicLabels& labels, int k) {
  const int size = 640, pad = 30;
  double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
  if (projection.coordinates.rows() > 0) {
    min_x = max_x = projection.coordinates(0, 0);
    min_y = max_y = projection.coordinates(0, 1);
    for (std::size_t i = 0; i < projection.coordinates.rows(); ++i) {
      min_x = std::min(min_x, projection.coordinates(i, 0));
      max_x = std::max(max_x, projection.coordinates(i, 0));
      min_y = std::min(min_y, projection.coordinates(i, 1));
      max_y = std::max(max_y, projection.coordinates(i, 1));
    }
  }
  if (max_x - min_x < 1e-12) max_x = min_x + 1;
  if (max_y - min_y < 1e-12) max_y = min_y + 1;
  auto sx = [&](double x) {
    return pad + (size - 2 * pad) * (x - min_x) / (max_x - min_x);
  };
  auto sy = [&](double y) {
    return size - pad - (size - 2 * pad) * (y - min_y) / (max_y - min_y);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
      << "\" height=\"" << size << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < projection.coordinates.rows(); ++i) {
    const int topic = assignment.labels[i];
    svg << "<circle cx=\"" << format_double(sx(projection.coordinates(i, 0)), 2)
        << "\" cy=\"" << format_double(sy(projection.coordinates(i, 1)), 2)
        << "\" r=\"2.5\" fill=\"" << svg_color(topic, k)
        << "\" fill-opacity=\"0.65\"/>\n";
  }
  // Topic number at each cluster's projected mean.
  std::vector<double> cx(static_cast<std::size_t>(k), 0.0);
  std::vector<double> cy(static_cast<std::size_t>(k), 0.0);
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < projection.coordinates.rows(); ++i) {
    const auto t = static_cast<std::size_t>(assignment.labels[i]);
    cx[t] += projection.coordinates(i, 0);
    cy[t] += projection.coordinates(i, 1);
    ++counts[t];
  }
  for (int t = 0; t < k; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    if (counts[ut] == 0) continue;
    svg << "<text x=\""
        << format_double(sx(cx[ut] / static_cast<double>(counts[ut])), 2)
        << "\" y=\""
        << format_double(sy(cy[ut] / static_cast<double>(counts[ut])), 2)
        << "\" font-size=\"14\" font-weight=\"bold\" "
           "font-family=\"sans-serif\" text-anchor=\"middle\">"
        << t << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::vector<ReportFile> emit_reports(
    const std::vector<TopicSummary>& summaries,
    const std::map<int, std::map<int, std::size_t>>& trends,
    const Projection2D& projection,
    const cluster::ClusterAssignment& assignment, const TopicLabels& labels,
    const std::map<std::string, std::string>& title_by_doc,
    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<ReportFile> manifest;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(out_dir / name, content);
    manifest.push_back({name, content.size()});
  };

  {
    std::ostringstream csv;
    csv << "topic,year,count\n";
    for (const auto& [topic, by_year] : trends) {
      for (const auto& [year, count] : by_year) {
        csv << topic << "," << year << "," << count << "\n";
      }
    }
    emit("trends.csv", csv.str());
  }

  {
    nlohmann::ordered_json topics = nlohmann::ordered_json::array();
    for (const auto& summary : summaries) {
      nlohmann::ordered_json t;
      t["topic_id"] = summary.topic_id;
      t["label"] = labels.label_of(summary.topic_id);
      t["size"] = summary.size;
      nlohmann::ordered_json reps = nlohmann::ordered_json::array();
      for (const auto& rep : summary.representatives) {
        nlohmann::ordered_json r;
        r["doc_id"] = rep.doc_id;
        auto title = title_by_doc.find(rep.doc_id);
        r["title"] = title == title_by_doc.end() ? "" : title->second;
        r["distance"] = rep.distance;
        reps.push_back(std::move(r));
      }
      t["representatives"] = std::move(reps);
      nlohmann::ordered_json years = nlohmann::ordered_json::object();
      for (const auto& [year, count] : summary.yearly_counts) {
        years[std::to_string(year)] = count;
      }
      t["yearly_counts"] = std::move(years);
      topics.push_back(std::move(t));
    }
    emit("topics.json", topics.dump(2) + "\n");
  }

  {
    std::ostringstream csv;
    csv << "doc_id,x,y,topic\n";
    for (std::size_t i = 0; i < projection.doc_ids.size(); ++i) {
      csv << csv_escape(projection.doc_ids[i]) << ","
          << format_double(projection.coordinates(i, 0), 6) << ","
          << format_double(projection.coordinates(i, 1), 6) << ","
          << assignment.labels[i] << "\n";
    }
    emit("projection.csv", csv.str());
  }

  emit("trends.svg", trend_svg(trends, labels, assignment.k));
  emit("scatter.svg", scatter_svg(projection, assignment, labels, assignment.k));
  return manifest;
}

}  // namespace cm::insight
