#include "corpusminer/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "corpusminer/io_util.hpp"
#include "json.hpp"

namespace cm::vec {

Vocabulary Vocabulary::build(const std::vector<text::TokenDoc>& corpus) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> stats;  // count, df
  for (const auto& doc : corpus) {
    std::set<std::string> seen;
    for (const auto& tok : doc.tokens) {
      ++stats[tok].first;
      if (seen.insert(tok).second) ++stats[tok].second;
    }
  }
  Vocabulary vocab;
  vocab.total_docs_ = corpus.size();
  vocab.tokens_.reserve(stats.size());
  for (const auto& [tok, s] : stats) {
    vocab.index_[tok] = vocab.tokens_.size();
    vocab.tokens_.push_back(tok);
    vocab.counts_.push_back(s.first);
    vocab.doc_freq_.push_back(s.second);
  }
  return vocab;
}

Vocabulary Vocabulary::from_parts(std::vector<std::string> tokens,
                                  std::vector<std::size_t> counts,
                                  std::vector<std::size_t> doc_freq,
                                  std::size_t total_docs) {
  if (tokens.size() != counts.size() || tokens.size() != doc_freq.size()) {
    throw std::invalid_argument("vocabulary parts have mismatched lengths");
  }
  Vocabulary vocab;
  vocab.tokens_ = std::move(tokens);
  vocab.counts_ = std::move(counts);
  vocab.doc_freq_ = std::move(doc_freq);
  vocab.total_docs_ = total_docs;
  for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
    vocab.index_[vocab.tokens_[i]] = i;
  }
  return vocab;
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(std::size_t index) const {
  const double df = static_cast<double>(doc_freq_[index]);
  if (df <= 0.0 || total_docs_ == 0) return 0.0;
  return std::log(static_cast<double>(total_docs_) / df);
}

void Vocabulary::save(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["total_docs"] = total_docs_;
  j["tokens"] = tokens_;
  j["counts"] = counts_;
  j["doc_freq"] = doc_freq_;
  write_file(path, j.dump(2) + "\n");
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  const nlohmann::json j = nlohmann::json::parse(read_file(path));
  Vocabulary vocab;
  vocab.total_docs_ = j.at("total_docs").get<std::size_t>();
  vocab.tokens_ = j.at("tokens").get<std::vector<std::string>>();
  vocab.counts_ = j.at("counts").get<std::vector<std::size_t>>();
  vocab.doc_freq_ = j.at("doc_freq").get<std::vector<std::size_t>>();
  for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
    vocab.index_[vocab.tokens_[i]] = i;
  }
  return vocab;
}

double DocTermMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for (const auto& e : rows[i]) s += e.value;
  return s;
}

DocTermMatrix build_matrix(const std::vector<text::TokenDoc>& corpus,
                           double max_df, Weighting weighting) {
  if (corpus.empty()) {
    throw std::invalid_argument("build_matrix requires a nonempty corpus");
  }
  const Vocabulary full = Vocabulary::build(corpus);
  const double total = static_cast<double>(full.total_docs());

  // Keep a column iff doc_freq/total_docs <= max_df (strict drop above).
  std::vector<bool> keep(full.size(), false);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (static_cast<double>(full.doc_freq(i)) / total <= max_df) {
      keep[i] = true;
      ++kept;
    }
  }
  if (kept == 0) {
    throw std::runtime_error(
        "build_matrix: no vocabulary survives the max_df filter");
  }

  DocTermMatrix matrix;
  matrix.max_df = max_df;
  matrix.weighting = weighting;
  {
    // Rebuild the vocabulary restricted to retained tokens so that the
    // matrix's doc_freq values stay usable for TF-IDF.
    std::vector<text::TokenDoc> filtered = corpus;
    for (auto& doc : filtered) {
      std::vector<std::string> toks;
      toks.reserve(doc.tokens.size());
      for (auto& t : doc.tokens) {
        auto idx = full.index_of(t);
        if (idx && keep[*idx]) toks.push_back(std::move(t));
      }
      doc.tokens = std::move(toks);
    }
    matrix.vocab = Vocabulary::build(filtered);
  }

  matrix.doc_ids.reserve(corpus.size());
  matrix.rows.reserve(corpus.size());
  for (const auto& doc : corpus) {
    matrix.doc_ids.push_back(doc.doc_id);
    std::map<std::size_t, double> counts;
    for (const auto& tok : doc.tokens) {
      auto idx = matrix.vocab.index_of(tok);
      if (idx) counts[*idx] += 1.0;
    }
    std::vector<DocTermMatrix::Entry> row;
    row.reserve(counts.size());
    for (const auto& [col, count] : counts) {
      double value = count;
      if (weighting == Weighting::tfidf) value = count * matrix.vocab.idf(col);
      row.push_back({col, value});
    }
    matrix.rows.push_back(std::move(row));
  }
  return matrix;
}

}  // namespace cm::vec
