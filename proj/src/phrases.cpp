#include "corpusminer/phrases.hpp"

#include <algorithm>
#include <stdexcept>

#include "corpusminer/io_util.hpp"
#include "json.hpp"

namespace cm::phrases {

namespace {
std::string pair_key(const std::string& a, const std::string& b) {
  return a + "\t" + b;
}
}  // namespace

PhraseModel PhraseModel::fit(const std::vector<text::TokenDoc>& corpus,
                             std::size_t min_count, double threshold) {
  if (corpus.empty()) {
    throw std::invalid_argument("phrase model requires a nonempty corpus");
  }
  PhraseModel model;
  model.min_count_ = min_count;
  model.threshold_ = threshold;
  for (const auto& doc : corpus) {
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      ++model.unigram_counts_[doc.tokens[i]];
      if (i + 1 < doc.tokens.size()) {
        ++model.bigram_counts_[pair_key(doc.tokens[i], doc.tokens[i + 1])];
      }
    }
  }
  return model;
}

std::size_t PhraseModel::unigram_count(const std::string& token) const {
  auto it = unigram_counts_.find(token);
  return it == unigram_counts_.end() ? 0 : it->second;
}

std::size_t PhraseModel::bigram_count(const std::string& a,
                                      const std::string& b) const {
  auto it = bigram_counts_.find(pair_key(a, b));
  return it == bigram_counts_.end() ? 0 : it->second;
}

double PhraseModel::score(const std::string& a, const std::string& b) const {
  auto ia = unigram_counts_.find(a);
  auto ib = unigram_counts_.find(b);
  if (ia == unigram_counts_.end() || ib == unigram_counts_.end()) {
    throw std::invalid_argument("phrase score queried with unknown token: " +
                                (ia == unigram_counts_.end() ? a : b));
  }
  const double pair = static_cast<double>(bigram_count(a, b));
  const double numer =
      (pair - static_cast<double>(min_count_)) *
      static_cast<double>(unigram_counts_.size());
  const double denom =
      static_cast<double>(ia->second) * static_cast<double>(ib->second);
  return numer / denom;
}

text::TokenDoc PhraseModel::transform(const text::TokenDoc& doc) const {
  text::TokenDoc out;
  out.doc_id = doc.doc_id;
  out.stage = doc.stage;
  out.years_found = doc.years_found;
  out.tokens.reserve(doc.tokens.size());

  std::size_t i = 0;
  while (i < doc.tokens.size()) {
    if (i + 1 < doc.tokens.size()) {
      const std::string& a = doc.tokens[i];
      const std::string& b = doc.tokens[i + 1];
      if (unigram_counts_.count(a) && unigram_counts_.count(b) &&
          score(a, b) >= threshold_) {
        out.tokens.push_back(a + "_" + b);
        i += 2;
        continue;
      }
    }
    out.tokens.push_back(doc.tokens[i]);
    ++i;
  }
  return out;
}

void PhraseModel::save(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["min_count"] = min_count_;
  j["threshold"] = threshold_;
  nlohmann::ordered_json unigrams = nlohmann::ordered_json::object();
  {
    std::vector<std::pair<std::string, std::size_t>> sorted(
        unigram_counts_.begin(), unigram_counts_.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [k, v] : sorted) unigrams[k] = v;
  }
  j["unigrams"] = std::move(unigrams);
  nlohmann::ordered_json bigrams = nlohmann::ordered_json::object();
  {
    std::vector<std::pair<std::string, std::size_t>> sorted(
        bigram_counts_.begin(), bigram_counts_.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [k, v] : sorted) bigrams[k] = v;
  }
  j["bigrams"] = std::move(bigrams);
  write_file(path, j.dump(2) + "\n");
}

PhraseModel PhraseModel::load(const std::filesystem::path& path) {
  const nlohmann::json j = nlohmann::json::parse(read_file(path));
  PhraseModel model;
  model.min_count_ = j.at("min_count").get<std::size_t>();
  model.threshold_ = j.at("threshold").get<double>();
  for (const auto& [k, v] : j.at("unigrams").items()) {
    model.unigram_counts_[k] = v.get<std::size_t>();
  }
  for (const auto& [k, v] : j.at("bigrams").items()) {
    model.bigram_counts_[k] = v.get<std::size_t>();
  }
  return model;
}

PhrasePipelineResult run_phrase_passes(std::vector<text::TokenDoc> corpus,
                                       int passes, std::size_t min_count,
                                       double threshold) {
  PhrasePipelineResult result;
  for (int pass = 0; pass < passes; ++pass) {
    PhraseModel model = PhraseModel::fit(corpus, min_count, threshold);
    for (auto& doc : corpus) doc = model.transform(doc);
    result.models.push_back(std::move(model));
  }
  result.corpus = std::move(corpus);
  return result;
}

}  // namespace cm::phrases
