#include "corpusminer/lda.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "corpusminer/io_util.hpp"
#include "corpusminer/rng.hpp"
#include "json.hpp"

namespace cm::cluster {

LdaModel LdaModel::fit(const vec::DocTermMatrix& matrix,
                       const LdaOptions& opts) {
  if (matrix.weighting != vec::Weighting::count) {
    throw std::invalid_argument("lda requires a count-mode matrix");
  }
  if (opts.k <= 0) throw std::invalid_argument("lda: k must be positive");

  LdaModel model;
  model.k_ = opts.k;
  model.alpha_ = opts.alpha > 0.0
                     ? opts.alpha
                     : 50.0 / static_cast<double>(opts.k);
  model.beta_ = opts.beta;
  model.iterations_ = opts.iterations;
  model.seed_ = opts.seed;
  model.vocab_size_ = matrix.n_terms();
  model.doc_ids_ = matrix.doc_ids;

  const std::size_t k = static_cast<std::size_t>(opts.k);
  const std::size_t V = model.vocab_size_;
  const std::size_t D = matrix.n_docs();

  // Expand token instances: (doc, word) repeated by count.
  std::vector<std::uint32_t> inst_doc, inst_word;
  for (std::size_t d = 0; d < D; ++d) {
    for (const auto& e : matrix.rows[d]) {
      const auto reps = static_cast<std::size_t>(std::llround(e.value));
      if (std::abs(e.value - static_cast<double>(reps)) > 1e-9) {
        throw std::invalid_argument("lda: non-integer cell in count matrix");
      }
      for (std::size_t r = 0; r < reps; ++r) {
        inst_doc.push_back(static_cast<std::uint32_t>(d));
        inst_word.push_back(static_cast<std::uint32_t>(e.col));
      }
    }
  }
  const std::size_t N = inst_doc.size();
  model.total_tokens_ = N;

  model.topic_word_.assign(k * V, 0);
  model.doc_topic_.assign(D * k, 0);
  model.topic_totals_.assign(k, 0);

  Rng rng(opts.seed);
  std::vector<std::uint32_t> z(N);
  for (std::size_t i = 0; i < N; ++i) {
    const std::uint32_t t = rng.uniform_u32(static_cast<std::uint32_t>(k));
    z[i] = t;
    ++model.topic_word_[t * V + inst_word[i]];
    ++model.doc_topic_[inst_doc[i] * k + t];
    ++model.topic_totals_[t];
  }

  const double v_beta = static_cast<double>(V) * model.beta_;
  std::vector<double> cumulative(k);
  for (std::size_t sweep = 0; sweep < opts.iterations; ++sweep) {
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t d = inst_doc[i];
      const std::size_t w = inst_word[i];
      const std::uint32_t old_t = z[i];

      --model.topic_word_[old_t * V + w];
      --model.doc_topic_[d * k + old_t];
      --model.topic_totals_[old_t];

      double total = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        const double p =
            (static_cast<double>(model.doc_topic_[d * k + t]) + model.alpha_) *
            (static_cast<double>(model.topic_word_[t * V + w]) + model.beta_) /
            (static_cast<double>(model.topic_totals_[t]) + v_beta);
        total += p;
        cumulative[t] = total;
      }
      const double u = rng.uniform01() * total;
      std::uint32_t new_t = static_cast<std::uint32_t>(
          std::lower_bound(cumulative.begin(), cumulative.end(), u) -
          cumulative.begin());
      if (new_t >= k) new_t = static_cast<std::uint32_t>(k - 1);

      z[i] = new_t;
      ++model.topic_word_[new_t * V + w];
      ++model.doc_topic_[d * k + new_t];
      ++model.topic_totals_[new_t];
    }
  }
  return model;
}

LdaModel LdaModel::from_counts(int k, double alpha, double beta,
                               std::vector<std::string> doc_ids,
                               std::size_t vocab_size,
                               std::vector<std::size_t> topic_word,
                               std::vector<std::size_t> doc_topic,
                               std::vector<std::size_t> topic_totals) {
  const std::size_t uk = static_cast<std::size_t>(k);
  if (topic_word.size() != uk * vocab_size ||
      doc_topic.size() != doc_ids.size() * uk || topic_totals.size() != uk) {
    throw std::invalid_argument("lda count matrices have inconsistent shapes");
  }
  LdaModel model;
  model.k_ = k;
  model.alpha_ = alpha;
  model.beta_ = beta;
  model.vocab_size_ = vocab_size;
  model.doc_ids_ = std::move(doc_ids);
  model.topic_word_ = std::move(topic_word);
  model.doc_topic_ = std::move(doc_topic);
  model.topic_totals_ = std::move(topic_totals);
  for (std::size_t t = 0; t < uk; ++t) {
    model.total_tokens_ += model.topic_totals_[t];
  }
  return model;
}

std::vector<std::size_t> LdaModel::top_words(int topic, std::size_t n) const {
  const std::size_t t = static_cast<std::size_t>(topic);
  std::vector<std::size_t> order(vocab_size_);
  for (std::size_t i = 0; i < vocab_size_; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::size_t ca = topic_word_[t * vocab_size_ + a];
    const std::size_t cb = topic_word_[t * vocab_size_ + b];
    if (ca != cb) return ca > cb;
    return a < b;
  });
  order.resize(std::min(n, order.size()));
  return order;
}

ClusterAssignment LdaModel::doc_labels() const {
  ClusterAssignment a;
  a.k = k_;
  a.model_tag = "lda";
  a.doc_ids = doc_ids_;
  a.labels.reserve(doc_ids_.size());
  const std::size_t k = static_cast<std::size_t>(k_);
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    std::size_t best = 0;
    std::size_t best_count = doc_topic_[d * k];
    for (std::size_t t = 1; t < k; ++t) {
      if (doc_topic_[d * k + t] > best_count) {
        best_count = doc_topic_[d * k + t];
        best = t;
      }
    }
    a.labels.push_back(static_cast<int>(best));
  }
  a.validate();
  return a;
}

namespace {
void write_u64_le(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}
std::uint64_t read_u64_le(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}
}  // namespace

void LdaModel::save(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["k"] = k_;
  j["alpha"] = alpha_;
  j["beta"] = beta_;
  j["iterations"] = iterations_;
  j["seed"] = seed_;
  j["vocab_size"] = vocab_size_;
  j["total_tokens"] = total_tokens_;
  j["doc_ids"] = doc_ids_;
  j["counts_file"] = path.filename().string() + ".counts";
  write_file(path, j.dump(2) + "\n");

  std::ofstream out(path.string() + ".counts", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write lda counts");
  for (auto v : topic_word_) write_u64_le(out, v);
  for (auto v : doc_topic_) write_u64_le(out, v);
  for (auto v : topic_totals_) write_u64_le(out, v);
  if (!out) throw std::runtime_error("lda counts write failed");
}

LdaModel LdaModel::load(const std::filesystem::path& path) {
  const nlohmann::json j = nlohmann::json::parse(read_file(path));
  LdaModel model;
  model.k_ = j.at("k").get<int>();
  model.alpha_ = j.at("alpha").get<double>();
  model.beta_ = j.at("beta").get<double>();
  model.iterations_ = j.at("iterations").get<std::size_t>();
  model.seed_ = j.at("seed").get<std::uint64_t>();
  model.vocab_size_ = j.at("vocab_size").get<std::size_t>();
  model.total_tokens_ = j.at("total_tokens").get<std::size_t>();
  model.doc_ids_ = j.at("doc_ids").get<std::vector<std::string>>();

  const std::size_t k = static_cast<std::size_t>(model.k_);
  const std::size_t V = model.vocab_size_;
  const std::size_t D = model.doc_ids_.size();
  model.topic_word_.resize(k * V);
  model.doc_topic_.resize(D * k);
  model.topic_totals_.resize(k);

  std::ifstream in(path.string() + ".counts", std::ios::binary);
  if (!in) throw std::runtime_error("cannot read lda counts");
  for (auto& v : model.topic_word_) v = read_u64_le(in);
  for (auto& v : model.doc_topic_) v = read_u64_le(in);
  for (auto& v : model.topic_totals_) v = read_u64_le(in);
  if (!in) throw std::runtime_error("lda counts truncated");
  return model;
}

}  // namespace cm::cluster
