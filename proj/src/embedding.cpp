#include "corpusminer/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "corpusminer/io_util.hpp"
#include "corpusminer/rng.hpp"
#include "json.hpp"

namespace cm::vec {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Cumulative table over pow(count, 0.75) for negative sampling.
class NegativeSampler {
 public:
  explicit NegativeSampler(const Vocabulary& vocab) {
    cumulative_.reserve(vocab.size());
    double total = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      total += std::pow(static_cast<double>(vocab.corpus_count(i)), 0.75);
      cumulative_.push_back(total);
    }
  }

  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform01() * cumulative_.back();
    const auto it =
        std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

void init_uniform(Matrix& m, Rng& rng, double half_range) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double* row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      row[j] = rng.uniform(-half_range, half_range);
    }
  }
}

/// One SGNS update against output matrix `syn1`: positive target plus
/// sampled negatives. Accumulates the input-side gradient into `neu1e`
/// without touching `input` (the caller applies it).
void sgns_step(const double* input, std::size_t dim, std::size_t target,
               Matrix& syn1, const NegativeSampler& sampler, Rng& rng,
               std::size_t negatives, double alpha, double* neu1e) {
  std::fill(neu1e, neu1e + dim, 0.0);
  for (std::size_t d = 0; d <= negatives; ++d) {
    std::size_t out;
    double label;
    if (d == 0) {
      out = target;
      label = 1.0;
    } else {
      out = sampler.sample(rng);
      if (out == target) continue;
      label = 0.0;
    }
    double* u = syn1.row(out);
    const double f = dot(input, u, dim);
    const double g = (label - sigmoid(f)) * alpha;
    for (std::size_t k = 0; k < dim; ++k) neu1e[k] += g * u[k];
    for (std::size_t k = 0; k < dim; ++k) u[k] += g * input[k];
  }
}

struct IndexedCorpus {
  std::vector<std::vector<std::size_t>> docs;
  std::size_t total_tokens = 0;
};

IndexedCorpus index_corpus(const std::vector<text::TokenDoc>& corpus,
                           const Vocabulary& vocab) {
  IndexedCorpus indexed;
  indexed.docs.reserve(corpus.size());
  for (const auto& doc : corpus) {
    std::vector<std::size_t> ids;
    ids.reserve(doc.tokens.size());
    for (const auto& tok : doc.tokens) {
      if (auto idx = vocab.index_of(tok)) ids.push_back(*idx);
    }
    indexed.total_tokens += ids.size();
    indexed.docs.push_back(std::move(ids));
  }
  return indexed;
}

void validate_config(const TrainingConfig& cfg, std::size_t vocab_size,
                     std::size_t n_docs) {
  if (n_docs == 0) throw std::invalid_argument("training corpus is empty");
  if (cfg.dim < 2) throw std::invalid_argument("embedding dim must be >= 2");
  if (vocab_size < cfg.negatives + 1) {
    throw std::invalid_argument(
        "vocabulary too small for negative sampling: need at least " +
        std::to_string(cfg.negatives + 1) + " tokens, have " +
        std::to_string(vocab_size));
  }
}

class LearningRate {
 public:
  LearningRate(const TrainingConfig& cfg, std::size_t total_positions)
      : alpha0_(cfg.alpha),
        min_alpha_(cfg.min_alpha),
        total_(static_cast<double>(total_positions) + 1.0) {}

  double at(std::size_t processed) const {
    const double a =
        alpha0_ * (1.0 - static_cast<double>(processed) / total_);
    return std::max(a, min_alpha_);
  }

 private:
  double alpha0_;
  double min_alpha_;
  double total_;
};

// Shared by the three training modes: runs `body(doc_index, rng)` over a
// range of documents for every epoch.
template <typename Body>
void train_range(const IndexedCorpus& corpus, std::size_t begin,
                 std::size_t end, std::size_t epochs, Rng rng, Body body) {
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t d = begin; d < end; ++d) body(d, rng);
  }
}

template <typename Body>
void run_workers(const IndexedCorpus& corpus, const TrainingConfig& cfg,
                 Body body) {
  const std::size_t n = corpus.docs.size();
  if (cfg.workers <= 1) {
    train_range(corpus, 0, n, cfg.epochs, Rng(cfg.seed + 1), body);
    return;
  }
  const std::size_t workers = std::min(cfg.workers, n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t per = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * per;
    const std::size_t end = std::min(begin + per, n);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end, w] {
      train_range(corpus, begin, end, cfg.epochs, Rng(cfg.seed + 1 + w), body);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

EmbeddingModel train_word2vec(const std::vector<text::TokenDoc>& corpus,
                              const TrainingConfig& cfg) {
  EmbeddingModel model;
  model.kind = ModelKind::word2vec;
  model.dim = cfg.dim;
  model.config = cfg;
  model.vocab = Vocabulary::build(corpus);
  validate_config(cfg, model.vocab.size(), corpus.size());

  const IndexedCorpus indexed = index_corpus(corpus, model.vocab);
  Rng init_rng(cfg.seed);
  model.word_vectors = Matrix(model.vocab.size(), cfg.dim);
  init_uniform(model.word_vectors, init_rng, 0.5 / static_cast<double>(cfg.dim));
  Matrix syn1(model.vocab.size(), cfg.dim);

  if (cfg.epochs == 0) return model;

  const NegativeSampler sampler(model.vocab);
  const LearningRate lr(cfg, cfg.epochs * indexed.total_tokens);
  std::atomic<std::size_t> processed{0};

  run_workers(indexed, cfg, [&](std::size_t d, Rng& rng) {
    const auto& ids = indexed.docs[d];
    std::vector<double> neu1e(cfg.dim);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const double alpha =
          lr.at(processed.fetch_add(1, std::memory_order_relaxed));
      const std::size_t shrink = rng.uniform_u32(
          static_cast<std::uint32_t>(cfg.window));
      const std::size_t win = cfg.window - shrink;
      const std::size_t lo = i >= win ? i - win : 0;
      const std::size_t hi = std::min(i + win, ids.size() - 1) + 1;
      double* center = model.word_vectors.row(ids[i]);
      for (std::size_t j = lo; j < hi; ++j) {
        if (j == i) continue;
        sgns_step(center, cfg.dim, ids[j], syn1, sampler, rng, cfg.negatives,
                  alpha, neu1e.data());
        for (std::size_t k = 0; k < cfg.dim; ++k) center[k] += neu1e[k];
      }
    }
  });
  return model;
}

EmbeddingModel train_doc2vec(const std::vector<text::TokenDoc>& corpus,
                             const TrainingConfig& cfg) {
  EmbeddingModel model;
  model.kind = ModelKind::doc2vec;
  model.dim = cfg.dim;
  model.config = cfg;
  model.vocab = Vocabulary::build(corpus);
  validate_config(cfg, model.vocab.size(), corpus.size());
  for (const auto& doc : corpus) model.doc_ids.push_back(doc.doc_id);

  const IndexedCorpus indexed = index_corpus(corpus, model.vocab);
  Rng init_rng(cfg.seed);
  model.doc_vectors = Matrix(corpus.size(), cfg.dim);
  init_uniform(model.doc_vectors, init_rng, 0.5 / static_cast<double>(cfg.dim));
  Matrix syn0(model.vocab.size(), cfg.dim);  // word input vectors (dm only)
  if (cfg.mode == Doc2VecMode::dm) {
    init_uniform(syn0, init_rng, 0.5 / static_cast<double>(cfg.dim));
  }
  Matrix syn1(model.vocab.size(), cfg.dim);

  if (cfg.epochs == 0) {
    model.word_vectors =
        cfg.mode == Doc2VecMode::dm ? std::move(syn0) : std::move(syn1);
    return model;
  }

  const NegativeSampler sampler(model.vocab);
  const LearningRate lr(cfg, cfg.epochs * indexed.total_tokens);
  std::atomic<std::size_t> processed{0};

  if (cfg.mode == Doc2VecMode::dbow) {
    run_workers(indexed, cfg, [&](std::size_t d, Rng& rng) {
      const auto& ids = indexed.docs[d];
      std::vector<double> neu1e(cfg.dim);
      double* dv = model.doc_vectors.row(d);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const double alpha =
            lr.at(processed.fetch_add(1, std::memory_order_relaxed));
        sgns_step(dv, cfg.dim, ids[i], syn1, sampler, rng, cfg.negatives,
                  alpha, neu1e.data());
        for (std::size_t k = 0; k < cfg.dim; ++k) dv[k] += neu1e[k];
      }
    });
    model.word_vectors = std::move(syn1);
    return model;
  }

  // Distributed-memory mode: mean of doc vector and context word vectors
  // predicts the center token; the input-side gradient is split equally.
  run_workers(indexed, cfg, [&](std::size_t d, Rng& rng) {
    const auto& ids = indexed.docs[d];
    std::vector<double> h(cfg.dim), neu1e(cfg.dim);
    double* dv = model.doc_vectors.row(d);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const double alpha =
          lr.at(processed.fetch_add(1, std::memory_order_relaxed));
      const std::size_t shrink = rng.uniform_u32(
          static_cast<std::uint32_t>(cfg.window));
      const std::size_t win = cfg.window - shrink;
      const std::size_t lo = i >= win ? i - win : 0;
      const std::size_t hi = std::min(i + win, ids.size() - 1) + 1;

      std::fill(h.begin(), h.end(), 0.0);
      std::size_t contributors = 1;
      for (std::size_t k = 0; k < cfg.dim; ++k) h[k] += dv[k];
      for (std::size_t j = lo; j < hi; ++j) {
        if (j == i) continue;
        const double* wv = syn0.row(ids[j]);
        for (std::size_t k = 0; k < cfg.dim; ++k) h[k] += wv[k];
        ++contributors;
      }
      const double inv = 1.0 / static_cast<double>(contributors);
      for (std::size_t k = 0; k < cfg.dim; ++k) h[k] *= inv;

      sgns_step(h.data(), cfg.dim, ids[i], syn1, sampler, rng, cfg.negatives,
                alpha, neu1e.data());
      for (std::size_t k = 0; k < cfg.dim; ++k) neu1e[k] *= inv;
      for (std::size_t k = 0; k < cfg.dim; ++k) dv[k] += neu1e[k];
      for (std::size_t j = lo; j < hi; ++j) {
        if (j == i) continue;
        double* wv = syn0.row(ids[j]);
        for (std::size_t k = 0; k < cfg.dim; ++k) wv[k] += neu1e[k];
      }
    }
  });
  model.word_vectors = std::move(syn0);
  return model;
}

DocVector doc_vector_from_words(const EmbeddingModel& model,
                                const text::TokenDoc& doc,
                                DocWeighting weighting) {
  DocVector result;
  result.values.assign(model.dim, 0.0);

  std::unordered_map<std::size_t, double> tf;
  for (const auto& tok : doc.tokens) {
    if (auto idx = model.vocab.index_of(tok)) tf[*idx] += 1.0;
  }
  if (tf.empty()) {
    result.all_out_of_vocabulary = true;
    return result;
  }

  auto accumulate = [&](auto weight_of) {
    double total = 0.0;
    for (const auto& [idx, count] : tf) {
      const double w = weight_of(idx, count);
      const double* v = model.word_vectors.row(idx);
      for (std::size_t k = 0; k < model.dim; ++k) result.values[k] += w * v[k];
      total += w;
    }
    return total;
  };

  double total = 0.0;
  if (weighting == DocWeighting::tfidf) {
    total = accumulate([&](std::size_t idx, double count) {
      return count * model.vocab.idf(idx);
    });
    if (total == 0.0) {
      // Every token appears in every document; fall back to uniform.
      std::fill(result.values.begin(), result.values.end(), 0.0);
      total = accumulate([](std::size_t, double count) { return count; });
    }
  } else {
    total = accumulate([](std::size_t, double count) { return count; });
  }
  for (double& v : result.values) v /= total;
  return result;
}

SgnsGradients sgns_loss_and_gradients(
    const std::vector<double>& input, const std::vector<double>& positive,
    const std::vector<std::vector<double>>& negatives) {
  const std::size_t dim = input.size();
  SgnsGradients g;
  g.d_input.assign(dim, 0.0);
  g.d_positive.assign(dim, 0.0);

  const double fp = dot(input.data(), positive.data(), dim);
  const double sp = sigmoid(fp);
  g.loss = -std::log(std::max(sp, 1e-300));
  for (std::size_t k = 0; k < dim; ++k) {
    g.d_input[k] += (sp - 1.0) * positive[k];
    g.d_positive[k] = (sp - 1.0) * input[k];
  }
  for (const auto& neg : negatives) {
    const double fn = dot(input.data(), neg.data(), dim);
    const double sn = sigmoid(fn);
    g.loss += -std::log(std::max(1.0 - sn, 1e-300));
    std::vector<double> dn(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      g.d_input[k] += sn * neg[k];
      dn[k] = sn * input[k];
    }
    g.d_negatives.push_back(std::move(dn));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {
constexpr char kMagic[4] = {'C', 'M', 'E', 'B'};

void write_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_matrix_f32(std::ofstream& out, const Matrix& m) {
  for (double v : m.data()) {
    const float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    write_u32(out, bits);
  }
}

void read_matrix_f32(std::ifstream& in, Matrix& m) {
  for (double& v : m.data()) {
    const std::uint32_t bits = read_u32(in);
    float f;
    std::memcpy(&f, &bits, 4);
    v = static_cast<double>(f);
  }
}
}  // namespace

void EmbeddingModel::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model: " + path.string());
  out.write(kMagic, 4);
  write_u32(out, 1);  // version
  write_u32(out, kind == ModelKind::word2vec ? 0 : 1);
  write_u32(out, static_cast<std::uint32_t>(dim));
  write_u32(out, static_cast<std::uint32_t>(vocab.size()));
  write_u32(out, static_cast<std::uint32_t>(doc_ids.size()));
  write_matrix_f32(out, word_vectors);
  if (kind == ModelKind::doc2vec) write_matrix_f32(out, doc_vectors);
  if (!out) throw std::runtime_error("model write failed: " + path.string());

  nlohmann::ordered_json sidecar;
  sidecar["kind"] = kind == ModelKind::word2vec ? "word2vec" : "doc2vec";
  sidecar["dim"] = dim;
  sidecar["doc_ids"] = doc_ids;
  sidecar["config"] = {
      {"window", config.window},     {"negatives", config.negatives},
      {"epochs", config.epochs},     {"alpha", config.alpha},
      {"min_alpha", config.min_alpha}, {"seed", config.seed},
      {"mode", config.mode == Doc2VecMode::dbow ? "dbow" : "dm"},
  };
  sidecar["vocab"] = {
      {"total_docs", vocab.total_docs()},
      {"tokens", vocab.tokens()},
  };
  nlohmann::ordered_json counts = nlohmann::ordered_json::array();
  nlohmann::ordered_json dfs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    counts.push_back(vocab.corpus_count(i));
    dfs.push_back(vocab.doc_freq(i));
  }
  sidecar["vocab"]["counts"] = std::move(counts);
  sidecar["vocab"]["doc_freq"] = std::move(dfs);
  write_file(path.string() + ".vocab.json", sidecar.dump(2) + "\n");
}

EmbeddingModel EmbeddingModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read model: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("not an embedding model file: " + path.string());
  }
  const std::uint32_t version = read_u32(in);
  if (version != 1) {
    throw std::runtime_error("unsupported model version in " + path.string());
  }
  EmbeddingModel model;
  model.kind = read_u32(in) == 0 ? ModelKind::word2vec : ModelKind::doc2vec;
  model.dim = read_u32(in);
  const std::uint32_t vocab_size = read_u32(in);
  const std::uint32_t n_docs = read_u32(in);
  model.word_vectors = Matrix(vocab_size, model.dim);
  read_matrix_f32(in, model.word_vectors);
  if (model.kind == ModelKind::doc2vec) {
    model.doc_vectors = Matrix(n_docs, model.dim);
    read_matrix_f32(in, model.doc_vectors);
  }
  if (!in) throw std::runtime_error("model file truncated: " + path.string());

  const nlohmann::json sidecar =
      nlohmann::json::parse(read_file(path.string() + ".vocab.json"));
  model.doc_ids = sidecar.at("doc_ids").get<std::vector<std::string>>();
  const auto& v = sidecar.at("vocab");
  model.vocab = Vocabulary::from_parts(
      v.at("tokens").get<std::vector<std::string>>(),
      v.at("counts").get<std::vector<std::size_t>>(),
      v.at("doc_freq").get<std::vector<std::size_t>>(),
      v.at("total_docs").get<std::size_t>());
  return model;
}

}  // namespace cm::vec
