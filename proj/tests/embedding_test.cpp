#include "corpusminer/embedding.hpp"

#include <cmath>
#include <filesystem>

#include "corpusminer/rng.hpp"
#include "doctest.h"
#include "support/synthetic.hpp"

using namespace cm::vec;
using cm::Matrix;
using cm::text::Stage;
using cm::text::TokenDoc;

namespace {

TokenDoc make_doc(const std::string& id, std::vector<std::string> tokens) {
  TokenDoc doc;
  doc.doc_id = id;
  doc.stage = Stage::cleaned;
  doc.tokens = std::move(tokens);
  return doc;
}

/// Sentences where (paris, france) and (london, england) co-occur and a
/// set of unrelated nouns appears in separate contexts.
std::vector<TokenDoc> city_corpus() {
  std::vector<TokenDoc> corpus;
  for (int i = 0; i < 60; ++i) {
    corpus.push_back(make_doc(
        "p" + std::to_string(i),
        {"visit", "paris", "france", "capital", "paris", "france"}));
    corpus.push_back(make_doc(
        "l" + std::to_string(i),
        {"visit", "london", "england", "capital", "london", "england"}));
    corpus.push_back(make_doc(
        "x" + std::to_string(i),
        {"tensor", "algebra", "integral", "tensor", "algebra", "integral"}));
  }
  return corpus;
}

double cosine(const EmbeddingModel& m, const std::string& a,
              const std::string& b) {
  const auto ia = m.vocab.index_of(a);
  const auto ib = m.vocab.index_of(b);
  REQUIRE(ia.has_value());
  REQUIRE(ib.has_value());
  return cm::cosine_similarity(m.word_vectors.row(*ia),
                               m.word_vectors.row(*ib), m.dim);
}

}  // namespace

TEST_CASE("word2vec brings co-occurring words together") {
  TrainingConfig cfg;
  cfg.dim = 24;
  cfg.window = 3;
  cfg.negatives = 4;
  cfg.epochs = 20;
  cfg.seed = 42;
  const EmbeddingModel model = train_word2vec(city_corpus(), cfg);
  CHECK(cosine(model, "paris", "france") > cosine(model, "paris", "tensor"));
  CHECK(cosine(model, "london", "england") > cosine(model, "london", "algebra"));
}

TEST_CASE("word2vec rejects a vocabulary smaller than negatives+1") {
  TrainingConfig cfg;
  cfg.negatives = 5;
  const std::vector<TokenDoc> corpus = {make_doc("a", {"only", "only"})};
  CHECK_THROWS_AS(train_word2vec(corpus, cfg), std::invalid_argument);
}

TEST_CASE("word2vec zero epochs returns the initialization") {
  TrainingConfig cfg;
  cfg.dim = 8;
  cfg.negatives = 2;
  cfg.epochs = 0;
  cfg.seed = 9;
  const auto corpus = city_corpus();
  const EmbeddingModel a = train_word2vec(corpus, cfg);
  const EmbeddingModel b = train_word2vec(corpus, cfg);
  CHECK(a.word_vectors.data() == b.word_vectors.data());
  const double bound = 0.5 / static_cast<double>(cfg.dim);
  for (double v : a.word_vectors.data()) {
    CHECK(std::abs(v) <= bound);
  }
}

TEST_CASE("seeded training is bitwise deterministic") {
  TrainingConfig cfg;
  cfg.dim = 16;
  cfg.negatives = 3;
  cfg.epochs = 3;
  cfg.seed = 7;
  const auto corpus = city_corpus();
  const EmbeddingModel a = train_word2vec(corpus, cfg);
  const EmbeddingModel b = train_word2vec(corpus, cfg);
  CHECK(a.word_vectors.data() == b.word_vectors.data());

  cfg.mode = Doc2VecMode::dbow;
  const EmbeddingModel da = train_doc2vec(corpus, cfg);
  const EmbeddingModel db = train_doc2vec(corpus, cfg);
  CHECK(da.doc_vectors.data() == db.doc_vectors.data());
}

TEST_CASE("multi-worker mode trains finite vectors") {
  TrainingConfig cfg;
  cfg.dim = 8;
  cfg.negatives = 2;
  cfg.epochs = 2;
  cfg.workers = 2;
  const EmbeddingModel model = train_word2vec(city_corpus(), cfg);
  CHECK(model.word_vectors.all_finite());
}

TEST_CASE("doc2vec separates disjoint vocabulary groups") {
  const auto planted = synthetic::disjoint_themes(40, 2, 30, 60, 5);
  TrainingConfig cfg;
  cfg.dim = 24;
  cfg.negatives = 5;
  cfg.epochs = 30;
  cfg.seed = 3;
  cfg.mode = Doc2VecMode::dbow;
  const EmbeddingModel model = train_doc2vec(planted.docs, cfg);

  double intra = 0.0, inter = 0.0;
  std::size_t n_intra = 0, n_inter = 0;
  for (std::size_t i = 0; i < planted.docs.size(); ++i) {
    for (std::size_t j = i + 1; j < planted.docs.size(); ++j) {
      const double c = cm::cosine_similarity(
          model.doc_vectors.row(i), model.doc_vectors.row(j), model.dim);
      if (planted.labels[i] == planted.labels[j]) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  CHECK(intra / static_cast<double>(n_intra) >
        inter / static_cast<double>(n_inter));
}

TEST_CASE("doc2vec duplicate documents converge to similar vectors") {
  std::vector<TokenDoc> corpus;
  const std::vector<std::string> words = {"risk", "model", "price",
                                          "rate", "asset", "return"};
  for (int i = 0; i < 20; ++i) {
    corpus.push_back(make_doc("dup" + std::to_string(i), words));
  }
  // Background docs so negatives have something to sample.
  for (int i = 0; i < 20; ++i) {
    corpus.push_back(make_doc(
        "bg" + std::to_string(i),
        {"tensor", "algebra", "integral", "graph", "lattice", "module"}));
  }
  TrainingConfig cfg;
  cfg.dim = 16;
  cfg.negatives = 4;
  cfg.epochs = 60;
  cfg.seed = 11;
  const EmbeddingModel model = train_doc2vec(corpus, cfg);
  const double c = cm::cosine_similarity(model.doc_vectors.row(0),
                                         model.doc_vectors.row(1), model.dim);
  CHECK(c > 0.9);
}

TEST_CASE("doc2vec zero epochs returns the initialization") {
  TrainingConfig cfg;
  cfg.dim = 8;
  cfg.negatives = 2;
  cfg.epochs = 0;
  cfg.seed = 21;
  const auto corpus = city_corpus();
  const EmbeddingModel a = train_doc2vec(corpus, cfg);
  const EmbeddingModel b = train_doc2vec(corpus, cfg);
  CHECK(a.doc_vectors.data() == b.doc_vectors.data());
}

TEST_CASE("doc2vec dm mode trains and separates groups") {
  const auto planted = synthetic::disjoint_themes(30, 2, 20, 40, 6);
  TrainingConfig cfg;
  cfg.dim = 16;
  cfg.negatives = 4;
  cfg.epochs = 25;
  cfg.seed = 13;
  cfg.mode = Doc2VecMode::dm;
  const EmbeddingModel model = train_doc2vec(planted.docs, cfg);
  CHECK(model.doc_vectors.all_finite());
  CHECK(model.word_vectors.all_finite());
}

TEST_CASE("doc_vector_from_words single and uniform cases") {
  std::vector<TokenDoc> corpus = {
      make_doc("a", {"one", "two", "three", "four", "five", "six"}),
      make_doc("b", {"one", "two", "seven", "eight", "nine", "ten"}),
  };
  TrainingConfig cfg;
  cfg.dim = 4;
  cfg.negatives = 2;
  cfg.epochs = 1;
  EmbeddingModel model = train_word2vec(corpus, cfg);

  const TokenDoc single = make_doc("s", {"three"});
  const DocVector sv = doc_vector_from_words(model, single,
                                             DocWeighting::uniform);
  const auto idx = model.vocab.index_of("three");
  for (std::size_t k = 0; k < model.dim; ++k) {
    CHECK(sv.values[k] == doctest::Approx(model.word_vectors(*idx, k)));
  }

  const TokenDoc pair = make_doc("p", {"three", "seven"});
  const DocVector pv = doc_vector_from_words(model, pair,
                                             DocWeighting::uniform);
  const auto i3 = model.vocab.index_of("three");
  const auto i7 = model.vocab.index_of("seven");
  for (std::size_t k = 0; k < model.dim; ++k) {
    const double mid =
        (model.word_vectors(*i3, k) + model.word_vectors(*i7, k)) / 2.0;
    CHECK(pv.values[k] == doctest::Approx(mid));
  }
}

TEST_CASE("doc_vector_from_words tfidf matches a hand computation") {
  // Vocabulary over 2 docs: "rare" df=1 (idf ln2), "both" df=2 (idf 0).
  std::vector<TokenDoc> corpus = {
      make_doc("a", {"rare", "both", "pad1", "pad2", "pad3", "pad4"}),
      make_doc("b", {"both", "pad1", "pad2", "pad3", "pad4", "pad5"}),
  };
  TrainingConfig cfg;
  cfg.dim = 4;
  cfg.negatives = 2;
  cfg.epochs = 0;  // vectors stay at their random initialization
  const EmbeddingModel model = train_word2vec(corpus, cfg);

  // Weights: rare -> 2 occurrences * ln2, both -> 1 * 0, pad1 -> 1 * 0.
  // The weighted mean therefore equals rare's vector exactly.
  const TokenDoc doc = make_doc("q", {"rare", "rare", "both", "pad1"});
  const DocVector dv = doc_vector_from_words(model, doc, DocWeighting::tfidf);
  const auto ir = model.vocab.index_of("rare");
  for (std::size_t k = 0; k < model.dim; ++k) {
    CHECK(dv.values[k] == doctest::Approx(model.word_vectors(*ir, k)));
  }
}

TEST_CASE("doc_vector_from_words all-out-of-vocabulary flag") {
  std::vector<TokenDoc> corpus = {
      make_doc("a", {"one", "two", "three", "four", "five", "six"}),
  };
  TrainingConfig cfg;
  cfg.dim = 4;
  cfg.negatives = 2;
  cfg.epochs = 0;
  const EmbeddingModel model = train_word2vec(corpus, cfg);
  const DocVector dv = doc_vector_from_words(model, make_doc("o", {"nope"}),
                                             DocWeighting::tfidf);
  CHECK(dv.all_out_of_vocabulary);
  for (double v : dv.values) CHECK(v == 0.0);
}

TEST_CASE("model binary round trip") {
  const auto planted = synthetic::disjoint_themes(12, 2, 10, 20, 8);
  TrainingConfig cfg;
  cfg.dim = 6;
  cfg.negatives = 3;
  cfg.epochs = 2;
  cfg.seed = 17;
  const EmbeddingModel model = train_doc2vec(planted.docs, cfg);
  const auto path = std::filesystem::temp_directory_path() / "cm_model.bin";
  model.save(path);
  const EmbeddingModel loaded = EmbeddingModel::load(path);
  CHECK(loaded.kind == ModelKind::doc2vec);
  CHECK(loaded.dim == model.dim);
  CHECK(loaded.doc_ids == model.doc_ids);
  CHECK(loaded.vocab.size() == model.vocab.size());
  REQUIRE(loaded.doc_vectors.rows() == model.doc_vectors.rows());
  for (std::size_t i = 0; i < model.doc_vectors.data().size(); ++i) {
    // Storage is 32-bit; loaded values are the float-rounded originals.
    CHECK(loaded.doc_vectors.data()[i] ==
          static_cast<double>(static_cast<float>(model.doc_vectors.data()[i])));
  }
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".vocab.json");
}

TEST_CASE("sgns gradients match central finite differences") {
  cm::Rng rng(99);
  const std::size_t dim = 8;
  const double h = 1e-5;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> input(dim), positive(dim);
    std::vector<std::vector<double>> negatives(3, std::vector<double>(dim));
    for (auto& v : input) v = rng.uniform(-1.0, 1.0);
    for (auto& v : positive) v = rng.uniform(-1.0, 1.0);
    for (auto& neg : negatives) {
      for (auto& v : neg) v = rng.uniform(-1.0, 1.0);
    }
    const SgnsGradients g = sgns_loss_and_gradients(input, positive, negatives);

    auto loss_at = [&](std::vector<double> in, std::vector<double> pos,
                       std::vector<std::vector<double>> negs) {
      return sgns_loss_and_gradients(in, pos, negs).loss;
    };
    for (std::size_t k = 0; k < dim; ++k) {
      auto in_p = input, in_m = input;
      in_p[k] += h;
      in_m[k] -= h;
      const double fd =
          (loss_at(in_p, positive, negatives) -
           loss_at(in_m, positive, negatives)) / (2.0 * h);
      CHECK(std::abs(fd - g.d_input[k]) <=
            1e-4 * std::max(1e-8, std::abs(fd) + std::abs(g.d_input[k])));
    }
  }
}
