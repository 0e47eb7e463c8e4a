// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs offline; the end-to-end criteria drive the real CLI binary
// on the generated sample corpus.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpusminer/chunkseq.hpp"
#include "corpusminer/embedding.hpp"
#include "corpusminer/insight.hpp"
#include "corpusminer/io_util.hpp"
#include "corpusminer/kmeans.hpp"
#include "corpusminer/lda.hpp"
#include "corpusminer/metrics.hpp"
#include "corpusminer/phrases.hpp"
#include "corpusminer/records.hpp"
#include "corpusminer/rng.hpp"
#include "corpusminer/sample.hpp"
#include "corpusminer/textprep.hpp"
#include "corpusminer/vocab.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

struct Criterion {
  std::string name;
  std::function<void()> body;
  double time_budget_s = 0.0;  // 0 = no stated budget
};

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure(what);
}

void require_close(double actual, double expected, double tol,
                   const std::string& what) {
  if (std::abs(actual - expected) > tol) {
    std::ostringstream msg;
    msg << what << ": got " << actual << ", expected " << expected
        << " (tol " << tol << ")";
    throw CheckFailure(msg.str());
  }
}

// ---------------------------------------------------------------------------

void criterion_metric_oracles() {
  cm::Rng rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.uniform_u32(11);        // n <= 12
    const int kt = 1 + static_cast<int>(rng.uniform_u32(4));  // k <= 4
    const int kp = 1 + static_cast<int>(rng.uniform_u32(4));
    const auto a = synthetic::random_labels(n, kt, 40000 + trial);
    const auto b = synthetic::random_labels(n, kp, 50000 + trial);

    require_close(cm::metrics::rand_score(a, b),
                  oracle::rand_score_pairs(a, b), 1e-9, "RS");
    require_close(cm::metrics::adjusted_rand_score(a, b),
                  oracle::adjusted_rand_pairs(a, b), 1e-9, "ARS");
    require_close(cm::metrics::mutual_info(a, b),
                  oracle::mutual_info_maps(a, b), 1e-9, "MI");
    require_close(cm::metrics::normalized_mutual_info(a, b),
                  oracle::nmi_maps(a, b), 1e-9, "NMI");
    require_close(cm::metrics::cluster_accuracy(a, b),
                  oracle::cluster_accuracy_permutations(a, b), 1e-9, "CA");
    require_close(cm::metrics::purity_score(a, b), oracle::purity_maps(a, b),
                  1e-9, "PS");
  }
}

void criterion_hungarian() {
  cm::Rng rng(202);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 6 + rng.uniform_u32(35);
    const int kt = 1 + static_cast<int>(rng.uniform_u32(6));  // k <= 6
    const int kp = 1 + static_cast<int>(rng.uniform_u32(6));
    const auto a = synthetic::random_labels(n, kt, 60000 + trial);
    const auto b = synthetic::random_labels(n, kp, 70000 + trial);
    const double fast = cm::metrics::cluster_accuracy(a, b);
    const double brute = oracle::cluster_accuracy_permutations(a, b);
    require_close(fast, brute, 1e-12, "hungarian vs permutation search");
  }
}

void criterion_ars_chance_level() {
  double sum = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = synthetic::random_labels(200, 5, 80000 + trial);
    const auto b = synthetic::random_labels(200, 5, 90000 + trial);
    sum += cm::metrics::adjusted_rand_score(a, b);
  }
  const double mean = sum / 100.0;
  require(mean > -0.05 && mean < 0.05,
          "mean ARS of random labelings = " + std::to_string(mean));
}

void criterion_gradient_check() {
  cm::Rng rng(303);
  const std::size_t dim = 10;
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> input(dim), positive(dim);
    std::vector<std::vector<double>> negatives(5, std::vector<double>(dim));
    for (auto& v : input) v = rng.uniform(-1.5, 1.5);
    for (auto& v : positive) v = rng.uniform(-1.5, 1.5);
    for (auto& neg : negatives) {
      for (auto& v : neg) v = rng.uniform(-1.5, 1.5);
    }
    const auto g = cm::vec::sgns_loss_and_gradients(input, positive, negatives);

    auto check_component = [&](std::vector<double>& target, std::size_t k,
                               double analytic, const char* what) {
      const double saved = target[k];
      target[k] = saved + h;
      const double up =
          cm::vec::sgns_loss_and_gradients(input, positive, negatives).loss;
      target[k] = saved - h;
      const double down =
          cm::vec::sgns_loss_and_gradients(input, positive, negatives).loss;
      target[k] = saved;
      const double fd = (up - down) / (2.0 * h);
      const double rel =
          std::abs(fd - analytic) /
          std::max(1e-8, std::abs(fd) + std::abs(analytic));
      require(rel <= 1e-4, std::string(what) + " gradient relative error " +
                               std::to_string(rel));
    };

    for (std::size_t k = 0; k < dim; ++k) {
      check_component(input, k, g.d_input[k], "input");
      check_component(positive, k, g.d_positive[k], "positive");
      check_component(negatives[2], k, g.d_negatives[2][k], "negative");
    }
  }
}

void criterion_planted_recovery() {
  const auto planted = synthetic::disjoint_themes(1000, 5, 40, 100, 404);

  // Doc2Vec + K-means route.
  cm::vec::TrainingConfig d2v;
  d2v.dim = 48;
  d2v.window = 5;
  d2v.negatives = 5;
  d2v.epochs = 30;
  d2v.seed = 9;
  const auto model = cm::vec::train_doc2vec(planted.docs, d2v);
  cm::Matrix vectors = model.doc_vectors;
  cm::l2_normalize_rows(vectors);
  cm::cluster::KMeansOptions km;
  km.k = 5;
  km.seed = 9;
  const auto assignment = cm::cluster::kmeans(vectors, km);
  const double ca =
      cm::metrics::cluster_accuracy(planted.labels, assignment.labels);
  require(ca >= 0.9, "doc2vec+kmeans CA = " + std::to_string(ca));

  // LDA route.
  const auto matrix =
      cm::vec::build_matrix(planted.docs, 1.0, cm::vec::Weighting::count);
  cm::cluster::LdaOptions lda;
  lda.k = 5;
  lda.iterations = 300;
  lda.seed = 9;
  const auto lda_labels = cm::cluster::LdaModel::fit(matrix, lda).doc_labels();
  const double nmi =
      cm::metrics::normalized_mutual_info(planted.labels, lda_labels.labels);
  require(nmi >= 0.8, "lda NMI = " + std::to_string(nmi));
}

void criterion_phrase_mining() {
  // Exact score formula checks first.
  using cm::phrases::PhraseModel;
  using cm::text::Stage;
  using cm::text::TokenDoc;
  auto make_doc = [](std::vector<std::string> tokens) {
    TokenDoc doc;
    doc.stage = Stage::cleaned;
    doc.tokens = std::move(tokens);
    return doc;
  };
  {
    // count(ab)=8, count(a)=count(b)=10, min=5, vocab=100 -> 3.0
    std::vector<TokenDoc> corpus;
    for (int i = 0; i < 8; ++i) corpus.push_back(make_doc({"a", "b"}));
    corpus.push_back(make_doc({"a", "a"}));
    corpus.push_back(make_doc({"b", "b"}));
    TokenDoc filler;
    filler.stage = Stage::cleaned;
    for (int i = 0; i < 98; ++i) {
      filler.tokens.push_back("f" + std::to_string(i));
    }
    corpus.push_back(filler);
    const PhraseModel model = PhraseModel::fit(corpus, 5, 10.0);
    require_close(model.score("a", "b"), 3.0, 0.0, "score example 1");
  }
  {
    // count(ab)=12, count(a)=count(b)=12, min=5, vocab=500 -> 3500/144
    std::vector<TokenDoc> corpus;
    for (int i = 0; i < 12; ++i) corpus.push_back(make_doc({"a", "b"}));
    TokenDoc filler;
    filler.stage = Stage::cleaned;
    for (int i = 0; i < 498; ++i) {
      filler.tokens.push_back("f" + std::to_string(i));
    }
    corpus.push_back(filler);
    const PhraseModel model = PhraseModel::fit(corpus, 5, 10.0);
    require_close(model.score("a", "b"), 3500.0 / 144.0, 0.0,
                  "score example 2");
    require(model.score("a", "b") > 10.0, "example 2 exceeds threshold 10");
  }

  // Planted bigram above threshold merges at every occurrence.
  std::vector<TokenDoc> corpus;
  std::size_t planted_occurrences = 0;
  std::size_t filler_serial = 0;
  for (int d = 0; d < 80; ++d) {
    TokenDoc doc;
    doc.stage = Stage::cleaned;
    for (int s = 0; s < 25; ++s) {
      if (s % 25 == 12) {
        doc.tokens.push_back("alpha");
        doc.tokens.push_back("beta");
        ++planted_occurrences;
      } else {
        // Fresh filler types keep the vocabulary large.
        doc.tokens.push_back("f" + std::to_string(filler_serial++));
      }
    }
    corpus.push_back(std::move(doc));
  }
  const PhraseModel model = PhraseModel::fit(corpus, 30, 10.0);
  require(model.score("alpha", "beta") > 10.0,
          "planted pair scores above threshold");
  std::size_t merged = 0;
  for (const auto& doc : corpus) {
    const TokenDoc out = model.transform(doc);
    std::size_t mass = 0;
    for (const auto& tok : out.tokens) {
      mass += 1 + static_cast<std::size_t>(
                      std::count(tok.begin(), tok.end(), '_'));
      if (tok == "alpha_beta") ++merged;
      require(tok != "alpha" && tok != "beta",
              "planted pair member left unmerged");
    }
    require(mass == doc.tokens.size(), "token mass conserved");
  }
  require(merged == planted_occurrences,
          "every planted occurrence merged (" + std::to_string(merged) + "/" +
              std::to_string(planted_occurrences) + ")");
}

void criterion_readability() {
  using cm::text::flesch_score;
  const auto cat = flesch_score("The cat sat on the mat.");
  require(cat.words == 6 && cat.sentences == 1 && cat.syllables == 6,
          "cat-sentence counts");
  require_close(cat.flesch, 116.145, 0.01, "cat-sentence flesch");

  const auto two =
      flesch_score("Simple markets move fast. Traders watch prices closely.");
  require(two.words == 8 && two.sentences == 2 && two.syllables == 14,
          "two-sentence counts");
  require_close(two.flesch, 54.725, 0.01, "two-sentence flesch");

  const auto empty = flesch_score("");
  require(empty.words == 0, "empty text word count");
  require_close(empty.flesch, 206.835, 0.0, "empty-text convention");
}

void criterion_chunking() {
  using cm::cluster::split_chunks;
  cm::Rng rng(606);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t len = rng.uniform_u32(1200);
    cm::text::TokenDoc doc;
    doc.stage = cm::text::Stage::cleaned;
    for (std::size_t i = 0; i < len; ++i) {
      doc.tokens.push_back("t" + std::to_string(i % 13));
    }
    const auto chunks = split_chunks(doc, 300);
    std::size_t total = 0;
    for (const auto& c : chunks) total += c.tokens.size();
    require(total == len, "chunk lengths sum to the document length");
    if (len <= 300) {
      require(chunks.size() == 1, "short document gives exactly one chunk");
    }
  }
}

void criterion_trend_conservation() {
  const fs::path dir = fs::temp_directory_path() / "cm_accept_trends";
  fs::remove_all(dir);
  cm::sample::generate(dir, 200, 7);
  const auto records = cm::harvest::load_records(dir / "records.ndjson");
  require(records.size() == 200, "sample corpus has 200 records");

  cm::cluster::ClusterAssignment assignment;
  assignment.k = 7;
  std::map<std::string, int> year_by_doc;
  for (std::size_t i = 0; i < records.size(); ++i) {
    assignment.doc_ids.push_back(records[i].id);
    assignment.labels.push_back(static_cast<int>(i % 7));
    year_by_doc[records[i].id] = records[i].year;
  }
  const auto trends = cm::insight::topic_trends(assignment, year_by_doc);

  std::map<int, std::size_t> cluster_sizes;
  for (int label : assignment.labels) ++cluster_sizes[label];

  cm::Matrix vectors(200, 2);
  cm::Rng rng(7);
  for (auto& v : vectors.data()) v = rng.normal();
  const auto summaries = cm::insight::representatives(vectors, assignment, 20);
  cm::insight::Projection2D proj;
  proj.doc_ids = assignment.doc_ids;
  proj.coordinates = vectors;
  cm::insight::emit_reports(summaries, trends, proj, assignment,
                            cm::insight::TopicLabels{}, {}, dir / "report");

  const std::string csv = cm::read_file(dir / "report" / "trends.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  require(line == "topic,year,count", "trends.csv header");
  std::size_t grand_total = 0;
  std::map<int, std::size_t> per_topic;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = cm::split_csv_line(line);
    require(fields.size() == 3, "trends.csv row shape");
    const std::size_t count = std::stoul(fields[2]);
    grand_total += count;
    per_topic[std::stoi(fields[0])] += count;
  }
  require(grand_total == 200, "trends grand total equals 200");
  for (const auto& [topic, size] : cluster_sizes) {
    require(per_topic[topic] == size,
            "topic " + std::to_string(topic) + " panel sums to cluster size");
  }
  fs::remove_all(dir);
}

void criterion_end_to_end_determinism() {
  const fs::path dir = fs::temp_directory_path() / "cm_accept_e2e";
  fs::remove_all(dir);
  cm::sample::generate(dir, 200, 7);

  const std::string cli = CORPUSMINER_CLI;
  const std::string cmd = "\"" + cli + "\" all --config " +
                          (dir / "pipeline.toml").string() +
                          " > /dev/null 2>&1";
  require(std::system(cmd.c_str()) == 0, "first pipeline run exits 0");

  // Snapshot every CSV/JSON data product (manifests carry wall times and
  // are metadata, not outputs).
  auto snapshot = [&] {
    std::map<std::string, std::string> hashes;
    for (const auto& entry :
         fs::recursive_directory_iterator(dir / "work")) {
      if (!entry.is_regular_file()) continue;
      const auto rel =
          fs::relative(entry.path(), dir / "work").generic_string();
      if (rel.rfind("manifests/", 0) == 0) continue;
      const auto ext = entry.path().extension();
      if (ext != ".csv" && ext != ".json" && ext != ".ndjson" &&
          ext != ".svg") {
        continue;
      }
      hashes[rel] = cm::hash_file_hex(entry.path());
    }
    return hashes;
  };
  const auto first = snapshot();
  require(!first.empty(), "pipeline produced data products");

  const std::string cmd_force = "\"" + cli + "\" all --config " +
                                (dir / "pipeline.toml").string() +
                                " --force > /dev/null 2>&1";
  require(std::system(cmd_force.c_str()) == 0, "forced rerun exits 0");
  const auto second = snapshot();

  require(first.size() == second.size(), "rerun produced the same file set");
  for (const auto& [path, hash] : first) {
    const auto it = second.find(path);
    require(it != second.end(), "missing on rerun: " + path);
    require(it->second == hash, "byte difference in " + path);
  }
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1 metric oracle equivalence (500 random pairs, 1e-9)",
       criterion_metric_oracles, 10.0},
      {"2 hungarian equals brute force (500 tables, k<=6)",
       criterion_hungarian, 30.0},
      {"3 ARS chance level on random labelings", criterion_ars_chance_level,
       5.0},
      {"4 negative-sampling gradient check (100 triples, 1e-4)",
       criterion_gradient_check, 5.0},
      {"5 planted-cluster recovery (doc2vec CA>=0.9, lda NMI>=0.8)",
       criterion_planted_recovery, 180.0},
      {"6 phrase mining: scores exact, planted bigram fully merged",
       criterion_phrase_mining},
      {"7 readability fixtures within 0.01 + empty convention",
       criterion_readability},
      {"8 chunking boundary and conservation (1000 docs)",
       criterion_chunking},
      {"9 trend conservation on the 200-doc sample",
       criterion_trend_conservation},
      {"10 end-to-end determinism of run-all (byte-identical reruns)",
       criterion_end_to_end_determinism, 600.0},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      criterion.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (error.empty() && criterion.time_budget_s > 0.0 &&
        seconds > criterion.time_budget_s) {
      error = "exceeded the " + cm::format_double(criterion.time_budget_s, 0) +
              "s budget";
    }
    if (error.empty()) {
      std::cout << "PASS criterion " << criterion.name << " ["
                << cm::format_double(seconds, 1) << "s]\n";
    } else {
      std::cout << "FAIL criterion " << criterion.name << " ["
                << cm::format_double(seconds, 1) << "s]: " << error << "\n";
      ++failures;
    }
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 10 acceptance criteria passed\n";
  return 0;
}
