#include "corpusminer/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "corpusminer/chunkseq.hpp"
#include "corpusminer/embedding.hpp"
#include "corpusminer/entities.hpp"
#include "corpusminer/harvest.hpp"
#include "corpusminer/insight.hpp"
#include "corpusminer/io_util.hpp"
#include "corpusminer/kmeans.hpp"
#include "corpusminer/lda.hpp"
#include "corpusminer/phrases.hpp"
#include "corpusminer/textprep.hpp"
#include "corpusminer/tsne.hpp"
#include "corpusminer/vocab.hpp"
#include "json.hpp"

namespace cm::pipeline {

namespace {

const std::map<std::string, std::vector<std::string>>& stage_deps() {
  static const std::map<std::string, std::vector<std::string>> deps = {
      {"harvest", {}},
      {"prep", {"harvest"}},
      {"phrases", {"prep"}},
      {"vectorize", {"phrases"}},
      {"cluster", {"vectorize"}},
      {"eval", {"cluster"}},
      {"report", {"vectorize", "cluster"}},
      {"entities", {"harvest"}},
  };
  return deps;
}

/// Ordered, deterministic parallel map over [0, n).
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<std::filesystem::path> list_text_files(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir)) return files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {
      "harvest", "prep", "phrases", "vectorize",
      "cluster", "eval", "report",  "entities",
  };
  return names;
}

void StageManifest::save(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["stage"] = stage;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [k, v] : input_hashes) inputs[k] = v;
  j["inputs"] = std::move(inputs);
  j["config"] = config_hash;
  nlohmann::ordered_json outs = nlohmann::ordered_json::array();
  for (const auto& [file, bytes] : outputs) {
    outs.push_back({{"path", file}, {"bytes", bytes}});
  }
  j["outputs"] = std::move(outs);
  j["wall_ms"] = wall_ms;
  write_file(path, j.dump(2) + "\n");
}

StageManifest StageManifest::load(const std::filesystem::path& path) {
  const nlohmann::json j = nlohmann::json::parse(read_file(path));
  StageManifest m;
  m.stage = j.at("stage").get<std::string>();
  for (const auto& [k, v] : j.at("inputs").items()) {
    m.input_hashes[k] = v.get<std::string>();
  }
  m.config_hash = j.at("config").get<std::string>();
  for (const auto& o : j.at("outputs")) {
    m.outputs.emplace_back(o.at("path").get<std::string>(),
                           o.at("bytes").get<std::size_t>());
  }
  m.wall_ms = j.at("wall_ms").get<double>();
  return m;
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {}

std::filesystem::path Pipeline::manifest_path(const std::string& stage) const {
  return config_.work_dir / "manifests" / (stage + ".json");
}

void Pipeline::check_upstream(const std::string& stage) const {
  for (const auto& dep : stage_deps().at(stage)) {
    if (!std::filesystem::exists(manifest_path(dep))) {
      throw UpstreamMissing(dep);
    }
  }
}

std::map<std::string, std::string> Pipeline::collect_inputs(
    const std::string& stage) const {
  std::map<std::string, std::string> inputs;
  auto add_file = [&](const std::filesystem::path& p) {
    if (!p.empty() && std::filesystem::exists(p)) {
      inputs[p.string()] = hash_file_hex(p);
    }
  };
  const auto work = config_.work_dir;
  if (stage == "harvest") {
    if (config_.harvest_mode == "import") add_file(config_.records);
  } else if (stage == "prep") {
    for (const auto& f : list_text_files(config_.text_dir)) add_file(f);
    add_file(config_.stopwords_english);
    add_file(config_.stopwords_domain);
    add_file(config_.ly_keep);
    add_file(config_.records);
  } else if (stage == "phrases") {
    add_file(work / "corpus_clean.ndjson");
  } else if (stage == "vectorize") {
    add_file(work / "corpus_phrases.ndjson");
  } else if (stage == "cluster") {
    add_file(work / "corpus_phrases.ndjson");
    add_file(work / "embeddings" / "word2vec.bin");
    add_file(work / "embeddings" / "doc2vec.bin");
  } else if (stage == "eval") {
    add_file(work / "assignments" / (config_.algo + ".csv"));
    add_file(config_.records);
  } else if (stage == "report") {
    add_file(work / "assignments" / (config_.algo + ".csv"));
    add_file(work / "embeddings" / "doc2vec.bin");
    add_file(config_.records);
    add_file(config_.labels);
  } else if (stage == "entities") {
    for (const auto& f : list_text_files(config_.text_dir)) add_file(f);
    add_file(config_.first_names);
    add_file(config_.journal_aliases);
    add_file(config_.exclude_names);
  }
  return inputs;
}

namespace {
const std::map<std::string, std::vector<std::string>>& stage_config_sections() {
  static const std::map<std::string, std::vector<std::string>> sections = {
      {"harvest", {"paths", "harvest"}},
      {"prep", {"paths", "prep"}},
      {"phrases", {"paths", "phrases"}},
      {"vectorize", {"paths", "vectorize"}},
      {"cluster", {"paths", "vectorize", "cluster"}},
      {"eval", {"paths", "cluster", "eval"}},
      {"report", {"paths", "cluster", "report"}},
      {"entities", {"paths", "entities"}},
  };
  return sections;
}
}  // namespace

StageManifest Pipeline::run_stage(const std::string& name, bool force) {
  if (std::find(stage_names().begin(), stage_names().end(), name) ==
      stage_names().end()) {
    throw ConfigError("unknown stage: " + name);
  }
  check_upstream(name);

  StageManifest manifest;
  manifest.stage = name;
  manifest.input_hashes = collect_inputs(name);
  std::string fingerprint;
  for (const auto& section : stage_config_sections().at(name)) {
    fingerprint += config_.raw.section_fingerprint(section);
  }
  manifest.config_hash = fnv1a64_hex(fingerprint);

  const auto mpath = manifest_path(name);
  if (!force && std::filesystem::exists(mpath)) {
    StageManifest cached = StageManifest::load(mpath);
    bool fresh = cached.config_hash == manifest.config_hash &&
                 cached.input_hashes == manifest.input_hashes;
    for (const auto& [file, bytes] : cached.outputs) {
      if (!std::filesystem::exists(config_.work_dir / file)) fresh = false;
    }
    if (fresh) {
      cached.skipped = true;
      std::cerr << "stage " << name << ": inputs unchanged, skipped\n";
      return cached;
    }
  }

  const auto start = std::chrono::steady_clock::now();
  if (name == "harvest") stage_harvest(manifest);
  else if (name == "prep") stage_prep(manifest);
  else if (name == "phrases") stage_phrases(manifest);
  else if (name == "vectorize") stage_vectorize(manifest);
  else if (name == "cluster") stage_cluster(manifest);
  else if (name == "eval") stage_eval(manifest);
  else if (name == "report") stage_report(manifest);
  else if (name == "entities") stage_entities(manifest);
  const auto end = std::chrono::steady_clock::now();
  manifest.wall_ms =
      std::chrono::duration<double, std::milli>(end - start).count();

  manifest.save(mpath);
  return manifest;
}

std::vector<StageManifest> Pipeline::run_all(bool force) {
  std::vector<StageManifest> manifests;
  for (const auto& name : stage_names()) {
    std::cerr << "== stage " << name << "\n";
    manifests.push_back(run_stage(name, force));
  }
  return manifests;
}

void Pipeline::record_output(StageManifest& manifest,
                             const std::filesystem::path& file) {
  const auto rel =
      std::filesystem::relative(file, config_.work_dir).generic_string();
  manifest.outputs.emplace_back(
      rel, static_cast<std::size_t>(std::filesystem::file_size(file)));
}

// ---------------------------------------------------------------------------
// Stages

void Pipeline::stage_harvest(StageManifest& manifest) {
  if (config_.harvest_mode == "fetch") {
    harvest::HarvestQuery query;
    query.category_filter = config_.categories;
    query.from_year = config_.from_year;
    query.to_year = config_.to_year;
    query.page_size = config_.page_size;
    query.max_records = config_.max_records;
    harvest::Harvester harvester(std::make_unique<harvest::HttpFeedSource>());
    const auto records = harvester.fetch_all(query);
    harvest::store_records(records, config_.records);
  }
  if (!std::filesystem::exists(config_.records)) {
    throw std::runtime_error("record store missing: " +
                             config_.records.string() +
                             " (run in fetch mode or provide records.ndjson)");
  }
  const auto records = harvest::load_records(config_.records);
  const auto urls = config_.work_dir / "urls.txt";
  harvest::write_url_list(records, urls);
  record_output(manifest, urls);
}

void Pipeline::stage_prep(StageManifest& manifest) {
  text::StopwordConfig stopwords = text::default_stopword_config();
  if (!config_.stopwords_english.empty()) {
    text::load_stopwords(config_.stopwords_english, stopwords.english_stopwords);
  }
  if (!config_.stopwords_domain.empty()) {
    text::load_stopwords(config_.stopwords_domain, stopwords.domain_stopwords);
  }
  if (!config_.ly_keep.empty()) {
    text::load_stopwords(config_.ly_keep, stopwords.ly_keep);
  }

  const auto files = list_text_files(config_.text_dir);
  if (files.empty()) {
    throw std::runtime_error("no .txt documents in " +
                             config_.text_dir.string());
  }

  std::vector<text::TokenDoc> raw(files.size());
  std::vector<text::ReadabilityScore> readability(files.size());
  std::vector<text::LanguageCall> language(files.size());
  parallel_for(files.size(), config_.threads, [&](std::size_t i) {
    const std::string id = files[i].stem().string();
    const std::string content = read_file(files[i]);
    raw[i] = text::tokenize(content, id);
    readability[i] = text::flesch_score(content, id);
    language[i] = text::detect_english(raw[i]);
  });

  std::vector<text::TokenDoc> english_raw;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (language[i].is_english) english_raw.push_back(raw[i]);
  }
  if (english_raw.empty()) {
    throw std::runtime_error("every document was classified as non-English");
  }

  std::vector<text::TokenDoc> lemma(english_raw.size());
  parallel_for(english_raw.size(), config_.threads, [&](std::size_t i) {
    lemma[i] = text::lemmatize(english_raw[i]);
  });

  const text::FreqMap freq = text::corpus_frequencies(lemma);
  std::vector<text::TokenDoc> cleaned(lemma.size());
  parallel_for(lemma.size(), config_.threads, [&](std::size_t i) {
    cleaned[i] = text::clean(lemma[i], stopwords, freq, config_.min_count);
  });

  const auto work = config_.work_dir;
  text::save_corpus(english_raw, work / "corpus_raw.ndjson");
  text::save_corpus(lemma, work / "corpus_lemma.ndjson");
  text::save_corpus(cleaned, work / "corpus_clean.ndjson");

  {
    std::ostringstream csv;
    csv << "doc_id,flesch,words,sentences,syllables\n";
    for (const auto& r : readability) {
      csv << csv_escape(r.doc_id) << "," << format_double(r.flesch, 3) << ","
          << r.words << "," << r.sentences << "," << r.syllables << "\n";
    }
    write_file(work / "readability.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv << "doc_id,is_english,low_confidence\n";
    for (std::size_t i = 0; i < raw.size(); ++i) {
      csv << csv_escape(raw[i].doc_id) << ","
          << (language[i].is_english ? 1 : 0) << ","
          << (language[i].low_confidence ? 1 : 0) << "\n";
    }
    write_file(work / "language.csv", csv.str());
  }
  {
    const auto table = text::frequency_table(cleaned);
    std::ostringstream csv;
    csv << "token,count,percent\n";
    for (const auto& e : table) {
      csv << csv_escape(e.token) << "," << e.count << ","
          << format_double(e.percent, 4) << "\n";
    }
    write_file(work / "frequency.csv", csv.str());
  }
  for (const char* f : {"corpus_raw.ndjson", "corpus_lemma.ndjson",
                        "corpus_clean.ndjson", "readability.csv",
                        "language.csv", "frequency.csv"}) {
    record_output(manifest, work / f);
  }
}

void Pipeline::stage_phrases(StageManifest& manifest) {
  const auto work = config_.work_dir;
  auto corpus = text::load_corpus(work / "corpus_clean.ndjson");
  auto result = phrases::run_phrase_passes(std::move(corpus),
                                           config_.phrase_passes,
                                           config_.phrase_min_count,
                                           config_.phrase_threshold);
  text::save_corpus(result.corpus, work / "corpus_phrases.ndjson");
  record_output(manifest, work / "corpus_phrases.ndjson");
  for (std::size_t p = 0; p < result.models.size(); ++p) {
    const auto path =
        work / ("phrases_pass" + std::to_string(p + 1) + ".json");
    result.models[p].save(path);
    record_output(manifest, path);
  }
}

void Pipeline::stage_vectorize(StageManifest& manifest) {
  const auto work = config_.work_dir;
  const auto corpus = text::load_corpus(work / "corpus_phrases.ndjson");

  const auto vocab = vec::Vocabulary::build(corpus);
  vocab.save(work / "vocab.json");

  vec::TrainingConfig w2v;
  w2v.dim = config_.dim;
  w2v.window = config_.window;
  w2v.negatives = config_.negatives;
  w2v.epochs = config_.w2v_epochs;
  w2v.seed = config_.seed;
  w2v.workers = config_.workers;
  const auto word_model = vec::train_word2vec(corpus, w2v);
  word_model.save(work / "embeddings" / "word2vec.bin");

  vec::TrainingConfig d2v = w2v;
  d2v.epochs = config_.d2v_epochs;
  d2v.mode = config_.d2v_mode == "dm" ? vec::Doc2VecMode::dm
                                      : vec::Doc2VecMode::dbow;
  const auto doc_model = vec::train_doc2vec(corpus, d2v);
  doc_model.save(work / "embeddings" / "doc2vec.bin");

  record_output(manifest, work / "vocab.json");
  for (const char* f :
       {"embeddings/word2vec.bin", "embeddings/word2vec.bin.vocab.json",
        "embeddings/doc2vec.bin", "embeddings/doc2vec.bin.vocab.json"}) {
    record_output(manifest, work / f);
  }
}

cluster::ClusterAssignment Pipeline::run_algorithm(const std::string& algo,
                                                   int k) {
  const auto work = config_.work_dir;
  const auto corpus = text::load_corpus(work / "corpus_phrases.ndjson");
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& d : corpus) ids.push_back(d.doc_id);

  if (algo == "kmeans") {
    const auto matrix =
        vec::build_matrix(corpus, config_.max_df, vec::Weighting::count);
    Matrix dense(matrix.n_docs(), matrix.n_terms());
    for (std::size_t i = 0; i < matrix.n_docs(); ++i) {
      for (const auto& e : matrix.rows[i]) dense(i, e.col) = e.value;
    }
    cluster::KMeansOptions opts;
    opts.k = k;
    opts.seed = config_.seed;
    auto a = cluster::kmeans(dense, opts, ids);
    a.model_tag = "kmeans";
    return a;
  }
  if (algo == "lda") {
    const auto matrix =
        vec::build_matrix(corpus, config_.max_df, vec::Weighting::count);
    cluster::LdaOptions opts;
    opts.k = k;
    opts.alpha = config_.lda_alpha;
    opts.beta = config_.lda_beta;
    opts.iterations = config_.lda_iterations;
    opts.seed = config_.seed;
    const auto model = cluster::LdaModel::fit(matrix, opts);
    model.save(work / "lda_model.json");
    return model.doc_labels();
  }
  if (algo == "word2vec-kmeans") {
    const auto model =
        vec::EmbeddingModel::load(work / "embeddings" / "word2vec.bin");
    Matrix vectors(corpus.size(), model.dim);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto dv = vec::doc_vector_from_words(model, corpus[i],
                                                 vec::DocWeighting::tfidf);
      std::copy(dv.values.begin(), dv.values.end(), vectors.row(i));
    }
    l2_normalize_rows(vectors);
    cluster::KMeansOptions opts;
    opts.k = k;
    opts.seed = config_.seed;
    auto a = cluster::kmeans(vectors, opts, ids);
    a.model_tag = "word2vec-kmeans";
    return a;
  }
  if (algo == "doc2vec-kmeans") {
    const auto model =
        vec::EmbeddingModel::load(work / "embeddings" / "doc2vec.bin");
    Matrix vectors = model.doc_vectors;
    l2_normalize_rows(vectors);
    cluster::KMeansOptions opts;
    opts.k = k;
    opts.seed = config_.seed;
    auto a = cluster::kmeans(vectors, opts, model.doc_ids);
    a.model_tag = "doc2vec-kmeans";
    return a;
  }
  if (algo == "chunkseq") {
    cluster::ChunkSeqOptions opts;
    opts.chunk_size = config_.chunk_size;
    opts.chunk_model_k = config_.chunk_model_k;
    opts.final_k = k;
    opts.seed = config_.seed;
    opts.chunk_lda_iterations = config_.chunk_lda_iterations;
    return cluster::chunk_topic_sequence_cluster(corpus, opts);
  }
  throw ConfigError("unknown clustering algorithm: " + algo);
}

void Pipeline::stage_cluster(StageManifest& manifest) {
  const auto assignment = run_algorithm(config_.algo, config_.k);
  const auto path =
      config_.work_dir / "assignments" / (config_.algo + ".csv");
  assignment.save_csv(path);
  record_output(manifest, path);
  if (config_.algo == "lda") {
    record_output(manifest, config_.work_dir / "lda_model.json");
    record_output(manifest, config_.work_dir / "lda_model.json.counts");
  }
}

std::vector<int> Pipeline::reference_labels(
    const std::vector<std::string>& doc_ids) {
  const auto records = harvest::load_records(config_.records);
  std::map<std::string, std::string> category_of;
  for (const auto& r : records) {
    if (r.reference_category) category_of[r.id] = *r.reference_category;
  }
  std::vector<std::string> missing;
  std::set<std::string> codes;
  for (const auto& id : doc_ids) {
    auto it = category_of.find(id);
    if (it == category_of.end()) missing.push_back(id);
    else codes.insert(it->second);
  }
  if (!missing.empty()) {
    std::string msg = "reference labels missing for doc ids:";
    for (const auto& id : missing) msg += " " + id;
    throw std::runtime_error(msg);
  }
  std::map<std::string, int> index_of;
  for (const auto& code : codes) {
    index_of.emplace(code, static_cast<int>(index_of.size()));
  }
  std::vector<int> labels;
  labels.reserve(doc_ids.size());
  for (const auto& id : doc_ids) {
    labels.push_back(index_of.at(category_of.at(id)));
  }
  return labels;
}

void Pipeline::stage_eval(StageManifest& manifest) {
  const auto path =
      config_.work_dir / "assignments" / (config_.algo + ".csv");
  const auto assignment = cluster::ClusterAssignment::load_csv(path);
  const auto truth = reference_labels(assignment.doc_ids);
  const auto report = metrics::evaluate_all(truth, assignment.labels);
  const auto out = config_.work_dir / "eval" / (config_.algo + ".json");
  report.save_json(out);
  record_output(manifest, out);
}

void Pipeline::stage_report(StageManifest& manifest) {
  const auto work = config_.work_dir;
  auto assignment = cluster::ClusterAssignment::load_csv(
      work / "assignments" / (config_.algo + ".csv"));

  // Topic labels; seeded next to the work dir when not configured.
  std::filesystem::path labels_path = config_.labels;
  if (labels_path.empty()) labels_path = work / "labels.csv";
  if (!std::filesystem::exists(labels_path)) {
    insight::TopicLabels::write_seed_csv(labels_path, assignment.k);
  }
  const auto labels = insight::TopicLabels::load_csv(labels_path);
  for (auto& label : assignment.labels) {
    label = labels.resolve(label);
  }

  const auto model =
      vec::EmbeddingModel::load(work / "embeddings" / "doc2vec.bin");
  if (model.doc_ids != assignment.doc_ids) {
    throw std::runtime_error(
        "assignment does not match the doc2vec model's documents");
  }

  auto summaries =
      insight::representatives(model.doc_vectors, assignment, config_.top_n);

  const auto records = harvest::load_records(config_.records);
  std::map<std::string, int> year_by_doc;
  std::map<std::string, std::string> title_by_doc;
  for (const auto& r : records) {
    year_by_doc[r.id] = r.year;
    title_by_doc[r.id] = r.title;
  }
  const auto trends = insight::topic_trends(assignment, year_by_doc);
  for (auto& summary : summaries) {
    auto it = trends.find(summary.topic_id);
    if (it != trends.end()) summary.yearly_counts = it->second;
  }

  insight::TsneOptions tsne_opts;
  tsne_opts.perplexity = config_.tsne_perplexity;
  tsne_opts.iterations = config_.tsne_iterations;
  tsne_opts.seed = config_.seed;
  const auto projection =
      insight::tsne(model.doc_vectors, tsne_opts, assignment.doc_ids);

  const auto files =
      insight::emit_reports(summaries, trends, projection, assignment, labels,
                            title_by_doc, work / "report");
  for (const auto& f : files) record_output(manifest, work / "report" / f.path);
  if (labels_path == work / "labels.csv") {
    record_output(manifest, labels_path);
  }
}

void Pipeline::stage_entities(StageManifest& manifest) {
  const auto files = list_text_files(config_.text_dir);
  if (files.empty()) {
    throw std::runtime_error("no .txt documents in " +
                             config_.text_dir.string());
  }
  if (config_.first_names.empty() || config_.journal_aliases.empty()) {
    throw ConfigError(
        "entities stage needs paths.first_names and paths.journal_aliases");
  }
  const auto lexicon = entities::NameLexicon::load(config_.first_names);
  const auto aliases =
      entities::JournalAliases::load_csv(config_.journal_aliases);
  std::set<std::string> excluded;
  if (!config_.exclude_names.empty()) {
    excluded = entities::load_excluded_surnames(config_.exclude_names);
  }

  std::vector<std::string> texts(files.size());
  parallel_for(files.size(), config_.threads,
               [&](std::size_t i) { texts[i] = read_file(files[i]); });

  const auto persons = entities::count_persons(texts, lexicon, excluded);
  entities::EntityCounts journals;
  journals.kind = entities::EntityKind::journal;
  for (const auto& t : texts) {
    const auto counts = entities::count_journals(t, aliases);
    for (const auto& [name, count] : counts.counts) {
      journals.counts[name] += count;
    }
  }

  const auto authors_ranked = entities::rank_entities(
      persons, config_.author_min_occurrences, config_.author_top_n);
  const auto journals_ranked =
      entities::rank_entities(journals, config_.journal_min_occurrences,
                              std::numeric_limits<std::size_t>::max());

  const auto out_dir = config_.work_dir / "entities";
  {
    std::ostringstream csv;
    csv << "name,count\n";
    for (const auto& e : authors_ranked) {
      csv << csv_escape(e.name) << "," << e.count << "\n";
    }
    write_file(out_dir / "authors.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv << "name,count\n";
    for (const auto& e : journals_ranked) {
      csv << csv_escape(e.name) << "," << e.count << "\n";
    }
    write_file(out_dir / "journals.csv", csv.str());
  }
  record_output(manifest, out_dir / "authors.csv");
  record_output(manifest, out_dir / "journals.csv");
}

std::vector<Pipeline::ComparisonRow> Pipeline::compare_models() {
  for (const char* dep : {"vectorize"}) {
    if (!std::filesystem::exists(manifest_path(dep))) {
      throw UpstreamMissing(dep);
    }
  }
  const auto corpus =
      text::load_corpus(config_.work_dir / "corpus_phrases.ndjson");
  std::vector<std::string> ids;
  for (const auto& d : corpus) ids.push_back(d.doc_id);
  const auto truth = reference_labels(ids);

  std::vector<ComparisonRow> rows;
  for (const auto& algo : config_.compare_algos) {
    std::cerr << "compare: running " << algo << "\n";
    const auto assignment = run_algorithm(algo, config_.k);
    rows.push_back({algo, metrics::evaluate_all(truth, assignment.labels)});
  }

  // comparison.csv + comparison.md with per-column maxima bolded.
  auto value_of = [](const metrics::MetricReport& r, int c) {
    switch (c) {
      case 0: return r.rs;
      case 1: return r.ars;
      case 2: return r.mi;
      case 3: return r.nmi;
      case 4: return r.ca;
      default: return r.ps;
    }
  };
  double best[6];
  for (int c = 0; c < 6; ++c) {
    best[c] = rows.empty() ? 0.0 : value_of(rows[0].report, c);
    for (const auto& row : rows) best[c] = std::max(best[c], value_of(row.report, c));
  }
  std::ostringstream csv, md;
  csv << "algo,rs,ars,mi,nmi,ca,ps\n";
  md << "| algorithm | RS | ARS | MI | NMI | CA | PS |\n";
  md << "|---|---|---|---|---|---|---|\n";
  for (const auto& row : rows) {
    csv << row.algo;
    md << "| " << row.algo;
    for (int c = 0; c < 6; ++c) {
      const double v = value_of(row.report, c);
      csv << "," << format_double(v, 6);
      const bool is_best = v == best[c];
      md << " | " << (is_best ? "**" : "") << format_double(v, 3)
         << (is_best ? "**" : "");
    }
    csv << "\n";
    md << " |\n";
  }
  write_file(config_.work_dir / "comparison.csv", csv.str());
  write_file(config_.work_dir / "comparison.md", md.str());
  return rows;
}

}  // namespace cm::pipeline
