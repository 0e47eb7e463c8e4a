// corpusminer: corpus topic-trend mining pipeline CLI.
//
// Each pipeline stage is a subcommand. With --config the stage runs under
// the orchestrator (stage manifests, input-hash caching); several stages
// also run standalone from direct flags.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corpusminer/assignment.hpp"
#include "corpusminer/config.hpp"
#include "corpusminer/embedding.hpp"
#include "corpusminer/entities.hpp"
#include "corpusminer/insight.hpp"
#include "corpusminer/harvest.hpp"
#include "corpusminer/io_util.hpp"
#include "corpusminer/metrics.hpp"
#include "corpusminer/phrases.hpp"
#include "corpusminer/pipeline.hpp"
#include "corpusminer/sample.hpp"
#include "corpusminer/textprep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitUpstream = 3;
constexpr int kExitRuntime = 4;

int run_pipeline_stage(const std::string& stage, const std::string& config_path,
                       bool force) {
  auto config = cm::pipeline::PipelineConfig::load(config_path);
  cm::pipeline::Pipeline pipeline(std::move(config));
  if (stage == "all") {
    for (const auto& m : pipeline.run_all(force)) {
      std::cout << "stage " << m.stage << (m.skipped ? " (cached)" : "")
                << ": " << m.outputs.size() << " outputs, "
                << cm::format_double(m.wall_ms, 1) << " ms\n";
    }
  } else {
    const auto m = pipeline.run_stage(stage, force);
    std::cout << "stage " << m.stage << (m.skipped ? " (cached)" : "") << ": "
              << m.outputs.size() << " outputs, "
              << cm::format_double(m.wall_ms, 1) << " ms\n";
  }
  return kExitOk;
}

int standalone_harvest(const std::vector<std::string>& categories,
                       int from_year, int to_year, std::size_t page_size,
                       std::optional<std::size_t> max_records,
                       const std::string& out, const std::string& urls_out) {
  cm::harvest::HarvestQuery query;
  query.category_filter = categories;
  query.from_year = from_year;
  query.to_year = to_year;
  query.page_size = page_size;
  query.max_records = max_records;
  cm::harvest::Harvester harvester(
      std::make_unique<cm::harvest::HttpFeedSource>());
  const auto records = harvester.fetch_all(query);
  const auto written = cm::harvest::store_records(records, out);
  std::cout << "stored " << written << " records in " << out << "\n";
  if (!urls_out.empty()) {
    cm::harvest::write_url_list(records, urls_out);
  }
  return kExitOk;
}

int standalone_prep(const std::string& stage, const std::string& in_dir,
                    const std::string& out_dir, std::size_t min_count) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::runtime_error("no .txt files in " + in_dir);
  }

  std::vector<cm::text::TokenDoc> raw;
  raw.reserve(files.size());
  for (const auto& f : files) {
    raw.push_back(cm::text::tokenize(cm::read_file(f), f.stem().string()));
  }
  fs::create_directories(out_dir);
  if (stage == "raw") {
    cm::text::save_corpus(raw, fs::path(out_dir) / "corpus_raw.ndjson");
    std::cout << raw.size() << " documents -> corpus_raw.ndjson\n";
    return kExitOk;
  }
  std::vector<cm::text::TokenDoc> lemma;
  lemma.reserve(raw.size());
  for (const auto& d : raw) lemma.push_back(cm::text::lemmatize(d));
  if (stage == "lemma") {
    cm::text::save_corpus(lemma, fs::path(out_dir) / "corpus_lemma.ndjson");
    std::cout << lemma.size() << " documents -> corpus_lemma.ndjson\n";
    return kExitOk;
  }
  const auto stopwords = cm::text::default_stopword_config();
  const auto freq = cm::text::corpus_frequencies(lemma);
  std::vector<cm::text::TokenDoc> cleaned;
  cleaned.reserve(lemma.size());
  for (const auto& d : lemma) {
    cleaned.push_back(cm::text::clean(d, stopwords, freq, min_count));
  }
  cm::text::save_corpus(cleaned, fs::path(out_dir) / "corpus_clean.ndjson");
  std::cout << cleaned.size() << " documents -> corpus_clean.ndjson\n";
  return kExitOk;
}

int standalone_phrases(const std::string& in, const std::string& out_dir,
                       int passes, std::size_t min_count, double threshold) {
  namespace fs = std::filesystem;
  auto corpus = cm::text::load_corpus(in);
  auto result = cm::phrases::run_phrase_passes(std::move(corpus), passes,
                                               min_count, threshold);
  fs::create_directories(out_dir);
  cm::text::save_corpus(result.corpus,
                        fs::path(out_dir) / "corpus_phrases.ndjson");
  for (std::size_t p = 0; p < result.models.size(); ++p) {
    result.models[p].save(fs::path(out_dir) /
                          ("phrases_pass" + std::to_string(p + 1) + ".json"));
  }
  std::cout << result.corpus.size() << " documents rewritten with "
            << passes << " passes\n";
  return kExitOk;
}

int standalone_eval(const std::string& true_path, const std::string& pred_path,
                    const std::string& out) {
  const auto truth = cm::cluster::ClusterAssignment::load_csv(true_path);
  const auto pred = cm::cluster::ClusterAssignment::load_csv(pred_path);
  if (truth.doc_ids != pred.doc_ids) {
    // Align by doc id when orders differ.
    std::map<std::string, int> label_of;
    for (std::size_t i = 0; i < truth.doc_ids.size(); ++i) {
      label_of[truth.doc_ids[i]] = truth.labels[i];
    }
    std::vector<std::string> missing;
    std::vector<int> aligned;
    for (std::size_t i = 0; i < pred.doc_ids.size(); ++i) {
      auto it = label_of.find(pred.doc_ids[i]);
      if (it == label_of.end()) missing.push_back(pred.doc_ids[i]);
      else aligned.push_back(it->second);
    }
    if (!missing.empty()) {
      std::string msg = "true labels missing for doc ids:";
      for (const auto& id : missing) msg += " " + id;
      throw std::runtime_error(msg);
    }
    const auto report = cm::metrics::evaluate_all(aligned, pred.labels);
    report.save_json(out);
  } else {
    const auto report = cm::metrics::evaluate_all(truth.labels, pred.labels);
    report.save_json(out);
  }
  std::cout << "report written to " << out << "\n";
  return kExitOk;
}

int standalone_report(const std::string& assignment_path,
                      const std::string& vectors_path,
                      const std::string& records_path,
                      const std::string& labels_path,
                      const std::string& out_dir) {
  auto assignment =
      cm::cluster::ClusterAssignment::load_csv(assignment_path);
  const auto model = cm::vec::EmbeddingModel::load(vectors_path);
  if (model.doc_ids != assignment.doc_ids) {
    throw std::runtime_error(
        "assignment does not match the embedding model's documents");
  }
  cm::insight::TopicLabels labels;
  if (!labels_path.empty()) {
    labels = cm::insight::TopicLabels::load_csv(labels_path);
    for (auto& label : assignment.labels) label = labels.resolve(label);
  }

  const auto records = cm::harvest::load_records(records_path);
  std::map<std::string, int> year_by_doc;
  std::map<std::string, std::string> title_by_doc;
  for (const auto& r : records) {
    year_by_doc[r.id] = r.year;
    title_by_doc[r.id] = r.title;
  }

  auto summaries =
      cm::insight::representatives(model.doc_vectors, assignment, 20);
  const auto trends = cm::insight::topic_trends(assignment, year_by_doc);
  for (auto& summary : summaries) {
    auto it = trends.find(summary.topic_id);
    if (it != trends.end()) summary.yearly_counts = it->second;
  }
  const auto projection = cm::insight::tsne(
      model.doc_vectors, cm::insight::TsneOptions{}, assignment.doc_ids);
  const auto files = cm::insight::emit_reports(
      summaries, trends, projection, assignment, labels, title_by_doc, out_dir);
  std::cout << files.size() << " report files written to " << out_dir << "\n";
  return kExitOk;
}

int standalone_entities(const std::string& in_dir,
                        const std::string& first_names,
                        const std::string& aliases_path,
                        const std::string& exclude_path,
                        const std::string& out_dir,
                        std::size_t journal_min, std::size_t author_top) {
  namespace fs = std::filesystem;
  const auto lexicon = cm::entities::NameLexicon::load(first_names);
  const auto aliases = cm::entities::JournalAliases::load_csv(aliases_path);
  std::set<std::string> excluded;
  if (!exclude_path.empty()) {
    excluded = cm::entities::load_excluded_surnames(exclude_path);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> texts;
  texts.reserve(files.size());
  for (const auto& f : files) texts.push_back(cm::read_file(f));

  const auto persons = cm::entities::count_persons(texts, lexicon, excluded);
  cm::entities::EntityCounts journals;
  journals.kind = cm::entities::EntityKind::journal;
  for (const auto& t : texts) {
    for (const auto& [name, count] :
         cm::entities::count_journals(t, aliases).counts) {
      journals.counts[name] += count;
    }
  }
  fs::create_directories(out_dir);
  {
    std::string csv = "name,count\n";
    for (const auto& e : cm::entities::rank_entities(persons, 0, author_top)) {
      csv += cm::csv_escape(e.name) + "," + std::to_string(e.count) + "\n";
    }
    cm::write_file(fs::path(out_dir) / "authors.csv", csv);
  }
  {
    std::string csv = "name,count\n";
    for (const auto& e : cm::entities::rank_entities(
             journals, journal_min, std::numeric_limits<std::size_t>::max())) {
      csv += cm::csv_escape(e.name) + "," + std::to_string(e.count) + "\n";
    }
    cm::write_file(fs::path(out_dir) / "journals.csv", csv);
  }
  std::cout << "entity rankings written to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpus topic-trend mining pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  bool force = false;

  // Pipeline-orchestrated stages plus "all".
  std::vector<std::string> pipeline_stages(cm::pipeline::stage_names());
  pipeline_stages.push_back("all");
  std::map<std::string, CLI::App*> stage_cmds;
  for (const auto& name : pipeline_stages) {
    CLI::App* cmd = app.add_subcommand(
        name, name == "all" ? "run every stage in order"
                            : "run the " + name + " stage");
    cmd->add_option("--config", config_path, "pipeline config file");
    cmd->add_flag("--force", force, "recompute even when inputs are unchanged");
    stage_cmds[name] = cmd;
  }

  // Standalone flags.
  std::vector<std::string> categories;
  int from_year = 1997, to_year = 2022;
  std::size_t page_size = 200;
  std::size_t max_records = 0;
  std::string out_path, urls_out;
  stage_cmds["harvest"]->add_option("--category", categories,
                                    "category filter (repeatable)");
  stage_cmds["harvest"]->add_option("--from-year", from_year, "first year");
  stage_cmds["harvest"]->add_option("--to-year", to_year, "last year");
  stage_cmds["harvest"]->add_option("--page-size", page_size, "page size");
  stage_cmds["harvest"]->add_option("--max-records", max_records,
                                    "stop after this many records");
  stage_cmds["harvest"]->add_option("--out", out_path, "record store path");
  stage_cmds["harvest"]->add_option("--urls-out", urls_out,
                                    "also write a PDF URL list");

  std::string prep_stage = "clean", prep_in, prep_out;
  std::size_t prep_min_count = cm::text::kDefaultVocabMinCount;
  stage_cmds["prep"]
      ->add_option("--stage", prep_stage, "raw | lemma | clean")
      ->check(CLI::IsMember({"raw", "lemma", "clean"}));
  stage_cmds["prep"]->add_option("--in", prep_in, "directory of <id>.txt files");
  stage_cmds["prep"]->add_option("--out", prep_out, "output directory");
  stage_cmds["prep"]->add_option("--min-count", prep_min_count,
                                 "corpus frequency cutoff");

  std::string phrases_in, phrases_out;
  int phrase_passes = 2;
  std::size_t phrase_min_count = cm::phrases::PhraseModel::kDefaultMinCount;
  double phrase_threshold = cm::phrases::PhraseModel::kDefaultThreshold;
  stage_cmds["phrases"]->add_option("--in", phrases_in, "cleaned corpus ndjson");
  stage_cmds["phrases"]->add_option("--out", phrases_out, "output directory");
  stage_cmds["phrases"]->add_option("--passes", phrase_passes, "merge passes");
  stage_cmds["phrases"]->add_option("--min-count", phrase_min_count,
                                    "pair count cutoff");
  stage_cmds["phrases"]->add_option("--threshold", phrase_threshold,
                                    "score threshold");

  std::string cluster_algo;
  int cluster_k = 0;
  std::int64_t cluster_seed = -1;
  stage_cmds["cluster"]->add_option(
      "--algo", cluster_algo,
      "kmeans | lda | word2vec-kmeans | doc2vec-kmeans | chunkseq");
  stage_cmds["cluster"]->add_option("--k", cluster_k, "number of clusters");
  stage_cmds["cluster"]->add_option("--seed", cluster_seed, "random seed");

  std::string eval_true, eval_pred, eval_out = "report.json";
  stage_cmds["eval"]->add_option("--true", eval_true, "true labels csv");
  stage_cmds["eval"]->add_option("--pred", eval_pred, "predicted labels csv");
  stage_cmds["eval"]->add_option("--out", eval_out, "report json path");

  std::string rep_assignment, rep_vectors, rep_records, rep_labels, rep_out;
  stage_cmds["report"]->add_option("--assignment", rep_assignment,
                                   "cluster assignment csv");
  stage_cmds["report"]->add_option("--vectors", rep_vectors,
                                   "doc2vec model binary");
  stage_cmds["report"]->add_option("--records", rep_records,
                                   "records.ndjson store");
  stage_cmds["report"]->add_option("--labels", rep_labels,
                                   "topic label csv (optional)");
  stage_cmds["report"]->add_option("--out", rep_out, "output directory");

  std::string ent_in, ent_names, ent_aliases, ent_exclude, ent_out;
  std::size_t ent_journal_min = 500, ent_author_top = 100;
  stage_cmds["entities"]->add_option("--in", ent_in, "raw text directory");
  stage_cmds["entities"]->add_option("--first-names", ent_names,
                                     "first-name lexicon file");
  stage_cmds["entities"]->add_option("--aliases", ent_aliases,
                                     "journal alias csv");
  stage_cmds["entities"]->add_option("--exclude", ent_exclude,
                                     "excluded surnames file");
  stage_cmds["entities"]->add_option("--out", ent_out, "output directory");
  stage_cmds["entities"]->add_option("--journal-min", ent_journal_min,
                                     "journal occurrence cutoff (strict)");
  stage_cmds["entities"]->add_option("--author-top", ent_author_top,
                                     "author list length");

  CLI::App* compare =
      app.add_subcommand("compare", "run every configured algorithm at the "
                                    "same k and tabulate the six metrics");
  compare->add_option("--config", config_path, "pipeline config file")
      ->required();

  CLI::App* sample = app.add_subcommand(
      "sample", "generate the bundled-style synthetic sample corpus");
  std::string sample_out = "sample";
  std::size_t sample_docs = 200;
  std::uint64_t sample_seed = 7;
  sample->add_option("--out", sample_out, "output directory");
  sample->add_option("--docs", sample_docs, "number of documents");
  sample->add_option("--seed", sample_seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) {
      cm::sample::generate(sample_out, sample_docs, sample_seed);
      std::cout << "sample corpus written to " << sample_out << "\n";
      return kExitOk;
    }
    if (compare->parsed()) {
      auto config = cm::pipeline::PipelineConfig::load(config_path);
      cm::pipeline::Pipeline pipeline(std::move(config));
      pipeline.compare_models();
      std::cout << cm::read_file(pipeline.config().work_dir / "comparison.md");
      return kExitOk;
    }
    for (const auto& name : pipeline_stages) {
      if (!stage_cmds[name]->parsed()) continue;
      if (!config_path.empty()) {
        // Direct-flag overrides before the orchestrated run.
        if (name == "cluster" &&
            (!cluster_algo.empty() || cluster_k > 0 || cluster_seed >= 0)) {
          auto config = cm::pipeline::PipelineConfig::load(config_path);
          if (!cluster_algo.empty()) config.algo = cluster_algo;
          if (cluster_k > 0) config.k = cluster_k;
          if (cluster_seed >= 0) {
            config.seed = static_cast<std::uint64_t>(cluster_seed);
          }
          cm::pipeline::Pipeline pipeline(std::move(config));
          const auto m = pipeline.run_stage("cluster", force);
          std::cout << "stage cluster" << (m.skipped ? " (cached)" : "")
                    << ": " << m.outputs.size() << " outputs\n";
          return kExitOk;
        }
        return run_pipeline_stage(name, config_path, force);
      }
      // Standalone forms.
      if (name == "harvest") {
        if (out_path.empty()) {
          throw cm::pipeline::ConfigError(
              "harvest needs --config or --out (standalone fetch)");
        }
        return standalone_harvest(
            categories, from_year, to_year, page_size,
            max_records > 0 ? std::optional<std::size_t>(max_records)
                            : std::nullopt,
            out_path, urls_out);
      }
      if (name == "prep") {
        if (prep_in.empty() || prep_out.empty()) {
          throw cm::pipeline::ConfigError("prep needs --config or --in/--out");
        }
        return standalone_prep(prep_stage, prep_in, prep_out, prep_min_count);
      }
      if (name == "phrases") {
        if (phrases_in.empty() || phrases_out.empty()) {
          throw cm::pipeline::ConfigError(
              "phrases needs --config or --in/--out");
        }
        return standalone_phrases(phrases_in, phrases_out, phrase_passes,
                                  phrase_min_count, phrase_threshold);
      }
      if (name == "eval") {
        if (eval_true.empty() || eval_pred.empty()) {
          throw cm::pipeline::ConfigError(
              "eval needs --config or --true/--pred");
        }
        return standalone_eval(eval_true, eval_pred, eval_out);
      }
      if (name == "report") {
        if (rep_assignment.empty() || rep_vectors.empty() ||
            rep_records.empty() || rep_out.empty()) {
          throw cm::pipeline::ConfigError(
              "report needs --config or "
              "--assignment/--vectors/--records/--out");
        }
        return standalone_report(rep_assignment, rep_vectors, rep_records,
                                 rep_labels, rep_out);
      }
      if (name == "entities") {
        if (ent_in.empty() || ent_names.empty() || ent_aliases.empty() ||
            ent_out.empty()) {
          throw cm::pipeline::ConfigError(
              "entities needs --config or --in/--first-names/--aliases/--out");
        }
        return standalone_entities(ent_in, ent_names, ent_aliases, ent_exclude,
                                   ent_out, ent_journal_min, ent_author_top);
      }
      throw cm::pipeline::ConfigError(name + " needs --config");
    }
    throw cm::pipeline::ConfigError("no subcommand given");
  } catch (const cm::pipeline::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cm::pipeline::UpstreamMissing& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUpstream;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
