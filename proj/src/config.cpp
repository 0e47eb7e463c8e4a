#include "corpusminer/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "corpusminer/io_util.hpp"

namespace cm::pipeline {

namespace {

constexpr char kListSep = '\x1f';

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        ++i;
        switch (v[i]) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default: out.push_back(v[i]);
        }
      } else {
        out.push_back(v[i]);
      }
    }
    return out;
  }
  return v;
}

/// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    }
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unterminated array");
      }
      std::string joined;
      std::string item;
      bool quoted = false;
      for (std::size_t i = 1; i + 1 < value.size(); ++i) {
        const char c = value[i];
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
          const std::string element = unquote(trim(item));
          if (!element.empty()) {
            if (!joined.empty()) joined.push_back(kListSep);
            joined += element;
          }
          item.clear();
        } else {
          item.push_back(c);
        }
      }
      const std::string element = unquote(trim(item));
      if (!element.empty()) {
        if (!joined.empty()) joined.push_back(kListSep);
        joined += element;
      }
      cfg.values_[section][key] = joined;
    } else {
      cfg.values_[section][key] = unquote(value);
    }
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
  return parse_string(read_file(path));
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = values_.find(section);
  return s != values_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key,
                                   const std::string& fallback) const {
  auto s = values_.find(section);
  if (s == values_.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

std::int64_t ConfigFile::get_int(const std::string& section,
                                 const std::string& key,
                                 std::int64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key);
  try {
    return std::stoll(v);
  } catch (...) {
    throw ConfigError("config [" + section + "] " + key +
                      ": expected an integer, got \"" + v + "\"");
  }
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key, double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key);
  try {
    return std::stod(v);
  } catch (...) {
    throw ConfigError("config [" + section + "] " + key +
                      ": expected a number, got \"" + v + "\"");
  }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("config [" + section + "] " + key +
                    ": expected true/false, got \"" + v + "\"");
}

std::vector<std::string> ConfigFile::get_string_list(
    const std::string& section, const std::string& key) const {
  std::vector<std::string> out;
  const std::string joined = get_string(section, key);
  if (joined.empty()) return out;
  std::string item;
  for (char c : joined) {
    if (c == kListSep) {
      out.push_back(item);
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  out.push_back(item);
  return out;
}

std::string ConfigFile::section_fingerprint(const std::string& section) const {
  std::ostringstream out;
  out << "[" << section << "]";
  auto s = values_.find(section);
  if (s != values_.end()) {
    for (const auto& [k, v] : s->second) {
      out << k << "=" << v << ";";
    }
  }
  return out.str();
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("config file not found: " + path.string());
  }
  PipelineConfig c;
  c.raw = ConfigFile::parse_file(path);
  const ConfigFile& f = c.raw;
  c.config_dir = std::filesystem::absolute(path).parent_path();

  auto resolve = [&](const std::string& value) -> std::filesystem::path {
    if (value.empty()) return {};
    std::filesystem::path p(value);
    return p.is_absolute() ? p : c.config_dir / p;
  };

  c.records = resolve(f.get_string("paths", "records"));
  c.text_dir = resolve(f.get_string("paths", "text_dir"));
  c.work_dir = resolve(f.get_string("paths", "work_dir"));
  c.stopwords_english = resolve(f.get_string("paths", "stopwords_english"));
  c.stopwords_domain = resolve(f.get_string("paths", "stopwords_domain"));
  c.ly_keep = resolve(f.get_string("paths", "ly_keep"));
  c.first_names = resolve(f.get_string("paths", "first_names"));
  c.journal_aliases = resolve(f.get_string("paths", "journal_aliases"));
  c.exclude_names = resolve(f.get_string("paths", "exclude_names"));
  c.labels = resolve(f.get_string("paths", "labels"));

  c.harvest_mode = f.get_string("harvest", "mode", c.harvest_mode);
  c.categories = f.get_string_list("harvest", "categories");
  c.from_year = static_cast<int>(f.get_int("harvest", "from_year", c.from_year));
  c.to_year = static_cast<int>(f.get_int("harvest", "to_year", c.to_year));
  c.page_size = static_cast<std::size_t>(
      f.get_int("harvest", "page_size", static_cast<std::int64_t>(c.page_size)));
  if (f.has("harvest", "max_records")) {
    c.max_records =
        static_cast<std::size_t>(f.get_int("harvest", "max_records", 0));
  }

  c.min_count = static_cast<std::size_t>(
      f.get_int("prep", "min_count", static_cast<std::int64_t>(c.min_count)));
  c.threads = static_cast<std::size_t>(
      f.get_int("prep", "threads", static_cast<std::int64_t>(c.threads)));

  c.phrase_passes = static_cast<int>(
      f.get_int("phrases", "passes", c.phrase_passes));
  c.phrase_min_count = static_cast<std::size_t>(f.get_int(
      "phrases", "min_count", static_cast<std::int64_t>(c.phrase_min_count)));
  c.phrase_threshold =
      f.get_double("phrases", "threshold", c.phrase_threshold);

  c.dim = static_cast<std::size_t>(
      f.get_int("vectorize", "dim", static_cast<std::int64_t>(c.dim)));
  c.window = static_cast<std::size_t>(
      f.get_int("vectorize", "window", static_cast<std::int64_t>(c.window)));
  c.negatives = static_cast<std::size_t>(f.get_int(
      "vectorize", "negatives", static_cast<std::int64_t>(c.negatives)));
  c.w2v_epochs = static_cast<std::size_t>(f.get_int(
      "vectorize", "w2v_epochs", static_cast<std::int64_t>(c.w2v_epochs)));
  c.d2v_epochs = static_cast<std::size_t>(f.get_int(
      "vectorize", "d2v_epochs", static_cast<std::int64_t>(c.d2v_epochs)));
  c.d2v_mode = f.get_string("vectorize", "d2v_mode", c.d2v_mode);
  c.seed = static_cast<std::uint64_t>(
      f.get_int("vectorize", "seed", static_cast<std::int64_t>(c.seed)));
  c.max_df = f.get_double("vectorize", "max_df", c.max_df);
  c.workers = static_cast<std::size_t>(
      f.get_int("vectorize", "workers", static_cast<std::int64_t>(c.workers)));

  c.algo = f.get_string("cluster", "algo", c.algo);
  c.k = static_cast<int>(f.get_int("cluster", "k", c.k));
  c.lda_iterations = static_cast<std::size_t>(f.get_int(
      "cluster", "lda_iterations", static_cast<std::int64_t>(c.lda_iterations)));
  c.lda_alpha = f.get_double("cluster", "lda_alpha", c.lda_alpha);
  c.lda_beta = f.get_double("cluster", "lda_beta", c.lda_beta);
  c.chunk_size = static_cast<std::size_t>(f.get_int(
      "cluster", "chunk_size", static_cast<std::int64_t>(c.chunk_size)));
  c.chunk_model_k =
      static_cast<int>(f.get_int("cluster", "chunk_model_k", c.chunk_model_k));
  c.chunk_lda_iterations = static_cast<std::size_t>(
      f.get_int("cluster", "chunk_lda_iterations",
                static_cast<std::int64_t>(c.chunk_lda_iterations)));

  c.compare_algos = f.get_string_list("eval", "algos");
  if (c.compare_algos.empty()) {
    c.compare_algos = {"kmeans", "lda", "word2vec-kmeans", "doc2vec-kmeans",
                       "chunkseq"};
  }

  c.top_n = static_cast<std::size_t>(
      f.get_int("report", "top_n", static_cast<std::int64_t>(c.top_n)));
  c.tsne_perplexity =
      f.get_double("report", "tsne_perplexity", c.tsne_perplexity);
  c.tsne_iterations = static_cast<std::size_t>(
      f.get_int("report", "tsne_iterations",
                static_cast<std::int64_t>(c.tsne_iterations)));

  c.journal_min_occurrences = static_cast<std::size_t>(
      f.get_int("entities", "journal_min_occurrences",
                static_cast<std::int64_t>(c.journal_min_occurrences)));
  c.author_min_occurrences = static_cast<std::size_t>(
      f.get_int("entities", "author_min_occurrences",
                static_cast<std::int64_t>(c.author_min_occurrences)));
  c.author_top_n = static_cast<std::size_t>(
      f.get_int("entities", "author_top_n",
                static_cast<std::int64_t>(c.author_top_n)));

  // Validation: collect every violation.
  std::vector<std::string> violations;
  auto require_file = [&](const std::filesystem::path& p,
                          const std::string& what, bool needed) {
    if (!needed) return;
    if (p.empty()) {
      violations.push_back(what + " is not configured");
    } else if (!std::filesystem::exists(p)) {
      violations.push_back(what + " does not exist: " + p.string());
    }
  };
  require_file(c.work_dir.empty() ? std::filesystem::path{"x"}
                                  : c.work_dir.parent_path(),
               "work_dir parent", false);
  if (c.work_dir.empty()) violations.push_back("paths.work_dir is required");
  if (c.text_dir.empty()) violations.push_back("paths.text_dir is required");
  if (c.records.empty()) violations.push_back("paths.records is required");
  require_file(c.stopwords_english, "paths.stopwords_english",
               !c.stopwords_english.empty());
  require_file(c.stopwords_domain, "paths.stopwords_domain",
               !c.stopwords_domain.empty());
  require_file(c.ly_keep, "paths.ly_keep", !c.ly_keep.empty());
  require_file(c.first_names, "paths.first_names", !c.first_names.empty());
  require_file(c.journal_aliases, "paths.journal_aliases",
               !c.journal_aliases.empty());
  require_file(c.exclude_names, "paths.exclude_names",
               !c.exclude_names.empty());

  if (c.harvest_mode != "import" && c.harvest_mode != "fetch") {
    violations.push_back("harvest.mode must be \"import\" or \"fetch\"");
  }
  if (c.page_size == 0 || c.page_size > 2000) {
    violations.push_back("harvest.page_size must be in [1, 2000]");
  }
  if (c.from_year > c.to_year) {
    violations.push_back("harvest.from_year exceeds to_year");
  }
  if (c.dim < 2) violations.push_back("vectorize.dim must be >= 2");
  if (c.max_df <= 0.0 || c.max_df > 1.0) {
    violations.push_back("vectorize.max_df must be in (0, 1]");
  }
  if (c.k <= 0) violations.push_back("cluster.k must be positive");
  if (c.chunk_size == 0) violations.push_back("cluster.chunk_size must be >= 1");
  if (c.chunk_model_k <= 0) {
    violations.push_back("cluster.chunk_model_k must be positive");
  }
  if (c.d2v_mode != "dbow" && c.d2v_mode != "dm") {
    violations.push_back("vectorize.d2v_mode must be \"dbow\" or \"dm\"");
  }
  static const std::vector<std::string> kAlgos = {
      "kmeans", "lda", "word2vec-kmeans", "doc2vec-kmeans", "chunkseq"};
  auto known_algo = [&](const std::string& a) {
    return std::find(kAlgos.begin(), kAlgos.end(), a) != kAlgos.end();
  };
  if (!known_algo(c.algo)) {
    violations.push_back("cluster.algo unknown: " + c.algo);
  }
  for (const auto& a : c.compare_algos) {
    if (!known_algo(a)) violations.push_back("eval.algos unknown: " + a);
  }
  if (!violations.empty()) {
    std::string msg = "config validation failed:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw ConfigError(msg, violations);
  }
  return c;
}

}  // namespace cm::pipeline
