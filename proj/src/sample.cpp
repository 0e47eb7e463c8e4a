#include "corpusminer/sample.hpp"

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "corpusminer/io_util.hpp"
#include "corpusminer/records.hpp"
#include "corpusminer/rng.hpp"

namespace cm::sample {

namespace {

struct Theme {
  const char* category;
  const char* pair_a;  // signature collocation, always emitted adjacent
  const char* pair_b;
  std::vector<const char*> words;
};

const std::array<Theme, 5>& themes() {
  static const std::array<Theme, 5> t = {{
      {"q-fin.PR",
       "monte", "carlo",
       {"option", "pricing", "volatility", "strike", "payoff", "hedging",
        "derivative", "maturity", "diffusion", "jump", "barrier", "exercise",
        "underlying", "stochastic", "valuation", "discount", "drift",
        "martingale", "calibration", "smile", "swaption", "lattice"}},
      {"q-fin.PM",
       "efficient", "frontier",
       {"portfolio", "allocation", "weight", "diversification", "rebalancing",
        "benchmark", "turnover", "constraint", "optimization", "asset",
        "selection", "performance", "tracking", "holding", "strategy",
        "universe", "momentum", "factor", "exposure", "backtest", "alpha",
        "horizon"}},
      {"q-fin.RM",
       "expected", "shortfall",
       {"risk", "capital", "liquidity", "solvency", "stress", "default",
        "credit", "counterparty", "exposure", "quantile", "regulation",
        "buffer", "contagion", "systemic", "provision", "downturn", "loss",
        "coverage", "margin", "collateral", "rating", "insurance"}},
      {"q-fin.ST",
       "hurst", "exponent",
       {"return", "distribution", "tail", "moment", "kurtosis", "skewness",
        "autocorrelation", "stationarity", "regime", "estimator", "sampling",
        "spectrum", "scaling", "memory", "fluctuation", "covariance",
        "dependence", "entropy", "histogram", "density", "statistic",
        "inference"}},
      {"q-fin.TR",
       "limit", "order",
       {"trading", "microstructure", "spread", "liquidity", "quote", "tick",
        "execution", "inventory", "latency", "auction", "imbalance", "flow",
        "market", "maker", "slippage", "venue", "depth", "cancellation",
        "impact", "intensity", "arrival", "book"}},
  }};
  return t;
}

const std::vector<const char*>& filler_words() {
  static const std::vector<const char*> words = {
      "model",    "method",   "result",   "analysis", "approach", "function",
      "process",  "value",    "time",     "paper",    "study",    "problem",
      "solution", "effect",   "measure",  "number",   "level",    "rate",
      "change",   "case",     "term",     "data",     "series",   "price",
      "framework","evidence", "parameter","estimate", "equation", "property",
      "condition","structure","dynamics", "behavior", "theory",   "literature",
      "section",  "example",  "quantity", "variable",
  };
  return words;
}

const std::vector<const char*>& surnames() {
  static const std::vector<const char*> names = {
      "Keller",   "Fontana",  "Bianchi", "Tassinari", "Okafor",  "Lindqvist",
      "Moreau",   "Tanaka",   "Petrov",  "Silva",     "Novak",   "Haddad",
      "Virtanen", "Costa",    "Jensen",  "Rossi",     "Dupont",  "Yamada",
      "Svensson", "Marino",   "Oliveira","Byrne",     "Farkas",  "Leclerc",
  };
  return names;
}

const std::vector<const char*>& first_names() {
  static const std::vector<const char*> names = {
      "Anna",  "James", "Maria", "Pierre", "Yuki",  "Lars",
      "Sofia", "David", "Elena", "Marco",  "Ingrid","Pablo",
      "Chiara","Tomas", "Greta", "Hugo",   "Nadia", "Oscar",
  };
  return names;
}

struct Journal {
  const char* canonical;
  std::vector<const char*> aliases;  // includes the canonical spelling
};

const std::vector<Journal>& journals() {
  static const std::vector<Journal> j = {
      {"Journal of Finance", {"Journal of Finance", "J. of Finance"}},
      {"Mathematical Finance", {"Mathematical Finance"}},
      {"Quantitative Finance", {"Quantitative Finance"}},
      {"Journal of Financial Economics",
       {"Journal of Financial Economics", "J. Financial Economics"}},
      {"Physica A", {"Physica A"}},
      {"Econometrica", {"Econometrica"}},
  };
  return j;
}

std::string capitalize(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') {
    word[0] = static_cast<char>(word[0] - 'a' + 'A');
  }
  return word;
}

class DocWriter {
 public:
  DocWriter(const Theme& theme, Rng& rng) : theme_(theme), rng_(rng) {}

  std::string theme_word() {
    return theme_.words[rng_.uniform_u32(
        static_cast<std::uint32_t>(theme_.words.size()))];
  }
  std::string filler_word() {
    const auto& words = filler_words();
    return words[rng_.uniform_u32(static_cast<std::uint32_t>(words.size()))];
  }
  std::string content_word() {
    return rng_.uniform01() < 0.55 ? theme_word() : filler_word();
  }
  std::string surname() {
    const auto& names = surnames();
    return names[rng_.uniform_u32(static_cast<std::uint32_t>(names.size()))];
  }
  int year() { return 2003 + static_cast<int>(rng_.uniform_u32(20)); }

  std::string sentence() {
    std::ostringstream s;
    switch (rng_.uniform_u32(6)) {
      case 0:
        s << "The " << content_word() << " " << content_word()
          << " depends on the " << content_word() << " " << content_word()
          << ".";
        break;
      case 1:
        s << "We study the " << content_word() << " of the " << content_word()
          << " using a " << content_word() << " " << content_word() << ".";
        break;
      case 2:
        s << "This " << filler_word() << " shows that the " << theme_word()
          << " " << theme_word() << " is driven by " << content_word() << ".";
        break;
      case 3:
        s << "A " << theme_.pair_a << " " << theme_.pair_b
          << " procedure estimates the " << content_word() << " "
          << content_word() << ".";
        break;
      case 4:
        s << "As shown in " << surname() << " and " << surname() << " ("
          << year() << "), the " << content_word() << " affects the "
          << content_word() << ".";
        break;
      default:
        s << "See " << surname() << " et al. (" << year()
          << ") for a " << filler_word() << " of " << theme_word() << " "
          << theme_word() << ".";
        break;
    }
    return s.str();
  }

  std::string reference_line() {
    std::ostringstream s;
    const auto& j = journals();
    const Journal& journal =
        j[rng_.uniform_u32(static_cast<std::uint32_t>(j.size()))];
    const char* alias = journal.aliases[rng_.uniform_u32(
        static_cast<std::uint32_t>(journal.aliases.size()))];
    const char initial = static_cast<char>('A' + rng_.uniform_u32(26));
    s << surname() << ", " << initial << ". (" << year() << "). "
      << capitalize(content_word()) << " " << content_word() << " and "
      << content_word() << ". " << alias << ", "
      << (1 + rng_.uniform_u32(90)) << ", " << (1 + rng_.uniform_u32(40))
      << "-" << (50 + rng_.uniform_u32(60)) << ".";
    return s.str();
  }

  std::string title() {
    std::ostringstream s;
    s << capitalize(theme_word()) << " " << theme_word() << " and "
      << filler_word() << " " << filler_word();
    return s.str();
  }

 private:
  const Theme& theme_;
  Rng& rng_;
};

std::string pipeline_toml() {
  return R"cfg(# Pipeline configuration for the bundled synthetic sample corpus.

[paths]
records = "records.ndjson"
text_dir = "texts"
work_dir = "work"
first_names = "first_names.txt"
journal_aliases = "journal_aliases.csv"
exclude_names = "exclude_names.txt"

[harvest]
mode = "import"

[prep]
min_count = 25
threads = 2

[phrases]
passes = 2
min_count = 30
threshold = 0.5

[vectorize]
dim = 64
window = 5
negatives = 5
w2v_epochs = 10
d2v_epochs = 25
d2v_mode = "dbow"
seed = 7
max_df = 0.75

[cluster]
algo = "doc2vec-kmeans"
k = 5
lda_iterations = 300
chunk_size = 300
chunk_model_k = 12
chunk_lda_iterations = 100

[eval]
algos = ["kmeans", "lda", "doc2vec-kmeans"]

[report]
top_n = 20
tsne_perplexity = 20.0
tsne_iterations = 500

[entities]
journal_min_occurrences = 10
author_min_occurrences = 1
author_top_n = 100
)cfg";
}

}  // namespace

void generate(const std::filesystem::path& dir, std::size_t n_docs,
              std::uint64_t seed) {
  std::filesystem::create_directories(dir / "texts");
  Rng rng(seed);

  std::vector<harvest::DocumentRecord> records;
  records.reserve(n_docs);
  for (std::size_t i = 0; i < n_docs; ++i) {
    const Theme& theme = themes()[i % themes().size()];
    DocWriter writer(theme, rng);

    harvest::DocumentRecord record;
    const int year = 2015 + static_cast<int>(i % 8);
    {
      char id[16];
      std::snprintf(id, sizeof(id), "%02d%02zu.%05zu", year - 2000,
                    1 + i % 12, 10000 + i);
      record.id = id;
    }
    record.title = writer.title();
    record.year = year;
    record.authors = {std::string(first_names()[i % first_names().size()]) +
                      " " + writer.surname()};
    record.all_categories = {theme.category, "q-fin.GN"};
    record.reference_category =
        harvest::assign_reference_category(record.all_categories);

    std::ostringstream text;
    text << record.title << "\n\n";
    std::ostringstream abstract;
    for (int s = 0; s < 3; ++s) abstract << writer.sentence() << " ";
    record.abstract = abstract.str();
    text << "Abstract. " << record.abstract << "\n\n";

    const std::size_t n_sentences = 28 + rng.uniform_u32(18);
    for (std::size_t s = 0; s < n_sentences; ++s) {
      text << writer.sentence();
      text << ((s % 5 == 4) ? "\n" : " ");
    }
    text << "\nReferences\n";
    const std::size_t n_refs = 5 + rng.uniform_u32(4);
    for (std::size_t r = 0; r < n_refs; ++r) {
      text << writer.reference_line() << "\n";
    }
    write_file(dir / "texts" / (record.id + ".txt"), text.str());
    records.push_back(std::move(record));
  }
  harvest::store_records(records, dir / "records.ndjson");

  {
    std::ostringstream out;
    for (const char* name : first_names()) {
      std::string lower(name);
      lower[0] = static_cast<char>(lower[0] - 'A' + 'a');
      out << lower << "\n";
    }
    write_file(dir / "first_names.txt", out.str());
  }
  {
    std::ostringstream out;
    out << "alias,canonical\n";
    for (const auto& j : journals()) {
      for (const char* alias : j.aliases) {
        out << csv_escape(alias) << "," << csv_escape(j.canonical) << "\n";
      }
    }
    write_file(dir / "journal_aliases.csv", out.str());
  }
  write_file(dir / "exclude_names.txt", "novak\n");
  write_file(dir / "pipeline.toml", pipeline_toml());
}

}  // namespace cm::sample
