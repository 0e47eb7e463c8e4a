#include "corpusminer/textprep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "corpusminer/io_util.hpp"
#include "corpusminer/text_util.hpp"
#include "json.hpp"

namespace cm::text {

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::raw: return "raw";
    case Stage::lemmatized: return "lemmatized";
    case Stage::cleaned: return "cleaned";
  }
  return "raw";
}

std::optional<Stage> stage_from_name(const std::string& name) {
  if (name == "raw") return Stage::raw;
  if (name == "lemmatized" || name == "lemma") return Stage::lemmatized;
  if (name == "cleaned" || name == "clean") return Stage::cleaned;
  return std::nullopt;
}

TokenDoc tokenize(const std::string& text, const std::string& doc_id) {
  TokenDoc doc;
  doc.doc_id = doc_id;
  doc.stage = Stage::raw;

  std::string current;
  enum class Run { none, letters, digits };
  Run run = Run::none;

  auto flush = [&]() {
    if (current.empty()) return;
    if (run == Run::digits && current.size() == 4) {
      const int year = std::stoi(current);
      if (year >= 1000 && year <= 2999) doc.years_found.push_back(year);
    }
    doc.tokens.push_back(std::move(current));
    current.clear();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const std::uint32_t cp = utf8_decode(text, i);
    if (is_latin_letter(cp)) {
      if (run != Run::letters) flush();
      run = Run::letters;
      utf8_encode(cp, current);
    } else if (is_ascii_digit(cp)) {
      if (run != Run::digits) flush();
      run = Run::digits;
      current.push_back(static_cast<char>(cp));
    } else {
      flush();
      run = Run::none;
    }
  }
  flush();
  return doc;
}

namespace {

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_ascii_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// Re-attaches a silent e or undoes consonant doubling after -ed/-ing
// stripping.
std::string fixup_verb_stem(std::string stem) {
  const std::size_t n = stem.size();
  static const std::string doubled = "bdgmnprt";
  if (n >= 4 && stem[n - 1] == stem[n - 2] &&
      doubled.find(stem[n - 1]) != std::string::npos) {
    stem.pop_back();
    return stem;
  }
  const char last = stem[n - 1];
  if (last == 'c' || last == 'g' || last == 'u' || last == 'v') {
    stem.push_back('e');
    return stem;
  }
  if (n >= 3 && last == 'l') {
    const char prev = stem[n - 2];
    if (!is_ascii_vowel(prev) && prev != 'l') stem.push_back('e');
  }
  return stem;
}

const std::map<std::string, std::string>& lemma_exceptions() {
  static const std::map<std::string, std::string> table = {
      {"analyses", "analysis"}, {"based", "base"},
      {"done", "do"},           {"found", "find"},
      {"given", "give"},        {"hypotheses", "hypothesis"},
      {"indices", "index"},     {"made", "make"},
      {"makes", "make"},        {"making", "make"},
      {"matrices", "matrix"},   {"paid", "pay"},
      {"said", "say"},          {"seen", "see"},
      {"series", "series"},     {"shown", "show"},
      {"species", "species"},   {"taken", "take"},
      {"takes", "take"},        {"taking", "take"},
      {"traded", "trade"},      {"trades", "trade"},
      {"trading", "trade"},     {"using", "use"},
  };
  return table;
}

}  // namespace

std::string lemma_of(const std::string& w) {
  const auto& exceptions = lemma_exceptions();
  if (auto it = exceptions.find(w); it != exceptions.end()) return it->second;

  const std::size_t n = w.size();
  if (ends_with(w, "ities") && n >= 7) {
    return w.substr(0, n - 5) + "ity";
  }
  if (ends_with(w, "ies")) {
    if (n >= 5) return w.substr(0, n - 3) + "y";
    if (n == 4) return w.substr(0, n - 1);  // ties -> tie
  }
  if (ends_with(w, "ied")) {
    if (n >= 5) return w.substr(0, n - 3) + "y";
    if (n == 4) return w.substr(0, n - 1);  // died -> die
  }
  if (ends_with(w, "eed") && n >= 6) {
    return w.substr(0, n - 1);  // agreed -> agree
  }
  if (ends_with(w, "ed") && n >= 4) {
    return fixup_verb_stem(w.substr(0, n - 2));
  }
  if (ends_with(w, "ing") && n >= 6) {
    return fixup_verb_stem(w.substr(0, n - 3));
  }
  if (ends_with(w, "es") && n >= 5) {
    const std::string stem = w.substr(0, n - 2);
    if (stem.size() >= 3 &&
        (ends_with(stem, "s") || ends_with(stem, "x") || ends_with(stem, "z") ||
         ends_with(stem, "ch") || ends_with(stem, "sh"))) {
      return stem;
    }
  }
  if (ends_with(w, "s") && n >= 4 && !ends_with(w, "ss") &&
      !ends_with(w, "us") && !ends_with(w, "is")) {
    return w.substr(0, n - 1);
  }
  return w;
}

TokenDoc lemmatize(const TokenDoc& doc) {
  if (doc.stage != Stage::raw) {
    throw std::invalid_argument("lemmatize expects a raw-stage document");
  }
  TokenDoc out;
  out.doc_id = doc.doc_id;
  out.stage = Stage::lemmatized;
  out.years_found = doc.years_found;
  out.tokens.reserve(doc.tokens.size());
  for (const auto& tok : doc.tokens) {
    const std::string lower = to_lower(tok);
    if (is_all_letters(lower)) {
      out.tokens.push_back(lemma_of(lower));
    } else {
      out.tokens.push_back(lower);
    }
  }
  return out;
}

FreqMap corpus_frequencies(const std::vector<TokenDoc>& corpus) {
  FreqMap freq;
  for (const auto& doc : corpus) {
    for (const auto& tok : doc.tokens) ++freq[tok];
  }
  return freq;
}

TokenDoc clean(const TokenDoc& doc, const StopwordConfig& cfg,
               const FreqMap& frequencies, std::size_t vocab_min_count) {
  TokenDoc out;
  out.doc_id = doc.doc_id;
  out.stage = Stage::cleaned;
  out.years_found = doc.years_found;
  for (const auto& tok : doc.tokens) {
    if (!is_all_letters(tok)) continue;
    const std::size_t len = codepoint_length(tok);
    if (len < kMinTokenLength || len > kMaxTokenLength) continue;
    if (cfg.english_stopwords.count(tok) || cfg.domain_stopwords.count(tok)) {
      continue;
    }
    if (cfg.drop_ly_adverbs && ends_with(tok, "ly") && !cfg.ly_keep.count(tok)) {
      continue;
    }
    auto it = frequencies.find(tok);
    const std::size_t count = it == frequencies.end() ? 0 : it->second;
    if (count < vocab_min_count) continue;
    out.tokens.push_back(tok);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Language detection

namespace {

// Short parallel seed texts; the trigram profiles derived from them are
// enough to separate the five languages on paragraph-sized inputs.
constexpr const char* kEnglishSeed =
    "the results show that the model provides a good description of the data "
    "and that the method can be applied to many different problems we "
    "consider the case in which the process is observed over a long period "
    "of time and the parameters are estimated from the available information "
    "in this section we describe the approach and we discuss the main "
    "properties of the solution the price of the asset depends on the "
    "behavior of the market and on the expectations of the investors there "
    "is a large body of research on this subject and several authors have "
    "studied the question in detail it should be noted that these "
    "assumptions are not restrictive and that the framework can be extended "
    "in a natural way";

constexpr const char* kFrenchSeed =
    "les résultats montrent que le modèle fournit une bonne description des "
    "données et que la méthode peut être appliquée à de nombreux problèmes "
    "différents nous considérons le cas où le processus est observé pendant "
    "une longue période et où les paramètres sont estimés à partir des "
    "informations disponibles dans cette section nous décrivons la démarche "
    "et nous discutons les principales propriétés de la solution le prix de "
    "l actif dépend du comportement du marché et des attentes des "
    "investisseurs il existe de nombreuses recherches sur ce sujet et "
    "plusieurs auteurs ont étudié la question en détail il convient de noter "
    "que ces hypothèses ne sont pas restrictives et que le cadre peut être "
    "étendu de manière naturelle";

constexpr const char* kGermanSeed =
    "die ergebnisse zeigen dass das modell eine gute beschreibung der daten "
    "liefert und dass die methode auf viele verschiedene probleme angewendet "
    "werden kann wir betrachten den fall in dem der prozess über einen "
    "langen zeitraum beobachtet wird und die parameter aus den verfügbaren "
    "informationen geschätzt werden in diesem abschnitt beschreiben wir den "
    "ansatz und diskutieren die wichtigsten eigenschaften der lösung der "
    "preis des vermögenswertes hängt vom verhalten des marktes und von den "
    "erwartungen der anleger ab es gibt zahlreiche untersuchungen zu diesem "
    "thema und mehrere autoren haben die frage im detail untersucht es sei "
    "darauf hingewiesen dass diese annahmen nicht einschränkend sind und "
    "dass der rahmen auf natürliche weise erweitert werden kann";

constexpr const char* kSpanishSeed =
    "los resultados muestran que el modelo proporciona una buena descripción "
    "de los datos y que el método puede aplicarse a muchos problemas "
    "diferentes consideramos el caso en que el proceso se observa durante un "
    "largo período de tiempo y los parámetros se estiman a partir de la "
    "información disponible en esta sección describimos el enfoque y "
    "discutimos las principales propiedades de la solución el precio del "
    "activo depende del comportamiento del mercado y de las expectativas de "
    "los inversores existe una gran cantidad de investigaciones sobre este "
    "tema y varios autores han estudiado la cuestión en detalle cabe señalar "
    "que estos supuestos no son restrictivos y que el marco puede ampliarse "
    "de forma natural";

constexpr const char* kItalianSeed =
    "i risultati mostrano che il modello fornisce una buona descrizione dei "
    "dati e che il metodo può essere applicato a molti problemi diversi "
    "consideriamo il caso in cui il processo viene osservato per un lungo "
    "periodo di tempo e i parametri sono stimati a partire dalle "
    "informazioni disponibili in questa sezione descriviamo l approccio e "
    "discutiamo le principali proprietà della soluzione il prezzo dell "
    "attività dipende dal comportamento del mercato e dalle aspettative "
    "degli investitori esiste una vasta letteratura su questo argomento e "
    "diversi autori hanno studiato la questione in dettaglio va notato che "
    "queste ipotesi non sono restrittive e che il quadro può essere esteso "
    "in modo naturale";

using TrigramProfile = std::map<std::string, double>;

TrigramProfile trigram_profile(const std::string& text) {
  TrigramProfile profile;
  if (text.size() < 3) return profile;
  for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
    profile[text.substr(i, 3)] += 1.0;
  }
  double norm = 0.0;
  for (const auto& [k, v] : profile) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& [k, v] : profile) v /= norm;
  }
  return profile;
}

double profile_cosine(const TrigramProfile& a, const TrigramProfile& b) {
  const TrigramProfile& small = a.size() <= b.size() ? a : b;
  const TrigramProfile& large = a.size() <= b.size() ? b : a;
  double s = 0.0;
  for (const auto& [k, v] : small) {
    auto it = large.find(k);
    if (it != large.end()) s += v * it->second;
  }
  return s;
}

const std::array<std::pair<const char*, TrigramProfile>, 5>& language_profiles() {
  static const std::array<std::pair<const char*, TrigramProfile>, 5> profiles = {
      std::pair{"en", trigram_profile(kEnglishSeed)},
      std::pair{"fr", trigram_profile(kFrenchSeed)},
      std::pair{"de", trigram_profile(kGermanSeed)},
      std::pair{"es", trigram_profile(kSpanishSeed)},
      std::pair{"it", trigram_profile(kItalianSeed)},
  };
  return profiles;
}

}  // namespace

LanguageCall detect_english(const TokenDoc& doc) {
  if (doc.tokens.size() < 20) {
    return LanguageCall{true, true};
  }
  std::string joined;
  for (const auto& tok : doc.tokens) {
    if (!joined.empty()) joined.push_back(' ');
    joined += to_lower(tok);
  }
  const TrigramProfile doc_profile = trigram_profile(joined);
  double best = -1.0;
  double english = 0.0;
  for (const auto& [lang, profile] : language_profiles()) {
    const double sim = profile_cosine(doc_profile, profile);
    if (std::string_view(lang) == "en") english = sim;
    best = std::max(best, sim);
  }
  return LanguageCall{english >= best, false};
}

// ---------------------------------------------------------------------------
// Readability

namespace {

bool is_vowel_cp(std::uint32_t cp) {
  switch (cp) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      break;
  }
  // Accented Latin-1 vowels.
  if ((cp >= 0xE0 && cp <= 0xE6) || (cp >= 0xE8 && cp <= 0xEF) ||
      (cp >= 0xF2 && cp <= 0xF6) || (cp >= 0xF9 && cp <= 0xFD) || cp == 0xFF) {
    return true;
  }
  return false;
}

std::size_t syllable_count(const std::string& word) {
  const std::string lower = to_lower(word);
  std::vector<std::uint32_t> cps;
  std::size_t i = 0;
  while (i < lower.size()) cps.push_back(utf8_decode(lower, i));

  std::size_t groups = 0;
  bool in_group = false;
  for (std::uint32_t cp : cps) {
    if (is_vowel_cp(cp)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  // Silent final e: "price" has one spoken syllable, "table" keeps two.
  const std::size_t n = cps.size();
  if (groups > 1 && n >= 3 && cps[n - 1] == 'e' &&
      !(cps[n - 2] == 'l' && !is_vowel_cp(cps[n - 3]))) {
    if (!is_vowel_cp(cps[n - 2])) --groups;
  }
  return std::max<std::size_t>(groups, 1);
}

}  // namespace

ReadabilityScore flesch_score(const std::string& text,
                              const std::string& doc_id) {
  ReadabilityScore score;
  score.doc_id = doc_id;

  const TokenDoc toks = tokenize(text, doc_id);
  for (const auto& tok : toks.tokens) {
    if (!is_all_letters(tok)) continue;
    ++score.words;
    score.syllables += syllable_count(tok);
  }

  bool in_terminal = false;
  for (char c : text) {
    const bool terminal = c == '.' || c == '!' || c == '?';
    if (terminal && !in_terminal) ++score.sentences;
    in_terminal = terminal;
  }

  if (score.words == 0) {
    score.sentences = 0;
    score.flesch = 206.835;
    return score;
  }
  if (score.sentences == 0) score.sentences = 1;
  const double w = static_cast<double>(score.words);
  const double s = static_cast<double>(score.sentences);
  const double syl = static_cast<double>(score.syllables);
  score.flesch = 206.835 - 1.015 * (w / s) - 84.6 * (syl / w);
  return score;
}

std::vector<FrequencyEntry> frequency_table(
    const std::vector<TokenDoc>& corpus) {
  if (!corpus.empty()) {
    const Stage stage = corpus.front().stage;
    for (const auto& doc : corpus) {
      if (doc.stage != stage) {
        throw std::invalid_argument(
            "frequency_table requires all documents at the same stage");
      }
    }
  }
  FreqMap freq = corpus_frequencies(corpus);
  std::size_t total = 0;
  for (const auto& [tok, count] : freq) total += count;

  std::vector<FrequencyEntry> table;
  table.reserve(freq.size());
  for (const auto& [tok, count] : freq) {
    FrequencyEntry e;
    e.token = tok;
    e.count = count;
    e.percent = total == 0 ? 0.0 : 100.0 * static_cast<double>(count) /
                                        static_cast<double>(total);
    table.push_back(std::move(e));
  }
  std::sort(table.begin(), table.end(),
            [](const FrequencyEntry& a, const FrequencyEntry& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.token < b.token;
            });
  return table;
}

// ---------------------------------------------------------------------------
// Stopword config

StopwordConfig default_stopword_config() {
  StopwordConfig cfg;
  static const char* kEnglish[] = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am",
      "an", "and", "any", "are", "as", "at", "be", "because", "been",
      "before", "being", "below", "between", "both", "but", "by", "can",
      "cannot", "could", "did", "do", "does", "doing", "down", "during",
      "each", "few", "for", "from", "further", "had", "has", "have",
      "having", "he", "her", "here", "hers", "herself", "him", "himself",
      "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself",
      "just", "me", "more", "most", "my", "myself", "no", "nor", "not",
      "now", "of", "off", "on", "once", "one", "only", "or", "other",
      "ought", "our", "ours", "ourselves", "out", "over", "own", "same",
      "she", "should", "so", "some", "such", "than", "that", "the", "their",
      "theirs", "them", "themselves", "then", "there", "these", "they",
      "this", "those", "through", "to", "too", "two", "under", "until",
      "up", "very", "was", "we", "were", "what", "when", "where", "which",
      "while", "who", "whom", "why", "will", "with", "would", "you", "your",
      "yours", "yourself", "yourselves",
  };
  for (const char* w : kEnglish) cfg.english_stopwords.insert(w);

  static const char* kDomain[] = {
      "proof", "theorem", "lemma", "assume", "satisfy", "define", "min",
      "log", "http",
  };
  for (const char* w : kDomain) cfg.domain_stopwords.insert(w);

  static const char* kLyKeep[] = {
      "anomaly", "apply", "assembly", "duopoly", "family", "imply", "italy",
      "monopoly", "multiply", "poly", "reply", "supply",
  };
  for (const char* w : kLyKeep) cfg.ly_keep.insert(w);
  return cfg;
}

void load_stopwords(const std::filesystem::path& file,
                    std::set<std::string>& into) {
  into.clear();
  for (const auto& line : read_lines(file)) {
    const std::string word = to_lower(collapse_whitespace(line));
    if (!word.empty()) into.insert(word);
  }
}

// ---------------------------------------------------------------------------
// Corpus persistence

void save_corpus(const std::vector<TokenDoc>& corpus,
                 const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& doc : corpus) {
    nlohmann::ordered_json j;
    j["id"] = doc.doc_id;
    j["stage"] = stage_name(doc.stage);
    j["tokens"] = doc.tokens;
    j["years"] = doc.years_found;
    out << j.dump() << "\n";
  }
  write_file(path, out.str());
}

std::vector<TokenDoc> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open corpus file: " + path.string());
  }
  std::vector<TokenDoc> corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw std::runtime_error("corpus parse error at line " +
                               std::to_string(lineno) + " in " + path.string());
    }
    TokenDoc doc;
    doc.doc_id = j.at("id").get<std::string>();
    const auto stage = stage_from_name(j.at("stage").get<std::string>());
    if (!stage) {
      throw std::runtime_error("unknown stage at line " +
                               std::to_string(lineno) + " in " + path.string());
    }
    doc.stage = *stage;
    doc.tokens = j.at("tokens").get<std::vector<std::string>>();
    doc.years_found = j.at("years").get<std::vector<int>>();
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace cm::text
