#include "corpusminer/entities.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "corpusminer/io_util.hpp"
#include "corpusminer/text_util.hpp"

namespace cm::entities {

NameLexicon NameLexicon::load(const std::filesystem::path& path) {
  NameLexicon lexicon;
  for (const auto& line : read_lines(path)) {
    const std::string name = to_lower(collapse_whitespace(line));
    if (!name.empty()) lexicon.first_names.insert(name);
  }
  if (lexicon.first_names.empty()) {
    throw std::runtime_error("first-name lexicon is empty: " + path.string());
  }
  return lexicon;
}

namespace {

struct Word {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

bool is_word_char(std::uint32_t cp) {
  return is_latin_letter(cp) || cp == '-' || cp == '\'';
}

/// Splits a line into letter words (hyphen/apostrophe joined) with byte
/// offsets relative to the line start.
std::vector<Word> line_words(std::string_view line) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < line.size()) {
    std::size_t start = i;
    const std::uint32_t cp = utf8_decode(line, i);
    if (!is_latin_letter(cp)) continue;
    std::string text;
    utf8_encode(cp, text);
    std::size_t end = i;
    while (end < line.size()) {
      std::size_t next = end;
      const std::uint32_t c2 = utf8_decode(line, next);
      if (!is_word_char(c2)) break;
      utf8_encode(c2, text);
      end = next;
    }
    words.push_back({std::move(text), start, end});
    i = end;
  }
  return words;
}

bool is_capitalized_surname(const std::string& word) {
  if (word.size() < 2) return false;
  std::size_t i = 0;
  const std::uint32_t first = utf8_decode(word, i);
  if (!is_latin_letter(first) || latin_to_lower(first) == first) return false;
  // The remainder must contain at least one lowercase letter so that
  // all-caps acronyms (IEEE, GARCH) are skipped.
  bool has_lower = false;
  while (i < word.size()) {
    const std::uint32_t cp = utf8_decode(word, i);
    if (is_latin_letter(cp) && latin_to_lower(cp) == cp) {
      has_lower = true;
      break;
    }
  }
  return has_lower;
}

/// Checks "(<4-digit year>" immediately after byte `from` (spaces allowed).
bool followed_by_year_paren(std::string_view line, std::size_t from) {
  std::size_t i = from;
  while (i < line.size() && line[i] == ' ') ++i;
  if (i >= line.size() || line[i] != '(') return false;
  ++i;
  int digits = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
    ++digits;
    ++i;
  }
  return digits == 4;
}

/// Checks ", I." after byte `from` (one or two initials).
bool followed_by_initial(std::string_view line, std::size_t from) {
  std::size_t i = from;
  if (i >= line.size() || line[i] != ',') return false;
  ++i;
  while (i < line.size() && line[i] == ' ') ++i;
  if (i >= line.size()) return false;
  const unsigned char c = static_cast<unsigned char>(line[i]);
  if (!std::isupper(c)) return false;
  ++i;
  return i < line.size() && line[i] == '.';
}

}  // namespace

std::vector<PersonCandidate> extract_person_candidates(
    const std::string& raw_text) {
  std::vector<PersonCandidate> candidates;
  std::set<std::size_t> taken;  // absolute byte position of accepted words

  auto accept = [&](const Word& w, std::size_t line_offset) {
    const std::size_t pos = line_offset + w.begin;
    if (taken.insert(pos).second) {
      candidates.push_back({w.text, pos});
    }
  };

  std::size_t line_start = 0;
  while (line_start <= raw_text.size()) {
    std::size_t line_end = raw_text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = raw_text.size();
    const std::string_view line(raw_text.data() + line_start,
                                line_end - line_start);
    const std::vector<Word> words = line_words(line);

    for (std::size_t w = 0; w < words.size(); ++w) {
      const Word& word = words[w];
      if (!is_capitalized_surname(word.text)) continue;

      // "Name (2003)"
      if (followed_by_year_paren(line, word.end)) {
        accept(word, line_start);
        continue;
      }
      // "Name et al."
      if (w + 2 < words.size() && words[w + 1].text == "et" &&
          words[w + 2].text == "al") {
        accept(word, line_start);
        continue;
      }
      // "Name and Name"
      if (w + 2 < words.size() && words[w + 1].text == "and" &&
          is_capitalized_surname(words[w + 2].text)) {
        accept(word, line_start);
        accept(words[w + 2], line_start);
        continue;
      }
      // Reference-line leading "Surname, I." (first word of the line,
      // allowing a numeric "[12]"-style marker before it).
      if (followed_by_initial(line, word.end)) {
        bool leading = true;
        for (std::size_t b = 0; b < word.begin; ++b) {
          const char c = line[b];
          if (std::isdigit(static_cast<unsigned char>(c)) || c == '[' ||
              c == ']' || c == '.' || c == ' ' || c == '\t') {
            continue;
          }
          leading = false;
          break;
        }
        if (leading && w == 0) accept(word, line_start);
      }
    }
    if (line_end == raw_text.size()) break;
    line_start = line_end + 1;
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const PersonCandidate& a, const PersonCandidate& b) {
              return a.position < b.position;
            });
  return candidates;
}

std::vector<PersonCandidate> filter_first_names(
    const std::vector<PersonCandidate>& candidates,
    const NameLexicon& lexicon) {
  std::vector<PersonCandidate> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (!lexicon.first_names.count(to_lower(c.surname))) {
      out.push_back(c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Journals

JournalAliases JournalAliases::from_pairs(
    const std::vector<std::pair<std::string, std::string>>& alias_canonical) {
  std::map<std::string, std::string> canonical_of;
  JournalAliases aliases;
  for (const auto& [alias, canonical] : alias_canonical) {
    const std::string key = to_lower(collapse_whitespace(alias));
    if (key.empty() || canonical.empty()) continue;
    auto [it, inserted] = canonical_of.emplace(key, canonical);
    if (!inserted && it->second != canonical) {
      throw std::runtime_error("journal alias conflict: \"" + alias +
                               "\" maps to both \"" + it->second +
                               "\" and \"" + canonical + "\"");
    }
    if (inserted) aliases.by_length_.emplace_back(key, canonical);
  }
  std::sort(aliases.by_length_.begin(), aliases.by_length_.end(),
            [](const auto& a, const auto& b) {
              if (a.first.size() != b.first.size()) {
                return a.first.size() > b.first.size();
              }
              return a.first < b.first;
            });
  return aliases;
}

JournalAliases JournalAliases::load_csv(const std::filesystem::path& path) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& line : read_lines(path)) {
    if (line.rfind("alias,", 0) == 0) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 2) continue;
    pairs.emplace_back(fields[0], fields[1]);
  }
  return JournalAliases::from_pairs(pairs);
}

namespace {
bool boundary_before(const std::string& text, std::size_t pos) {
  if (pos == 0) return true;
  return !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
}
bool boundary_after(const std::string& text, std::size_t pos) {
  if (pos >= text.size()) return true;
  return !std::isalnum(static_cast<unsigned char>(text[pos]));
}
}  // namespace

EntityCounts count_journals(const std::string& raw_text,
                            const JournalAliases& aliases) {
  EntityCounts counts;
  counts.kind = EntityKind::journal;
  const std::string lower = to_lower(raw_text);

  std::size_t i = 0;
  while (i < lower.size()) {
    if (!boundary_before(lower, i)) {
      ++i;
      continue;
    }
    bool matched = false;
    for (const auto& [alias, canonical] : aliases.by_length()) {
      if (lower.compare(i, alias.size(), alias) != 0) continue;
      if (!boundary_after(lower, i + alias.size())) continue;
      ++counts.counts[canonical];
      i += alias.size();
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return counts;
}

std::vector<RankedEntity> rank_entities(const EntityCounts& counts,
                                        std::size_t min_occurrences,
                                        std::size_t top_n) {
  std::vector<RankedEntity> ranked;
  for (const auto& [name, count] : counts.counts) {
    if (count > min_occurrences) ranked.push_back({name, count});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedEntity& a, const RankedEntity& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.name < b.name;
            });
  if (ranked.size() > top_n) ranked.resize(top_n);
  return ranked;
}

EntityCounts count_persons(const std::vector<std::string>& texts,
                           const NameLexicon& lexicon,
                           const std::set<std::string>& excluded_surnames) {
  EntityCounts counts;
  counts.kind = EntityKind::person;
  for (const auto& text : texts) {
    const auto survivors =
        filter_first_names(extract_person_candidates(text), lexicon);
    for (const auto& c : survivors) {
      if (excluded_surnames.count(to_lower(c.surname))) continue;
      ++counts.counts[c.surname];
    }
  }
  return counts;
}

std::set<std::string> load_excluded_surnames(
    const std::filesystem::path& path) {
  std::set<std::string> excluded;
  for (const auto& line : read_lines(path)) {
    const std::string name = to_lower(collapse_whitespace(line));
    if (!name.empty()) excluded.insert(name);
  }
  return excluded;
}

}  // namespace cm::entities
