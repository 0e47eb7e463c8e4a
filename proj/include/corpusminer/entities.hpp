#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cm::entities {

/// Lowercased first names used to filter person candidates.
struct NameLexicon {
  std::set<std::string> first_names;
  static NameLexicon load(const std::filesystem::path& path);
};

struct PersonCandidate {
  std::string surname;
  std::size_t position = 0;  // byte offset in the source text
};

/// Deterministic citation-pattern heuristics over raw text. A capitalized
/// word becomes a candidate when it is followed by "(<year>" or "et al",
/// sits on either side of "and" next to another capitalized word, or
/// leads a reference line as "Surname, I.". One candidate per occurrence.
std::vector<PersonCandidate> extract_person_candidates(
    const std::string& raw_text);

/// Case-insensitive lexicon filter; survivors keep their positions.
std::vector<PersonCandidate> filter_first_names(
    const std::vector<PersonCandidate>& candidates, const NameLexicon& lexicon);

enum class EntityKind { person, journal };

struct EntityCounts {
  EntityKind kind = EntityKind::person;
  std::map<std::string, std::size_t> counts;  // canonical name -> occurrences
};

/// alias (lowercased) -> canonical name. Loading detects the same alias
/// mapped to two canonicals and fails naming the conflict.
class JournalAliases {
 public:
  static JournalAliases load_csv(const std::filesystem::path& path);
  static JournalAliases from_pairs(
      const std::vector<std::pair<std::string, std::string>>& alias_canonical);

  const std::vector<std::pair<std::string, std::string>>& by_length() const {
    return by_length_;
  }

 private:
  // (alias lowercase, canonical), sorted by alias length descending.
  std::vector<std::pair<std::string, std::string>> by_length_;
};

/// Case-insensitive, longest-alias-first matching at word boundaries;
/// matched spans are consumed so occurrences never overlap.
EntityCounts count_journals(const std::string& raw_text,
                            const JournalAliases& aliases);

struct RankedEntity {
  std::string name;
  std::size_t count = 0;
};

/// Keeps entries with count strictly above min_occurrences, sorted by
/// count descending (ties alphabetical), truncated to top_n.
std::vector<RankedEntity> rank_entities(const EntityCounts& counts,
                                        std::size_t min_occurrences,
                                        std::size_t top_n);

/// Corpus-level helpers used by the CLI stage.
EntityCounts count_persons(const std::vector<std::string>& texts,
                           const NameLexicon& lexicon,
                           const std::set<std::string>& excluded_surnames);
std::set<std::string> load_excluded_surnames(const std::filesystem::path& path);

}  // namespace cm::entities
