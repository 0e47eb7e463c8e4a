#include "corpusminer/entities.hpp"

#include <algorithm>
#include <filesystem>

#include "corpusminer/io_util.hpp"
#include "doctest.h"

using namespace cm::entities;

namespace {
std::vector<std::string> surnames_of(const std::vector<PersonCandidate>& cs) {
  std::vector<std::string> names;
  for (const auto& c : cs) names.push_back(c.surname);
  return names;
}
}  // namespace

TEST_CASE("author-year citation pattern") {
  const auto cs =
      extract_person_candidates("as shown in Bianchi and Tassinari (2020)");
  CHECK(surnames_of(cs) == std::vector<std::string>{"Bianchi", "Tassinari"});
}

TEST_CASE("empty text yields no candidates") {
  CHECK(extract_person_candidates("").empty());
}

TEST_CASE("plain and-pattern in body text") {
  const auto cs = extract_person_candidates(
      "the clearing framework of Eisenberg and Noe remains standard");
  CHECK(surnames_of(cs) == std::vector<std::string>{"Eisenberg", "Noe"});
}

TEST_CASE("et al pattern") {
  const auto cs = extract_person_candidates("see Keller et al. for details");
  CHECK(surnames_of(cs) == std::vector<std::string>{"Keller"});
}

TEST_CASE("reference line with initials") {
  const auto cs = extract_person_candidates(
      "References\nMoreau, J. (2011). On risk measures. Journal of Risk.\n"
      "[3] Tanaka, M. (2015). Order flow.\n");
  const auto names = surnames_of(cs);
  CHECK(std::find(names.begin(), names.end(), "Moreau") != names.end());
  CHECK(std::find(names.begin(), names.end(), "Tanaka") != names.end());
}

TEST_CASE("lowercase or all-caps words are not candidates") {
  CHECK(extract_person_candidates("alpha and beta").empty());
  CHECK(extract_person_candidates("IEEE and ACM (2020)").empty());
}

TEST_CASE("candidate positions point at the surname occurrence") {
  const std::string text = "as in Keller (2003) and later work";
  const auto cs = extract_person_candidates(text);
  REQUIRE(cs.size() == 1);
  CHECK(text.substr(cs[0].position, 6) == "Keller");
}

TEST_CASE("first-name filter is case-insensitive and idempotent") {
  NameLexicon lexicon;
  lexicon.first_names = {"michele"};
  const std::vector<PersonCandidate> cs = {{"Michele", 0}, {"Bianchi", 10}};
  const auto once = filter_first_names(cs, lexicon);
  CHECK(surnames_of(once) == std::vector<std::string>{"Bianchi"});
  const auto twice = filter_first_names(once, lexicon);
  CHECK(surnames_of(twice) == surnames_of(once));
  CHECK(filter_first_names({}, lexicon).empty());
}

TEST_CASE("filter never increases the candidate count") {
  NameLexicon lexicon;
  lexicon.first_names = {"anna", "james", "maria"};
  const auto cs = extract_person_candidates(
      "Anna and Keller (2010); James and Fontana study this; "
      "Maria et al. agree");
  const auto kept = filter_first_names(cs, lexicon);
  CHECK(kept.size() <= cs.size());
  for (const auto& c : kept) {
    CHECK(c.surname != "Anna");
    CHECK(c.surname != "James");
    CHECK(c.surname != "Maria");
  }
}

TEST_CASE("journal aliases merge to one canonical") {
  const auto aliases = JournalAliases::from_pairs({
      {"Journal of Financial Economics", "Journal of Financial Economics"},
      {"J. of Financial Economics", "Journal of Financial Economics"},
  });
  const EntityCounts counts = count_journals(
      "Published in J. of Financial Economics; see also the Journal of "
      "Financial Economics archives.",
      aliases);
  REQUIRE(counts.counts.size() == 1);
  CHECK(counts.counts.at("Journal of Financial Economics") == 2);
}

TEST_CASE("no alias present gives empty counts") {
  const auto aliases = JournalAliases::from_pairs({{"Econometrica", "Econometrica"}});
  CHECK(count_journals("nothing relevant here", aliases).counts.empty());
}

TEST_CASE("longest alias wins at a shared prefix") {
  const auto aliases = JournalAliases::from_pairs({
      {"Energy", "Energy"},
      {"Energy Economics", "Energy Economics"},
  });
  const EntityCounts counts =
      count_journals("A study in Energy Economics this year.", aliases);
  CHECK(counts.counts.count("Energy") == 0);
  CHECK(counts.counts.at("Energy Economics") == 1);
}

TEST_CASE("exact canonical counted once inside ordinary text") {
  const auto aliases = JournalAliases::from_pairs(
      {{"Quantitative Finance", "Quantitative Finance"}});
  const EntityCounts counts = count_journals(
      "The results appeared in Quantitative Finance last spring.", aliases);
  CHECK(counts.counts.at("Quantitative Finance") == 1);
}

TEST_CASE("word boundaries prevent partial matches") {
  const auto aliases = JournalAliases::from_pairs({{"Science", "Science"}});
  const EntityCounts counts =
      count_journals("Sciences and allied disciplines", aliases);
  CHECK(counts.counts.empty());
}

TEST_CASE("alias conflicts are rejected at load") {
  CHECK_THROWS_WITH_AS(
      JournalAliases::from_pairs({
          {"Physica A", "Physica A"},
          {"physica a", "Physical Review"},
      }),
      doctest::Contains("conflict"), std::runtime_error);
}

TEST_CASE("count conservation over planted spans") {
  const auto aliases = JournalAliases::from_pairs({
      {"Econometrica", "Econometrica"},
      {"Physica A", "Physica A"},
  });
  std::string text;
  for (int i = 0; i < 7; ++i) text += "see Econometrica and more. ";
  for (int i = 0; i < 4; ++i) text += "also Physica A results. ";
  const EntityCounts counts = count_journals(text, aliases);
  std::size_t total = 0;
  for (const auto& [name, c] : counts.counts) total += c;
  CHECK(total == 11);
  CHECK(counts.counts.at("Econometrica") == 7);
  CHECK(counts.counts.at("Physica A") == 4);
}

TEST_CASE("ranking filters strictly and breaks ties alphabetically") {
  EntityCounts counts;
  counts.counts = {{"exactly", 500}, {"above", 501}};
  const auto ranked = rank_entities(counts, 500, 100);
  REQUIRE(ranked.size() == 1);
  CHECK(ranked[0].name == "above");

  EntityCounts ties;
  ties.counts = {{"B", 3}, {"A", 3}, {"C", 1}};
  const auto top2 = rank_entities(ties, 0, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].name == "A");
  CHECK(top2[1].name == "B");

  CHECK(rank_entities(EntityCounts{}, 0, 10).empty());
}

TEST_CASE("corpus person counting honors the exclusion list") {
  NameLexicon lexicon;
  lexicon.first_names = {"anna"};
  const std::vector<std::string> texts = {
      "Keller and Novak (2019) disagree with Keller (2020).",
      "Novak et al. replied in 2021; Anna and Keller concurred.",
  };
  const EntityCounts counts = count_persons(texts, lexicon, {"novak"});
  CHECK(counts.counts.count("Novak") == 0);
  CHECK(counts.counts.count("Anna") == 0);
  CHECK(counts.counts.at("Keller") == 3);
}

TEST_CASE("lexicon loading lowercases and rejects empty files") {
  const auto path = std::filesystem::temp_directory_path() / "cm_names.txt";
  cm::write_file(path, "Anna\nJAMES\n");
  const NameLexicon lexicon = NameLexicon::load(path);
  CHECK(lexicon.first_names.count("anna") == 1);
  CHECK(lexicon.first_names.count("james") == 1);
  cm::write_file(path, "# only a comment\n");
  CHECK_THROWS_AS(NameLexicon::load(path), std::runtime_error);
  std::filesystem::remove(path);
}
