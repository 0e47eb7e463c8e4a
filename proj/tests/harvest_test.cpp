#include "corpusminer/harvest.hpp"

#include <chrono>
#include <filesystem>
#include <set>

#include "corpusminer/io_util.hpp"
#include "corpusminer/xml.hpp"
#include "doctest.h"

using namespace cm::harvest;
namespace fs = std::filesystem;

namespace {
const fs::path kFixtures = FIXTURE_DIR;

DocumentRecord make_record(const std::string& id, int year,
                           std::vector<std::string> categories,
                           const std::string& title = "t") {
  DocumentRecord r;
  r.id = id;
  r.title = title;
  r.year = year;
  r.authors = {"A Author"};
  r.all_categories = std::move(categories);
  r.reference_category = assign_reference_category(r.all_categories);
  r.abstract = "abstract";
  return r;
}
}  // namespace

TEST_CASE("fixture feed parses into two records") {
  const auto records =
      parse_atom_feed(cm::read_file(kFixtures / "atom_page1.xml"));
  REQUIRE(records.size() == 2);
  CHECK(records[0].id == "2005.06390");  // version suffix stripped
  CHECK(records[0].title ==
        "Option pricing under a two-factor stochastic volatility model");
  CHECK(records[0].year == 2020);
  CHECK(records[0].authors ==
        std::vector<std::string>{"Ada Keller", "Luc Moreau"});
  CHECK(records[0].all_categories ==
        std::vector<std::string>{"q-fin.PR", "q-fin.CP"});
  REQUIRE(records[0].reference_category.has_value());
  CHECK(*records[0].reference_category == "q-fin.PR");
  REQUIRE(records[0].doi.has_value());
  CHECK(*records[0].doi == "10.1000/fixture.1");
  REQUIRE(records[0].updated.has_value());
  CHECK(*records[0].updated == "2020-06-01");
  CHECK(records[0].abstract.find("&") != std::string::npos);

  CHECK(records[1].id == "2006.01001");
  REQUIRE(records[1].reference_category.has_value());
  CHECK(*records[1].reference_category == "q-fin.CP");  // first q-fin code
}

TEST_CASE("old-style ids keep their slash and lose the version") {
  const auto records =
      parse_atom_feed(cm::read_file(kFixtures / "atom_page2.xml"));
  REQUIRE(records.size() == 1);
  CHECK(records[0].id == "q-fin/0701001");
}

TEST_CASE("empty feed parses to an empty list") {
  const auto records = parse_atom_feed(
      "<feed xmlns=\"http://www.w3.org/2005/Atom\"></feed>");
  CHECK(records.empty());
}

TEST_CASE("entry missing its id fails naming entry 0") {
  try {
    parse_atom_feed(cm::read_file(kFixtures / "atom_missing_id.xml"));
    FAIL("expected FeedParseError");
  } catch (const FeedParseError& e) {
    CHECK(e.entry_index == 0);
  }
}

TEST_CASE("malformed xml raises an error") {
  CHECK_THROWS_AS(parse_atom_feed("<feed><entry></feed>"), cm::xml::XmlError);
}

TEST_CASE("reference category rule") {
  CHECK(assign_reference_category({"cs.LG", "q-fin.PM", "q-fin.PR"}) ==
        std::optional<std::string>("q-fin.PM"));
  CHECK(assign_reference_category({"q-fin.ST"}) ==
        std::optional<std::string>("q-fin.ST"));
  CHECK_FALSE(assign_reference_category({"cs.LG", "stat.ML"}).has_value());
}

TEST_CASE("reference category ignores appended non-q-fin codes") {
  std::vector<std::string> categories = {"q-fin.PM", "q-fin.PR"};
  const auto before = assign_reference_category(categories);
  categories.push_back("cs.LG");
  categories.push_back("math.PR");
  CHECK(assign_reference_category(categories) == before);
}

TEST_CASE("category code validation") {
  CHECK(is_valid_category_code("q-fin.PR"));
  CHECK(is_valid_category_code("cs.LG"));
  CHECK_FALSE(is_valid_category_code("qfin"));
  CHECK_FALSE(is_valid_category_code("q-fin."));
  CHECK_FALSE(is_valid_category_code("q-fin.price"));
}

TEST_CASE("store is an idempotent upsert") {
  const auto path = fs::temp_directory_path() / "cm_store_test.ndjson";
  fs::remove(path);
  const std::vector<DocumentRecord> batch = {
      make_record("2001.00001", 2020, {"q-fin.PR"}),
      make_record("2001.00002", 2020, {"q-fin.PM"}),
      make_record("2001.00003", 2020, {"q-fin.RM"}),
  };
  CHECK(store_records(batch, path) == 3);
  CHECK(store_records(batch, path) == 3);
  CHECK(load_records(path).size() == 3);
  fs::remove(path);
}

TEST_CASE("empty batch leaves the store untouched") {
  const auto path = fs::temp_directory_path() / "cm_store_empty.ndjson";
  fs::remove(path);
  CHECK(store_records({}, path) == 0);
  CHECK_FALSE(fs::exists(path));
}

TEST_CASE("duplicate ids in one batch keep the last title") {
  const auto path = fs::temp_directory_path() / "cm_store_dup.ndjson";
  fs::remove(path);
  const std::vector<DocumentRecord> batch = {
      make_record("2001.00009", 2020, {"q-fin.PR"}, "first title"),
      make_record("2001.00009", 2020, {"q-fin.PR"}, "second title"),
  };
  CHECK(store_records(batch, path) == 1);
  const auto records = load_records(path);
  REQUIRE(records.size() == 1);
  CHECK(records[0].title == "second title");
  fs::remove(path);
}

TEST_CASE("store round trip preserves every field") {
  const auto path = fs::temp_directory_path() / "cm_store_rt.ndjson";
  fs::remove(path);
  DocumentRecord r = make_record("2002.12345", 2020, {"cs.LG", "q-fin.TR"});
  r.doi = "10.1000/x";
  r.updated = "2021-02-03";
  r.abstract = "text with \"quotes\" and unicode é";
  store_records({r}, path);
  const auto loaded = load_records(path);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].id == r.id);
  CHECK(loaded[0].title == r.title);
  CHECK(loaded[0].authors == r.authors);
  CHECK(loaded[0].all_categories == r.all_categories);
  CHECK(loaded[0].reference_category == r.reference_category);
  CHECK(loaded[0].year == r.year);
  CHECK(loaded[0].abstract == r.abstract);
  CHECK(loaded[0].doi == r.doi);
  CHECK(loaded[0].updated == r.updated);
  fs::remove(path);
}

TEST_CASE("record validation catches bad years and categories") {
  DocumentRecord r = make_record("x", 1800, {"q-fin.PR"});
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r.year = 2020;
  r.reference_category = "q-fin.ST";  // not in all_categories
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("query validation") {
  HarvestQuery q;
  q.page_size = 2001;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q.page_size = 100;
  q.from_year = 2022;
  q.to_year = 2020;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("pagination over fixture pages has no duplicate ids") {
  HarvestQuery q;
  q.page_size = 2;
  q.from_year = 1991;
  q.to_year = 2030;
  auto make = [&] {
    return Harvester(std::make_unique<FileFeedSource>(
                         std::vector<fs::path>{kFixtures / "atom_page1.xml",
                                               kFixtures / "atom_page2.xml"}),
                     std::chrono::milliseconds(0));
  };
  Harvester h1 = make();
  const auto all = h1.fetch_all(q);
  REQUIRE(all.size() == 3);
  std::set<std::string> ids;
  for (const auto& r : all) ids.insert(r.id);
  CHECK(ids.size() == 3);

  Harvester h2 = make();
  const auto again = h2.fetch_all(q);
  REQUIRE(again.size() == all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(again[i].id == all[i].id);
  }
}

TEST_CASE("fetch_page rejects offsets off the page grid") {
  HarvestQuery q;
  q.page_size = 2;
  Harvester h(std::make_unique<FileFeedSource>(
                  std::vector<fs::path>{kFixtures / "atom_page1.xml"}),
              std::chrono::milliseconds(0));
  CHECK_THROWS_AS(h.fetch_page(q, 1), std::invalid_argument);
}

namespace {
class FailingSource : public FeedSource {
 public:
  std::string fetch(const HarvestQuery&, std::size_t) override {
    throw std::runtime_error("simulated transport failure");
  }
};

class FlakySource : public FeedSource {
 public:
  explicit FlakySource(int failures) : failures_left_(failures) {}
  std::string fetch(const HarvestQuery&, std::size_t) override {
    if (failures_left_-- > 0) {
      throw std::runtime_error("transient failure");
    }
    return cm::read_file(kFixtures / "atom_page2.xml");
  }

 private:
  int failures_left_;
};
}  // namespace

TEST_CASE("a transient failure is retried within the attempt budget") {
  HarvestQuery q;
  q.page_size = 2;
  Harvester h(std::make_unique<FlakySource>(2), std::chrono::milliseconds(0),
              3);
  const auto records = h.fetch_page(q, 0);
  REQUIRE(records.size() == 1);
  CHECK(records[0].id == "q-fin/0701001");
}

TEST_CASE("transport failures surface with the attempt count") {
  HarvestQuery q;
  q.page_size = 2;
  Harvester h(std::make_unique<FailingSource>(), std::chrono::milliseconds(0),
              3);
  try {
    h.fetch_page(q, 0);
    FAIL("expected HarvestError");
  } catch (const HarvestError& e) {
    CHECK(e.attempts == 3);
    CHECK(std::string(e.what()).find("3 attempts") != std::string::npos);
  }
}

TEST_CASE("rate limiter spaces permits by its interval") {
  RateLimiter limiter(std::chrono::milliseconds(60));
  const auto start = std::chrono::steady_clock::now();
  limiter.wait();
  limiter.wait();
  limiter.wait();
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  CHECK(elapsed.count() >= 120);
}

TEST_CASE("the default politeness interval is three seconds") {
  CHECK(kPolitenessInterval == std::chrono::milliseconds(3000));
}

TEST_CASE("query url composition") {
  HarvestQuery q;
  q.category_filter = {"q-fin.PR", "q-fin.PM"};
  q.page_size = 200;
  const std::string path = HttpFeedSource::build_path(q, 400);
  CHECK(path.find("search_query=cat:q-fin.PR+OR+cat:q-fin.PM") !=
        std::string::npos);
  CHECK(path.find("start=400") != std::string::npos);
  CHECK(path.find("max_results=200") != std::string::npos);
}

TEST_CASE("url list emission") {
  const auto path = fs::temp_directory_path() / "cm_urls.txt";
  write_url_list({make_record("2001.00001", 2020, {"q-fin.PR"})}, path);
  CHECK(cm::read_file(path) == "https://arxiv.org/pdf/2001.00001\n");
  fs::remove(path);
}
