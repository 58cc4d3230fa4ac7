#include <doctest.h>

#include "fixtures.hpp"
#include "lifelog/explore.hpp"

using namespace lifelog;

namespace {

std::shared_ptr<const IndexSet> synthetic_index() {
  static auto idx = [] {
    SyntheticParams p;
    p.seed = 3;
    p.days = 20;
    p.images_per_day = 80;
    return fixtures::index_of(fixtures::synthetic_corpus(p));
  }();
  return idx;
}

}  // namespace

TEST_SUITE("autocomplete") {
  TEST_CASE("substring match finds the five indoor concepts") {
    auto r = autocomplete("indoor", std::nullopt, 20, *synthetic_index());
    std::set<std::string> terms;
    for (const auto& s : r.suggestions) {
      CHECK(s.kind == SuggestionKind::Concept);
      terms.insert(s.term);
    }
    CHECK(terms == std::set<std::string>{"bedroom/indoor", "gym/indoor", "indoor_pool", "library/indoor",
                                         "shop/indoor"});
    CHECK(autocomplete("InDoOr", std::nullopt, 20, *synthetic_index()).suggestions.size() == 5);
  }

  TEST_CASE("counts are posting lengths, sorted descending") {
    auto idx = synthetic_index();
    auto r = autocomplete("", SuggestionKind::Concept, 100, *idx);
    CHECK(r.suggestions.size() == Vocabulary::defaults().concepts.size());
    for (std::size_t i = 0; i < r.suggestions.size(); ++i) {
      const auto& s = r.suggestions[i];
      CHECK(s.count == idx->postings(DetectionKind::Concept, s.term).size());
      CHECK(s.examples.size() == 3);
      if (i) CHECK(r.suggestions[i - 1].count >= s.count);
    }
    CHECK(autocomplete("", SuggestionKind::Concept, 4, *idx).suggestions.size() == 4);
  }

  TEST_CASE("dashes list keywords") {
    auto idx = synthetic_index();
    CHECK(autocomplete("--", std::nullopt, 20, *idx).keywords.size() == 7);
    CHECK(autocomplete("-", std::nullopt, 20, *idx).keywords.size() == 7);
    auto o = autocomplete("-o", std::nullopt, 20, *idx);
    REQUIRE(o.keywords.size() == 1);
    CHECK(o.keywords[0].long_form == "--objects");
    CHECK(o.suggestions.empty());
  }

  TEST_CASE("timenames carry their window and image count") {
    auto idx = synthetic_index();
    auto r = autocomplete("after", SuggestionKind::Timename, 20, *idx);
    REQUIRE(r.suggestions.size() == 1);
    const auto& s = r.suggestions[0];
    CHECK(s.term == "afternoon");
    CHECK(*s.window == TimeWindow{13 * 3600, 17 * 3600});
    std::size_t n = 0;
    for (const auto& rec : idx->corpus().records()) n += s.window->contains(rec.timestamp.local_time_of_day());
    CHECK(s.count == n);
  }

  TEST_CASE("locations use the display spelling") {
    auto idx = synthetic_index();
    auto r = autocomplete("home", SuggestionKind::Location, 20, *idx);
    REQUIRE(r.suggestions.size() == 1);
    CHECK(r.suggestions[0].term == "Home");
    CHECK(r.suggestions[0].count == idx->location("home").size());
  }

  TEST_CASE("max must be positive") {
    CHECK_THROWS_AS(autocomplete("x", std::nullopt, 0, *synthetic_index()), std::invalid_argument);
  }
}
