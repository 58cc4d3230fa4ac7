#include <doctest.h>

#include "fixtures.hpp"
#include "lifelog/index.hpp"
#include "lifelog/text.hpp"
#include "query_gen.hpp"

using namespace lifelog;

TEST_SUITE("index") {
  TEST_CASE("postings agree with a linear scan") {
    Corpus c = fixtures::fixture_corpus({.seed = 4, .records = 500});
    auto idx = fixtures::index_of(c);
    querygen::Gen g(4);
    auto v = querygen::observe(c);
    for (int i = 0; i < 20; ++i) {
      auto kind = static_cast<DetectionKind>(g.pick(3));
      const auto& pool = kind == DetectionKind::Concept ? v.concepts
                         : kind == DetectionKind::Object ? v.objects
                                                         : v.attributes;
      std::string term = pool[g.pick(pool.size())];
      std::vector<Posting> expect;
      for (std::uint32_t o = 0; o < c.size(); ++o)
        for (const auto& d : c[o].detections)
          if (d.kind == kind && d.term == term) expect.push_back({o, d.score});
      auto got = idx->postings(kind, term);
      CHECK(std::vector<Posting>(got.begin(), got.end()) == expect);
    }
    CHECK(idx->postings(DetectionKind::Object, "unicorn").empty());
  }

  TEST_CASE("day, weekday, location, geo and cluster indexes") {
    Corpus c = fixtures::fixture_corpus({.seed = 8, .records = 400});
    auto idx = fixtures::index_of(c);
    std::map<Date, std::vector<std::uint32_t>> days;
    std::map<std::string, std::vector<std::uint32_t>> locs;
    std::vector<std::uint32_t> geo;
    std::map<std::int32_t, std::vector<std::uint32_t>> clusters;
    for (std::uint32_t o = 0; o < c.size(); ++o) {
      days[c[o].timestamp.local_date()].push_back(o);
      if (c[o].named_location) locs[to_lower(*c[o].named_location)].push_back(o);
      if (c[o].geo) geo.push_back(o);
      clusters[c[o].cluster_id].push_back(o);
    }
    CHECK(idx->day_index() == days);
    for (const auto& [d, os] : days) {
      auto w = idx->weekday_dates(weekday_of(d));
      CHECK(std::find(w.begin(), w.end(), d) != w.end());
    }
    std::size_t weekday_total = 0;
    for (unsigned w = 0; w < 7; ++w) weekday_total += idx->weekday_dates(w).size();
    CHECK(weekday_total == days.size());
    for (const auto& [name, os] : locs) {
      auto got = idx->location(name);
      CHECK(std::vector<std::uint32_t>(got.begin(), got.end()) == os);
    }
    CHECK(idx->location_index().size() == locs.size());
    auto gl = idx->geo_ordinals();
    CHECK(std::vector<std::uint32_t>(gl.begin(), gl.end()) == geo);
    CHECK(idx->cluster_count() == clusters.size());
    for (const auto& [cid, os] : clusters) {
      auto got = idx->cluster(cid);
      CHECK(std::vector<std::uint32_t>(got.begin(), got.end()) == os);
    }
  }

  TEST_CASE("location display uses the most common spelling") {
    std::vector<ImageRecord> rs;
    const char* names[] = {"WORK", "Work", "Work", "work"};
    for (int i = 0; i < 4; ++i) {
      auto r = fixtures::record_at("r" + std::to_string(i), 1000 + i * 10);
      r.named_location = names[i];
      rs.push_back(r);
    }
    auto idx = fixtures::index_of(Corpus::from_records(rs));
    CHECK(idx->location_display("work") == "Work");
  }

  TEST_CASE("timename counts") {
    std::vector<ImageRecord> rs = {fixtures::record_at("a", 13 * 3600), fixtures::record_at("b", 17 * 3600),
                                   fixtures::record_at("c", 16 * 3600 + 3599)};
    auto idx = fixtures::index_of(Corpus::from_records(rs));
    CHECK(idx->timename_count("afternoon") == 2);
    CHECK(idx->timename_count("teatime") == 0);
  }

  TEST_CASE("empty corpus and single posting") {
    auto empty = fixtures::index_of(Corpus{});
    CHECK(empty->term_index().empty());
    CHECK(empty->day_index().empty());
    CHECK(empty->geo_ordinals().empty());
    CHECK(empty->cluster_count() == 0);

    auto r = fixtures::record_at("solo", 5000);
    r.detections.push_back({DetectionKind::Object, "car", 0.5, std::nullopt});
    auto one = fixtures::index_of(Corpus::from_records({r}));
    REQUIRE(one->postings(DetectionKind::Object, "car").size() == 1);
    CHECK(one->postings(DetectionKind::Object, "car")[0] == Posting{0, 0.5});
  }
}
