#include <sstream>

#include <doctest.h>

#include "fixtures.hpp"
#include "lifelog/corpus.hpp"

using namespace lifelog;

namespace {

Corpus ingest_text(const std::string& text) {
  std::istringstream in(text);
  return ingest_stream(in);
}

std::string ingest_error(const std::string& text) {
  try {
    ingest_text(text);
  } catch (const IngestError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("empty input gives an empty corpus") {
    CHECK(ingest_text("").empty());
    CHECK(ingest_text("\n   \n").empty());
  }

  TEST_CASE("minimal record") {
    Corpus c = ingest_text(R"({"id":"a","ts":"2016-09-05T06:30:00+01:00"})");
    REQUIRE(c.size() == 1);
    CHECK(c[0].cluster_id == 0);
    CHECK(!c[0].geo);
    CHECK(!c[0].named_location);
    CHECK(c[0].detections.empty());
    CHECK(!c[0].has_feature());
  }

  TEST_CASE("full record is parsed and normalized") {
    Corpus c = ingest_text(
        R"({"id":"a","ts":"2016-09-05T06:30:00+01:00","lat":53.3,"lon":-6.2,"loc":" Home ",)"
        R"("detections":[{"kind":"Object","term":" Car ","score":0.8,"bbox":[0.1,0.2,0.3,0.4]},)"
        R"({"kind":"concept","term":"street","score":0.5}],"feat":[3,4]})");
    const ImageRecord& r = c[0];
    CHECK(r.geo == GeoPoint{53.3, -6.2});
    CHECK(*r.named_location == "Home");
    REQUIRE(r.detections.size() == 2);
    CHECK(r.detections[0].kind == DetectionKind::Object);
    CHECK(r.detections[0].term == "car");
    CHECK(r.detections[0].bbox == BoundingBox{0.1, 0.2, 0.3, 0.4});
    CHECK(r.feature[0] == doctest::Approx(0.6));
    CHECK(r.feature[1] == doctest::Approx(0.8));
  }

  TEST_CASE("records are ordered by time then id") {
    Corpus c = ingest_text(R"({"id":"b","ts":"2016-09-05T06:30:00Z"}
{"id":"a","ts":"2016-09-05T07:30:00+01:00"}
{"id":"c","ts":"2016-09-05T06:00:00Z"})");
    CHECK(c[0].id == "c");
    CHECK(c[1].id == "a");
    CHECK(c[2].id == "b");
    CHECK(c.ordinal_of("b") == 2u);
    CHECK(!c.ordinal_of("zz"));
  }

  TEST_CASE("validation errors carry line and field") {
    CHECK(ingest_error("\n{\"id\":\"a\"}") == "line 2, field 'ts': required RFC-3339 string");
    CHECK(ingest_error("not json").find("line 1") == 0);
    CHECK(ingest_error(R"({"id":"a","ts":"2016-09-05T06:30:00"})").find("field 'ts'") != std::string::npos);
    CHECK(ingest_error(R"({"id":"a","ts":"2016-09-05T06:30:00Z","lat":91,"lon":0})").find("field 'lat'") !=
          std::string::npos);
    CHECK(ingest_error(R"({"id":"a","ts":"2016-09-05T06:30:00Z","lat":1})").find("field 'lon'") !=
          std::string::npos);
    CHECK(ingest_error(R"({"id":"a","ts":"2016-09-05T06:30:00Z","detections":[{"kind":"thing","term":"x","score":0.5}]})")
              .find("detections[0].kind") != std::string::npos);
    CHECK(ingest_error(R"({"id":"a","ts":"2016-09-05T06:30:00Z","detections":[{"kind":"object","term":"x","score":1.5}]})")
              .find("detections[0].score") != std::string::npos);
    CHECK(ingest_error(R"({"id":"a","ts":"2016-09-05T06:30:00Z","detections":[{"kind":"concept","term":"x","score":0.5,"bbox":[0,0,1,1]}]})")
              .find("only objects") != std::string::npos);
    CHECK(ingest_error(R"({"id":"a","ts":"2016-09-05T06:30:00Z","feat":[0,0]})").find("zero vector") !=
          std::string::npos);
  }

  TEST_CASE("duplicate ids and dimension changes are reported") {
    std::string dup = "{\"id\":\"a\",\"ts\":\"2016-09-05T06:30:00Z\"}\n{\"id\":\"a\",\"ts\":\"2016-09-05T06:31:00Z\"}";
    CHECK(ingest_error(dup) == "line 2, field 'id': duplicate id 'a' (first seen on line 1)");
    std::string dims = "{\"id\":\"a\",\"ts\":\"2016-09-05T06:30:00Z\",\"feat\":[1,0]}\n"
                       "{\"id\":\"b\",\"ts\":\"2016-09-05T06:31:00Z\",\"feat\":[1,0,0]}";
    CHECK(ingest_error(dims).find("line 2, field 'feat'") == 0);
  }

  TEST_CASE("json line round trip") {
    auto records = fixtures::fixture_records({.seed = 3, .records = 50});
    for (const auto& r : records) {
      ImageRecord back = parse_record_line(record_to_json_line(r), 1);
      CHECK(back.id == r.id);
      CHECK(back.timestamp == r.timestamp);
      CHECK(back.geo == r.geo);
      CHECK(back.named_location == r.named_location);
      CHECK(back.detections == r.detections);
      REQUIRE(back.feature.size() == r.feature.size());
    }
  }

  TEST_CASE("time windows are half-open and may wrap") {
    TimeWindow afternoon{13 * 3600, 17 * 3600};
    CHECK(afternoon.contains(13 * 3600));
    CHECK(!afternoon.contains(17 * 3600));
    CHECK(afternoon.contains(17 * 3600 - 1));
    TimeWindow night{22 * 3600, 5 * 3600};
    CHECK(night.contains(23 * 3600));
    CHECK(night.contains(0));
    CHECK(!night.contains(5 * 3600));
    CHECK(!night.contains(12 * 3600));
  }

  TEST_CASE("default named times") {
    auto t = NamedTimeTable::defaults();
    CHECK(t.windows().size() == 5);
    CHECK(*t.find("afternoon") == TimeWindow{13 * 3600, 17 * 3600});
    CHECK(t.find("teatime") == nullptr);
    CHECK_THROWS_AS(t.set("  ", {0, 1}), std::invalid_argument);
  }
}
