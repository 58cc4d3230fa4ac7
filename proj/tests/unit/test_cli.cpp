#include <doctest.h>

#include "fixtures.hpp"
#include "lifelog/engine.hpp"
#include "process.hpp"
#include "service_harness.hpp"

using namespace lifelog;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = fs::path(LIFELOG_TEST_TMP) / "cli";

proc::Output cli(std::vector<std::string> args) {
  args.insert(args.begin(), LIFELOG_CLI);
  return proc::run(args, kTmp);
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::create_directories(kTmp);
  fs::path p = kTmp / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("gen is deterministic") {
    auto a = kTmp / "gen_a.jsonl", b = kTmp / "gen_b.jsonl", m = kTmp / "gen_a.json";
    fs::create_directories(kTmp);
    auto ra = cli({"gen", "--seed", "5", "--days", "3", "--images-per-day", "40", "--out", a.string(), "--manifest",
                   m.string()});
    auto rb = cli({"gen", "--seed", "5", "--days", "3", "--images-per-day", "40", "--out", b.string()});
    REQUIRE(ra.exit_code == 0);
    REQUIRE(rb.exit_code == 0);
    CHECK(proc::slurp(a) == proc::slurp(b));
    CHECK(proc::lines(proc::slurp(a)).size() == 120);
    SyntheticParams p;
    p.seed = 5;
    p.days = 3;
    p.images_per_day = 40;
    CHECK(proc::slurp(a) == generate_synthetic(p).metadata);
    CHECK(nlohmann::json::parse(proc::slurp(m)) == generate_synthetic(p).manifest);
  }

  TEST_CASE("ingest reports statistics and line-numbered errors") {
    auto good = write_file("good.jsonl", "{\"id\":\"a\",\"ts\":\"2016-09-05T06:30:00+01:00\"}\n\n"
                                         "{\"id\":\"b\",\"ts\":\"2016-09-06T06:30:00+01:00\"}\n");
    auto r = cli({"ingest", good.string()});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("records\t2\n") != std::string::npos);
    CHECK(r.out.find("days\t2\n") != std::string::npos);

    auto bad = write_file("bad.jsonl", "{\"id\":\"a\",\"ts\":\"2016-09-05T06:30:00+01:00\"}\n"
                                       "{\"id\":\"b\",\"ts\":\"2016-09-05T06:30:00+01:00\",\"lat\":\"x\",\"lon\":1}\n");
    auto e = cli({"ingest", bad.string()});
    CHECK(e.exit_code != 0);
    CHECK(e.err.find("line 2") != std::string::npos);
    CHECK(e.err.find("lat") != std::string::npos);
    CHECK(cli({"ingest", (kTmp / "missing.jsonl").string()}).exit_code != 0);
  }

  TEST_CASE("query output equals the HTTP search") {
    SyntheticParams p;
    p.seed = 9;
    p.days = 10;
    p.images_per_day = 60;
    auto path = write_file("query.jsonl", generate_synthetic(p).metadata);
    auto idx = fixtures::index_of(fixtures::synthetic_corpus(p));
    harness::RunningService s(idx, {});
    for (std::string q : {"--concepts hotel/outdoor --objects car,person", "-c kitchen -t morning", "-w monday"}) {
      auto r = cli({"query", q, "--corpus", path.string(), "--limit", "5000"});
      REQUIRE(r.exit_code == 0);
      std::vector<std::string> got;
      for (const auto& l : proc::lines(r.out)) got.push_back(proc::first_field(l));
      auto http = harness::body(s.client().Get("/api/search?limit=5000&q=" + harness::encode(q)));
      std::vector<std::string> expect;
      for (const auto& h : http["hits"]) expect.push_back(h["id"]);
      CHECK(got == expect);
      auto j = cli({"query", q, "--corpus", path.string(), "--limit", "5000", "--json"});
      CHECK(nlohmann::json::parse(j.out)["hits"] == http["hits"]);
    }
  }

  TEST_CASE("parse errors exit 2 with a caret") {
    auto path = write_file("tiny.jsonl", "{\"id\":\"a\",\"ts\":\"2016-09-05T06:30:00+01:00\"}\n");
    auto r = cli({"query", "-o apple(1.5)", "--corpus", path.string()});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error: stage 1:") == 0);
    CHECK(r.err.find("\n  -o apple(1.5)\n           ^") != std::string::npos);
    auto t = cli({"query", "-o apple", "--then", "-x y", "--corpus", path.string()});
    CHECK(t.exit_code == 2);
    CHECK(t.err.find("error: stage 2:") == 0);
  }

  TEST_CASE("temporal query and submit") {
    SyntheticParams p;
    p.seed = 42;
    p.days = 28;
    p.images_per_day = 36;
    p.plant_story = true;
    auto sc = generate_synthetic(p);
    auto path = write_file("story.jsonl", sc.metadata);
    auto r = cli({"query", "-c airport_terminal(0.9) -t morning", "--then", "-c car_interior -o car", "--then",
                  "-c meeting_room", "--corpus", path.string()});
    REQUIRE(r.exit_code == 0);
    auto rows = proc::lines(r.out);
    REQUIRE(!rows.empty());
    bool found = false;
    for (const auto& row : rows) found |= proc::first_field(row) == sc.manifest["story"]["target_id"];
    CHECK(found);

    std::string target = sc.manifest["story"]["target_id"];
    harness::RunningMock mock({target});
    CHECK(cli({"submit", target, "--corpus", path.string(), "--url", mock.url()}).exit_code == 0);
    auto wrong = cli({"submit", sc.manifest["story"]["taxi_ids"][0], "--corpus", path.string(), "--url", mock.url()});
    CHECK(wrong.exit_code == 3);
    CHECK(wrong.out.find("\"rejected\"") != std::string::npos);
  }
}
