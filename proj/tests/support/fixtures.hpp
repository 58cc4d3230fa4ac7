#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lifelog/corpus.hpp"
#include "lifelog/index.hpp"
#include "lifelog/synthetic.hpp"

namespace fixtures {

using namespace lifelog;

// Small hand-rolled corpora that exercise what the synthetic generator does
// not: mixed UTC offsets, mixed-case and non-ASCII location names, repeated
// detections of one term, records near midnight.
struct FixtureParams {
  std::uint64_t seed = 1;
  std::size_t records = 300;
  bool mixed_offsets = true;
  std::size_t feature_dim = 6;
};

inline const std::vector<std::string>& fixture_concepts() {
  static const std::vector<std::string> v = {"airport_terminal", "kitchen", "office", "street",
                                             "hotel/outdoor", "shop/indoor"};
  return v;
}
inline const std::vector<std::string>& fixture_objects() {
  static const std::vector<std::string> v = {"car", "person", "apple", "banana", "laptop"};
  return v;
}
inline const std::vector<std::string>& fixture_attributes() {
  static const std::vector<std::string> v = {"sunny", "dark", "crowded"};
  return v;
}

struct FixturePlace {
  const char* name;
  double lat, lon;
};

inline const std::vector<FixturePlace>& fixture_places() {
  static const std::vector<FixturePlace> v = {
      {"Home", 53.3498, -6.2603}, {"home", 53.3499, -6.2604}, {"Work", 53.3861, -6.2566},
      {"Café Sol", 53.3440, -6.2672}, {"WORK", 53.3862, -6.2567}, {nullptr, 69.6833, 18.9189},
  };
  return v;
}

inline std::vector<ImageRecord> fixture_records(const FixtureParams& p) {
  std::mt19937_64 rng(p.seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto chance = [&](double prob) { return uni(0, 1) < prob; };
  auto score = [&] {
    // Mix of 2- and 3-decimal scores so per-term thresholds land on ties.
    return chance(0.3) ? std::round(uni(0.01, 1.0) * 100) / 100 : std::round(uni(0.001, 1.0) * 1000) / 1000;
  };

  static constexpr std::int32_t kOffsets[] = {0, 60, -300, 540, 330};
  std::int64_t t = 1471219200;  // 2016-08-15T00:00:00Z
  std::int32_t offset = 60;
  std::vector<float> run;
  std::vector<ImageRecord> out;
  for (std::size_t i = 0; i < p.records; ++i) {
    if (chance(0.06)) {
      t += static_cast<std::int64_t>(uni(1800, 40000));
      if (p.mixed_offsets && chance(0.3)) offset = kOffsets[pick(std::size(kOffsets))];
      run.clear();
    } else {
      t += static_cast<std::int64_t>(uni(20, 70));
    }
    ImageRecord r;
    r.id = "fx" + std::to_string(p.seed) + "_" + std::to_string(i);
    r.timestamp = Timestamp{t, offset};
    const auto& places = fixture_places();
    const auto& place = places[pick(places.size())];
    if (chance(0.85))
      r.geo = GeoPoint{std::round((place.lat + uni(-0.02, 0.02)) * 1e6) / 1e6,
                       std::round((place.lon + uni(-0.02, 0.02)) * 1e6) / 1e6};
    if (place.name && chance(0.8)) r.named_location = place.name;

    auto add = [&](DetectionKind kind, const std::vector<std::string>& vocab, int max_n) {
      int n = static_cast<int>(pick(static_cast<std::size_t>(max_n) + 1));
      for (int k = 0; k < n; ++k) {
        Detection d{kind, vocab[pick(vocab.size())], score(), std::nullopt};
        if (kind == DetectionKind::Object && chance(0.7)) d.bbox = BoundingBox{0.1, 0.2, 0.3, 0.4};
        r.detections.push_back(d);
      }
    };
    add(DetectionKind::Concept, fixture_concepts(), 3);
    add(DetectionKind::Object, fixture_objects(), 3);
    add(DetectionKind::Attribute, fixture_attributes(), 2);

    if (chance(0.9)) {
      if (run.empty() || chance(0.4)) {
        run.assign(p.feature_dim, 0);
        for (auto& x : run) x = static_cast<float>(uni(-1, 1));
      }
      r.feature = run;
      for (auto& x : r.feature) x += static_cast<float>(uni(-0.01, 0.01));
    } else {
      run.clear();
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline Corpus fixture_corpus(const FixtureParams& p) { return Corpus::from_records(fixture_records(p)); }

// Synthetic corpus parsed through the normal ingest path.
inline Corpus synthetic_corpus(const SyntheticParams& p) {
  std::istringstream in(generate_synthetic(p).metadata);
  return ingest_stream(in);
}

inline std::shared_ptr<const IndexSet> index_of(Corpus c, EngineConfig cfg = {}) {
  return std::make_shared<const IndexSet>(build_indexes(std::make_shared<const Corpus>(std::move(c)), std::move(cfg)));
}

inline ImageRecord record_at(std::string id, std::int64_t utc, std::int32_t offset_minutes = 0) {
  ImageRecord r;
  r.id = std::move(id);
  r.timestamp = Timestamp{utc, offset_minutes};
  return r;
}

}  // namespace fixtures
