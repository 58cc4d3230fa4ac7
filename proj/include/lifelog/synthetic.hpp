#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lifelog/civil_time.hpp"

namespace lifelog {

struct Vocabulary {
  std::vector<std::string> concepts;
  std::vector<std::string> objects;
  std::vector<std::string> attributes;

  // Contains exactly five concept terms with "indoor" in their name.
  static Vocabulary defaults();
};

struct SyntheticParams {
  std::uint64_t seed = 1;
  int days = 1;
  int images_per_day = 100;
  Vocabulary vocab = Vocabulary::defaults();
  Date start_date = Date{std::chrono::year{2016} / 8 / 15};  // a monday
  std::int32_t utc_offset_minutes = 60;
  std::size_t feature_dim = 8;
  // Plants an airport -> taxi -> meeting morning on a monday, plus
  // distractor airport images on other days and times.
  bool plant_story = false;
};

inline constexpr int kMaxImagesPerDay = 1350;

struct SyntheticCorpus {
  std::string metadata;     // JSON lines, one record per line
  nlohmann::json manifest;  // ground truth, see docs/formats.md
};

// Same params, same bytes. Throws std::invalid_argument for days < 1,
// images_per_day outside [1, kMaxImagesPerDay] (>= 30 with plant_story),
// an empty vocabulary list or feature_dim < 2.
SyntheticCorpus generate_synthetic(const SyntheticParams& params);

}  // namespace lifelog
