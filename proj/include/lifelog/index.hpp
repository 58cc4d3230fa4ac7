#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lifelog/corpus.hpp"

namespace lifelog {

struct Posting {
  std::uint32_t ordinal;
  double score;
  friend bool operator==(const Posting&, const Posting&) = default;
};

using TermKey = std::pair<DetectionKind, std::string>;

struct EngineConfig {
  NamedTimeTable times = NamedTimeTable::defaults();
  // Radius applied to "lat,lon" terms in --location clauses.
  double coordinate_match_km = 1.0;
};

// Lookup structures over one immutable corpus. Cheap to share via
// shared_ptr<const IndexSet>; nothing mutates after build_indexes returns.
class IndexSet {
 public:
  const Corpus& corpus() const { return *corpus_; }
  std::shared_ptr<const Corpus> corpus_ptr() const { return corpus_; }
  const EngineConfig& config() const { return config_; }

  // Postings sorted by ordinal. One entry per detection, so a record with
  // two detections of the same term appears twice.
  std::span<const Posting> postings(DetectionKind kind, const std::string& term) const;
  const std::map<TermKey, std::vector<Posting>>& term_index() const { return term_index_; }

  // Ordinals (ascending) captured on a local date. Usually one contiguous
  // run, but records with different UTC offsets can interleave.
  std::span<const std::uint32_t> day(Date d) const;
  const std::map<Date, std::vector<std::uint32_t>>& day_index() const { return day_index_; }
  std::span<const Date> weekday_dates(unsigned weekday) const { return weekday_index_.at(weekday); }

  // Keys are lowercase named locations.
  const std::map<std::string, std::vector<std::uint32_t>, std::less<>>& location_index() const {
    return location_index_;
  }
  std::span<const std::uint32_t> location(std::string_view lowercase_name) const;
  // Most common spelling of each lowercase key, for display.
  const std::string& location_display(std::string_view lowercase_name) const;

  // Records with coordinates, in ordinal order, with parallel lat/lon columns.
  std::span<const std::uint32_t> geo_ordinals() const { return geo_list_; }
  std::span<const double> geo_lat() const { return geo_lat_; }
  std::span<const double> geo_lon() const { return geo_lon_; }

  std::span<const std::uint32_t> cluster(std::int32_t cluster_id) const;
  std::size_t cluster_count() const { return cluster_index_.size(); }

  // Records with features, row-major feature matrix aligned with them.
  std::span<const std::uint32_t> feature_ordinals() const { return feature_ordinals_; }
  std::span<const float> feature_matrix() const { return feature_matrix_; }

  // Number of records whose local time of day falls in each named window.
  std::size_t timename_count(std::string_view name) const;

  friend IndexSet build_indexes(std::shared_ptr<const Corpus> corpus, EngineConfig config);

 private:
  std::shared_ptr<const Corpus> corpus_;
  EngineConfig config_;
  std::map<TermKey, std::vector<Posting>> term_index_;
  std::map<Date, std::vector<std::uint32_t>> day_index_;
  std::array<std::vector<Date>, 7> weekday_index_;
  std::map<std::string, std::vector<std::uint32_t>, std::less<>> location_index_;
  std::map<std::string, std::string, std::less<>> location_display_;
  std::vector<std::uint32_t> geo_list_;
  std::vector<double> geo_lat_, geo_lon_;
  std::vector<std::vector<std::uint32_t>> cluster_index_;
  std::vector<std::uint32_t> feature_ordinals_;
  std::vector<float> feature_matrix_;
  std::map<std::string, std::size_t, std::less<>> timename_counts_;
};

IndexSet build_indexes(std::shared_ptr<const Corpus> corpus, EngineConfig config = {});

}  // namespace lifelog
