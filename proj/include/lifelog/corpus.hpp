#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lifelog/civil_time.hpp"

namespace lifelog {

enum class DetectionKind : std::uint8_t { Concept, Object, Attribute };

std::string_view kind_name(DetectionKind kind);  // "concept", "object", "attribute"
std::optional<DetectionKind> parse_kind(std::string_view name);

struct BoundingBox {
  double x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
  DetectionKind kind = DetectionKind::Concept;
  std::string term;
  double score = 0;
  std::optional<BoundingBox> bbox;  // objects only
  friend bool operator==(const Detection&, const Detection&) = default;
};

struct GeoPoint {
  double lat = 0;
  double lon = 0;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct ImageRecord {
  std::string id;
  Timestamp timestamp;
  std::optional<GeoPoint> geo;
  std::optional<std::string> named_location;
  std::vector<Detection> detections;
  std::vector<float> feature;  // empty when absent, unit norm otherwise
  std::int32_t cluster_id = -1;

  bool has_feature() const { return !feature.empty(); }
  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

// Half-open local-time window. A window with start > end wraps midnight.
struct TimeWindow {
  std::int32_t start = 0;  // seconds since midnight
  std::int32_t end = 0;
  bool contains(std::int32_t time_of_day) const {
    if (start <= end) return time_of_day >= start && time_of_day < end;
    return time_of_day >= start || time_of_day < end;
  }
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

class NamedTimeTable {
 public:
  // morning, noon, afternoon, evening, night.
  static NamedTimeTable defaults();

  // Names are lowercased. Throws std::invalid_argument on an empty name.
  void set(std::string name, TimeWindow window);
  const TimeWindow* find(std::string_view name) const;
  const std::map<std::string, TimeWindow, std::less<>>& windows() const { return windows_; }

 private:
  std::map<std::string, TimeWindow, std::less<>> windows_;
};

struct ClusterParams {
  double threshold = 0.95;
  std::int64_t max_gap_seconds = 120;
};

struct IngestConfig {
  ClusterParams clustering;
};

class IngestError : public std::runtime_error {
 public:
  IngestError(std::size_t line, std::string field, const std::string& message);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// Records sorted by (utc timestamp, id); cluster ids assigned. Immutable once
// built, so one instance can be shared by any number of readers.
class Corpus {
 public:
  Corpus() = default;
  // Sorts, validates uniqueness and feature dimensions, and clusters.
  // Throws std::invalid_argument on duplicate ids or mismatched dimensions.
  static Corpus from_records(std::vector<ImageRecord> records, const ClusterParams& params = {});

  std::span<const ImageRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const ImageRecord& operator[](std::size_t ordinal) const { return records_[ordinal]; }
  std::optional<std::uint32_t> ordinal_of(std::string_view id) const;
  std::size_t feature_dim() const { return feature_dim_; }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.records_ == b.records_; }

 private:
  std::vector<ImageRecord> records_;
  std::unordered_map<std::string, std::uint32_t> by_id_;
  std::size_t feature_dim_ = 0;
};

// Greedy chronological single-link clustering. Records must be sorted by
// timestamp. A record joins the previous record's cluster iff both carry
// features with cosine >= threshold, the gap is <= max_gap and both fall on
// the same local date. Throws std::invalid_argument when feature dimensions
// differ or the threshold is outside (0, 1].
std::vector<std::int32_t> cluster_similar(std::span<const ImageRecord> records,
                                          const ClusterParams& params);

double cosine_similarity(std::span<const float> a, std::span<const float> b);

// JSON-lines metadata. Blank lines are skipped; anything else that fails
// validation throws IngestError with the 1-based line number.
Corpus ingest_corpus(const std::filesystem::path& path, const IngestConfig& config = {});
Corpus ingest_stream(std::istream& in, const IngestConfig& config = {});
ImageRecord parse_record_line(std::string_view line, std::size_t line_no);
std::string record_to_json_line(const ImageRecord& record);

}  // namespace lifelog
