#include "lifelog/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>

#include <json.hpp>

#include "lifelog/text.hpp"

namespace lifelog {

using nlohmann::json;

std::string_view kind_name(DetectionKind kind) {
  switch (kind) {
    case DetectionKind::Concept: return "concept";
    case DetectionKind::Object: return "object";
    case DetectionKind::Attribute: return "attribute";
  }
  return "concept";
}

std::optional<DetectionKind> parse_kind(std::string_view name) {
  if (name == "concept") return DetectionKind::Concept;
  if (name == "object") return DetectionKind::Object;
  if (name == "attribute") return DetectionKind::Attribute;
  return std::nullopt;
}

NamedTimeTable NamedTimeTable::defaults() {
  NamedTimeTable t;
  t.set("morning", {5 * 3600, 11 * 3600});
  t.set("noon", {11 * 3600, 13 * 3600});
  t.set("afternoon", {13 * 3600, 17 * 3600});
  t.set("evening", {17 * 3600, 22 * 3600});
  t.set("night", {22 * 3600, 5 * 3600});
  return t;
}

void NamedTimeTable::set(std::string name, TimeWindow window) {
  name = to_lower(trim(name));
  if (name.empty()) throw std::invalid_argument("time name must not be empty");
  windows_[std::move(name)] = window;
}

const TimeWindow* NamedTimeTable::find(std::string_view name) const {
  auto it = windows_.find(name);
  return it == windows_.end() ? nullptr : &it->second;
}

IngestError::IngestError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + message),
      line_(line),
      field_(std::move(field)) {}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += double{a[i]} * b[i];
    na += double{a[i]} * a[i];
    nb += double{b[i]} * b[i];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / std::sqrt(na * nb);
}

std::vector<std::int32_t> cluster_similar(std::span<const ImageRecord> records,
                                          const ClusterParams& params) {
  if (!(params.threshold > 0 && params.threshold <= 1))
    throw std::invalid_argument("cluster threshold must lie in (0, 1]");
  std::size_t dim = 0;
  for (const auto& r : records) {
    if (!r.has_feature()) continue;
    if (dim == 0) dim = r.feature.size();
    if (r.feature.size() != dim)
      throw std::invalid_argument("feature dimension mismatch at record '" + r.id + "': expected " +
                                  std::to_string(dim) + ", got " +
                                  std::to_string(r.feature.size()));
  }

  std::vector<std::int32_t> ids(records.size());
  std::int32_t next = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    bool join = false;
    if (i > 0) {
      const auto& prev = records[i - 1];
      const auto& cur = records[i];
      join = prev.has_feature() && cur.has_feature() &&
             cur.timestamp.utc_seconds - prev.timestamp.utc_seconds <= params.max_gap_seconds &&
             cur.timestamp.local_date() == prev.timestamp.local_date() &&
             cosine_similarity(prev.feature, cur.feature) >= params.threshold;
    }
    ids[i] = join ? ids[i - 1] : next++;
  }
  return ids;
}

Corpus Corpus::from_records(std::vector<ImageRecord> records, const ClusterParams& params) {
  std::sort(records.begin(), records.end(), [](const ImageRecord& a, const ImageRecord& b) {
    if (a.timestamp.utc_seconds != b.timestamp.utc_seconds)
      return a.timestamp.utc_seconds < b.timestamp.utc_seconds;
    return a.id < b.id;
  });

  Corpus c;
  c.by_id_.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!c.by_id_.emplace(records[i].id, static_cast<std::uint32_t>(i)).second)
      throw std::invalid_argument("duplicate record id '" + records[i].id + "'");
    if (records[i].has_feature() && c.feature_dim_ == 0) c.feature_dim_ = records[i].feature.size();
  }
  auto clusters = cluster_similar(records, params);
  for (std::size_t i = 0; i < records.size(); ++i) records[i].cluster_id = clusters[i];
  c.records_ = std::move(records);
  return c;
}

std::optional<std::uint32_t> Corpus::ordinal_of(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

namespace {

double require_number(const json& j, std::size_t line, const std::string& field) {
  if (!j.is_number()) throw IngestError(line, field, "expected a number");
  return j.get<double>();
}

bool present(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it != obj.end() && !it->is_null();
}

}  // namespace

ImageRecord parse_record_line(std::string_view line, std::size_t line_no) {
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded()) throw IngestError(line_no, "<line>", "not valid JSON");
  if (!j.is_object()) throw IngestError(line_no, "<line>", "expected a JSON object");

  ImageRecord r;
  if (!present(j, "id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
    throw IngestError(line_no, "id", "required non-empty string");
  r.id = j["id"].get<std::string>();

  if (!present(j, "ts") || !j["ts"].is_string())
    throw IngestError(line_no, "ts", "required RFC-3339 string");
  auto ts = parse_rfc3339(j["ts"].get<std::string>());
  if (!ts) throw IngestError(line_no, "ts", "not a valid RFC-3339 timestamp with offset");
  r.timestamp = *ts;

  bool has_lat = present(j, "lat"), has_lon = present(j, "lon");
  if (has_lat != has_lon)
    throw IngestError(line_no, has_lat ? "lon" : "lat", "lat and lon must be given together");
  if (has_lat) {
    double lat = require_number(j["lat"], line_no, "lat");
    double lon = require_number(j["lon"], line_no, "lon");
    if (lat < -90 || lat > 90) throw IngestError(line_no, "lat", "out of range [-90, 90]");
    if (lon < -180 || lon > 180) throw IngestError(line_no, "lon", "out of range [-180, 180]");
    r.geo = GeoPoint{lat, lon};
  }

  if (present(j, "loc")) {
    if (!j["loc"].is_string()) throw IngestError(line_no, "loc", "expected a string");
    std::string loc = std::string(trim(j["loc"].get<std::string>()));
    if (!loc.empty()) r.named_location = std::move(loc);
  }

  if (present(j, "detections")) {
    const json& dets = j["detections"];
    if (!dets.is_array()) throw IngestError(line_no, "detections", "expected an array");
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const json& d = dets[i];
      std::string base = "detections[" + std::to_string(i) + "]";
      if (!d.is_object()) throw IngestError(line_no, base, "expected an object");
      Detection det;
      if (!present(d, "kind") || !d["kind"].is_string())
        throw IngestError(line_no, base + ".kind", "required string");
      auto kind = parse_kind(to_lower(d["kind"].get<std::string>()));
      if (!kind)
        throw IngestError(line_no, base + ".kind", "must be concept, object or attribute");
      det.kind = *kind;
      if (!present(d, "term") || !d["term"].is_string())
        throw IngestError(line_no, base + ".term", "required string");
      det.term = to_lower(trim(d["term"].get<std::string>()));
      if (det.term.empty()) throw IngestError(line_no, base + ".term", "must not be empty");
      if (!present(d, "score")) throw IngestError(line_no, base + ".score", "required number");
      det.score = require_number(d["score"], line_no, base + ".score");
      if (det.score < 0 || det.score > 1)
        throw IngestError(line_no, base + ".score", "out of range [0, 1]");
      if (present(d, "bbox")) {
        if (det.kind != DetectionKind::Object)
          throw IngestError(line_no, base + ".bbox", "only objects carry bounding boxes");
        const json& b = d["bbox"];
        if (!b.is_array() || b.size() != 4)
          throw IngestError(line_no, base + ".bbox", "expected [x, y, w, h]");
        double v[4];
        for (int k = 0; k < 4; ++k) {
          v[k] = require_number(b[k], line_no, base + ".bbox");
          if (v[k] < 0 || v[k] > 1)
            throw IngestError(line_no, base + ".bbox", "components must lie in [0, 1]");
        }
        det.bbox = BoundingBox{v[0], v[1], v[2], v[3]};
      }
      r.detections.push_back(std::move(det));
    }
  }

  if (present(j, "feat")) {
    const json& f = j["feat"];
    if (!f.is_array()) throw IngestError(line_no, "feat", "expected an array of numbers");
    std::vector<double> v;
    v.reserve(f.size());
    double norm = 0;
    for (const auto& x : f) {
      double d = require_number(x, line_no, "feat");
      v.push_back(d);
      norm += d * d;
    }
    if (!v.empty()) {
      norm = std::sqrt(norm);
      if (norm == 0) throw IngestError(line_no, "feat", "zero vector cannot be normalized");
      r.feature.reserve(v.size());
      for (double d : v) r.feature.push_back(static_cast<float>(d / norm));
    }
  }
  return r;
}

Corpus ingest_stream(std::istream& in, const IngestConfig& config) {
  std::vector<ImageRecord> records;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0, dim_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ImageRecord r = parse_record_line(line, line_no);
    auto [it, inserted] = first_line.emplace(r.id, line_no);
    if (!inserted)
      throw IngestError(line_no, "id",
                        "duplicate id '" + r.id + "' (first seen on line " +
                            std::to_string(it->second) + ")");
    if (r.has_feature()) {
      if (dim == 0) {
        dim = r.feature.size();
        dim_line = line_no;
      } else if (r.feature.size() != dim) {
        throw IngestError(line_no, "feat",
                          "dimension " + std::to_string(r.feature.size()) + " differs from " +
                              std::to_string(dim) + " on line " + std::to_string(dim_line));
      }
    }
    records.push_back(std::move(r));
  }
  return Corpus::from_records(std::move(records), config.clustering);
}

Corpus ingest_corpus(const std::filesystem::path& path, const IngestConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metadata file '" + path.string() + "'");
  return ingest_stream(in, config);
}

std::string record_to_json_line(const ImageRecord& r) {
  json j;
  j["id"] = r.id;
  j["ts"] = format_rfc3339(r.timestamp);
  if (r.geo) {
    j["lat"] = r.geo->lat;
    j["lon"] = r.geo->lon;
  }
  if (r.named_location) j["loc"] = *r.named_location;
  json dets = json::array();
  for (const auto& d : r.detections) {
    json jd = {{"kind", kind_name(d.kind)}, {"term", d.term}, {"score", d.score}};
    if (d.bbox) jd["bbox"] = {d.bbox->x, d.bbox->y, d.bbox->w, d.bbox->h};
    dets.push_back(std::move(jd));
  }
  j["detections"] = std::move(dets);
  if (r.has_feature()) j["feat"] = r.feature;
  return j.dump();
}

}  // namespace lifelog
