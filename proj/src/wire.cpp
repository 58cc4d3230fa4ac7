#include "lifelog/api.hpp"

namespace lifelog::wire {

using nlohmann::json;

json record(const ImageRecord& r) {
  json j;
  j["id"] = r.id;
  j["timestamp"] = format_rfc3339(r.timestamp);
  j["date"] = format_date(r.timestamp.local_date());
  j["time"] = format_clock(r.timestamp.local_time_of_day());
  j["weekday"] = weekday_name(r.timestamp.local_weekday());
  j["geo"] = r.geo ? json{{"lat", r.geo->lat}, {"lon", r.geo->lon}} : json(nullptr);
  j["location"] = r.named_location ? json(*r.named_location) : json(nullptr);
  j["cluster_id"] = r.cluster_id;
  json dets = json::array();
  for (const auto& d : r.detections) {
    json jd = {{"kind", kind_name(d.kind)}, {"term", d.term}, {"score", d.score}};
    jd["bbox"] = d.bbox ? json{{"x", d.bbox->x}, {"y", d.bbox->y}, {"w", d.bbox->w}, {"h", d.bbox->h}}
                        : json(nullptr);
    dets.push_back(std::move(jd));
  }
  j["detections"] = std::move(dets);
  return j;
}

json options(const QueryOptions& o) {
  return {{"score", o.global_score},
          {"limit", o.limit},
          {"reduced", o.reduced},
          {"sort", sort_name(o.sort)}};
}

json result_page(const FilterQuery& q, const ResultPage& page, const Corpus& corpus) {
  Canonical c = canonicalize(q);
  json hits = json::array();
  for (const Hit& h : page.hits) {
    json jh = {{"id", h.id},
               {"score", h.score},
               {"timestamp", format_rfc3339(corpus[h.ordinal].timestamp)},
               {"matched", h.matched}};
    if (h.distance_km) jh["distance_km"] = *h.distance_km;
    hits.push_back(std::move(jh));
  }
  return {{"query", c.text},
          {"id", c.id()},
          {"options", options(q.options)},
          {"total", page.total_before_limit},
          {"hits", std::move(hits)}};
}

json temporal_result(const TemporalQuery& tq, const TemporalResult& result, const Corpus& corpus) {
  Canonical c = canonicalize(tq);
  json stages = json::array();
  for (const auto& s : tq.stages) stages.push_back(canonical_text(s));
  json matches = json::array();
  for (const auto& m : result.matches) {
    json ids = json::array(), times = json::array();
    for (auto ord : m.ordinals) {
      ids.push_back(corpus[ord].id);
      times.push_back(format_rfc3339(corpus[ord].timestamp));
    }
    matches.push_back({{"ids", std::move(ids)}, {"timestamps", std::move(times)}});
  }
  return {{"query", c.text},
          {"id", c.id()},
          {"stages", std::move(stages)},
          {"max_span", tq.max_span ? json(tq.max_span->count()) : json(nullptr)},
          {"same_day", tq.same_day},
          {"total", result.total_before_limit},
          {"matches", std::move(matches)}};
}

namespace {
json term_counts(const std::vector<TermCount>& v) {
  json out = json::array();
  for (const auto& t : v) out.push_back({{"term", t.term}, {"count", t.count}});
  return out;
}
}  // namespace

json summary(const DaySummary& s) {
  return {{"date", format_date(s.date)},
          {"weekday", weekday_name(s.weekday)},
          {"image_count", s.image_count},
          {"representatives", s.representatives},
          {"top_locations", term_counts(s.top_locations)},
          {"top_concepts", term_counts(s.top_concepts)},
          {"top_objects", term_counts(s.top_objects)}};
}

json suggestion(const Suggestion& s) {
  json j = {{"kind", suggestion_kind_name(s.kind)},
            {"term", s.term},
            {"count", s.count},
            {"examples", s.examples}};
  if (s.window)
    j["window"] = {{"start", format_clock(s.window->start)}, {"end", format_clock(s.window->end)}};
  return j;
}

json keyword(const KeywordInfo& k) {
  return {{"long", k.long_form}, {"alias", k.alias}, {"domain", k.domain}};
}

json receipt(const SubmissionReceipt& r) {
  return {{"id", r.record_id}, {"submitted_at", r.submitted_at_ms}, {"outcome", outcome_name(r.outcome)}};
}

json error(std::string_view type, std::string_view message, std::optional<std::size_t> position) {
  json e = {{"type", type}, {"message", message}};
  if (position) e["position"] = *position;
  return {{"error", std::move(e)}};
}

}  // namespace lifelog::wire
