#include <algorithm>
#include <map>
#include <stdexcept>

#include "lifelog/explore.hpp"
#include "lifelog/text.hpp"

namespace lifelog {

namespace {

std::optional<DetectionKind> detection_kind(FrequencyKind k) {
  switch (k) {
    case FrequencyKind::Concept: return DetectionKind::Concept;
    case FrequencyKind::Object: return DetectionKind::Object;
    case FrequencyKind::Attribute: return DetectionKind::Attribute;
    case FrequencyKind::Location: return std::nullopt;
  }
  return std::nullopt;
}

std::vector<TermCount> top_terms(const std::map<std::string, std::size_t>& counts, std::size_t k) {
  std::vector<TermCount> out;
  out.reserve(counts.size());
  for (const auto& [term, n] : counts) out.push_back({term, n});
  // Map iteration is term-ascending; stable sort keeps that among equal counts.
  std::stable_sort(out.begin(), out.end(),
                   [](const TermCount& a, const TermCount& b) { return a.count > b.count; });
  if (out.size() > k) out.resize(k);
  return out;
}

std::vector<std::string> representatives(const Corpus& corpus, std::span<const std::uint32_t> day,
                                         std::size_t wanted) {
  std::vector<std::uint32_t> heads;
  std::int32_t last = -1;
  bool first = true;
  for (auto ord : day) {
    std::int32_t cid = corpus[ord].cluster_id;
    if (first || cid != last) heads.push_back(ord);
    first = false;
    last = cid;
  }
  std::vector<std::string> out;
  if (wanted == 0) return out;
  if (heads.size() <= wanted) {
    for (auto ord : heads) out.push_back(corpus[ord].id);
    return out;
  }
  // Spread evenly over the day's clusters.
  for (std::size_t i = 0; i < wanted; ++i) out.push_back(corpus[heads[i * heads.size() / wanted]].id);
  return out;
}

DaySummary summarize(const IndexSet& idx, Date date, const SummaryRequest& req) {
  const Corpus& corpus = idx.corpus();
  auto ords = idx.day(date);
  DaySummary s;
  s.date = date;
  s.weekday = weekday_of(date);
  s.image_count = ords.size();
  s.representatives = representatives(corpus, ords, req.images_per_day);

  std::map<std::string, std::size_t> locations, concepts, objects;
  for (auto ord : ords) {
    const ImageRecord& r = corpus[ord];
    if (r.named_location) ++locations[idx.location_display(to_lower(*r.named_location))];
    for (const auto& d : r.detections) {
      if (d.kind == DetectionKind::Concept) ++concepts[d.term];
      if (d.kind == DetectionKind::Object) ++objects[d.term];
    }
  }
  s.top_locations = top_terms(locations, req.top_k);
  s.top_concepts = top_terms(concepts, req.top_k);
  s.top_objects = top_terms(objects, req.top_k);
  return s;
}

}  // namespace

std::string_view frequency_kind_name(FrequencyKind k) {
  switch (k) {
    case FrequencyKind::Concept: return "concept";
    case FrequencyKind::Object: return "object";
    case FrequencyKind::Attribute: return "attribute";
    case FrequencyKind::Location: return "location";
  }
  return "concept";
}

std::optional<FrequencyKind> parse_frequency_kind(std::string_view name) {
  if (name == "concept") return FrequencyKind::Concept;
  if (name == "object") return FrequencyKind::Object;
  if (name == "attribute") return FrequencyKind::Attribute;
  if (name == "location") return FrequencyKind::Location;
  return std::nullopt;
}

std::size_t term_frequency(const IndexSet& idx, Date day, FrequencyKind kind,
                           std::string_view term) {
  auto ords = idx.day(day);
  if (ords.empty()) return 0;
  std::string key = to_lower(term);
  if (auto dk = detection_kind(kind)) {
    // Postings are sorted by ordinal; count those falling on the day.
    std::size_t n = 0;
    auto postings = idx.postings(*dk, key);
    for (const Posting& p : postings)
      if (std::binary_search(ords.begin(), ords.end(), p.ordinal)) ++n;
    return n;
  }
  std::size_t n = 0;
  for (auto ord : idx.location(key))
    if (std::binary_search(ords.begin(), ords.end(), ord)) ++n;
  return n;
}

SummaryPage day_summaries(const SummaryRequest& req, const IndexSet& idx) {
  if (req.page_size == 0) throw std::invalid_argument("page_size must be at least 1");

  struct Day {
    Date date;
    std::size_t freq;
  };
  std::vector<Day> days;
  for (const auto& [date, ords] : idx.day_index()) {
    if (req.weekdays && !req.weekdays->count(weekday_of(date))) continue;
    std::size_t freq = req.sort.kind ? term_frequency(idx, date, *req.sort.kind, req.sort.term) : 0;
    days.push_back({date, freq});
  }
  // day_index is date-ascending, which is also the tie-break.
  if (req.sort.kind)
    std::stable_sort(days.begin(), days.end(),
                     [](const Day& a, const Day& b) { return a.freq > b.freq; });

  SummaryPage page;
  page.total = days.size();
  page.page = req.page;
  page.page_size = req.page_size;
  if (req.page >= (days.size() + req.page_size - 1) / req.page_size) return page;
  std::size_t begin = req.page * req.page_size;
  std::size_t end = std::min(days.size(), begin + req.page_size);
  for (std::size_t i = begin; i < end; ++i) page.days.push_back(summarize(idx, days[i].date, req));
  return page;
}

}  // namespace lifelog
