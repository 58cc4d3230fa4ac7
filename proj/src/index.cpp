#include "lifelog/index.hpp"

#include <algorithm>

#include "lifelog/text.hpp"

namespace lifelog {

std::span<const Posting> IndexSet::postings(DetectionKind kind, const std::string& term) const {
  auto it = term_index_.find(TermKey{kind, term});
  if (it == term_index_.end()) return {};
  return it->second;
}

std::span<const std::uint32_t> IndexSet::day(Date d) const {
  auto it = day_index_.find(d);
  if (it == day_index_.end()) return {};
  return it->second;
}

std::span<const std::uint32_t> IndexSet::location(std::string_view lowercase_name) const {
  auto it = location_index_.find(lowercase_name);
  if (it == location_index_.end()) return {};
  return it->second;
}

const std::string& IndexSet::location_display(std::string_view lowercase_name) const {
  static const std::string empty;
  auto it = location_display_.find(lowercase_name);
  return it == location_display_.end() ? empty : it->second;
}

std::span<const std::uint32_t> IndexSet::cluster(std::int32_t cluster_id) const {
  if (cluster_id < 0 || static_cast<std::size_t>(cluster_id) >= cluster_index_.size()) return {};
  return cluster_index_[cluster_id];
}

std::size_t IndexSet::timename_count(std::string_view name) const {
  auto it = timename_counts_.find(name);
  return it == timename_counts_.end() ? 0 : it->second;
}

IndexSet build_indexes(std::shared_ptr<const Corpus> corpus, EngineConfig config) {
  IndexSet idx;
  idx.corpus_ = corpus ? std::move(corpus) : std::make_shared<const Corpus>();
  idx.config_ = std::move(config);
  const Corpus& c = *idx.corpus_;

  std::map<std::string, std::map<std::string, std::size_t>> spellings;
  for (const auto& [name, window] : idx.config_.times.windows()) idx.timename_counts_[name] = 0;

  for (std::uint32_t ord = 0; ord < c.size(); ++ord) {
    const ImageRecord& r = c[ord];
    for (const auto& d : r.detections)
      idx.term_index_[TermKey{d.kind, d.term}].push_back(Posting{ord, d.score});
    idx.day_index_[r.timestamp.local_date()].push_back(ord);
    if (r.named_location) {
      std::string key = to_lower(*r.named_location);
      idx.location_index_[key].push_back(ord);
      ++spellings[key][*r.named_location];
    }
    if (r.geo) {
      idx.geo_list_.push_back(ord);
      idx.geo_lat_.push_back(r.geo->lat);
      idx.geo_lon_.push_back(r.geo->lon);
    }
    if (r.cluster_id >= 0) {
      auto cid = static_cast<std::size_t>(r.cluster_id);
      if (idx.cluster_index_.size() <= cid) idx.cluster_index_.resize(cid + 1);
      idx.cluster_index_[cid].push_back(ord);
    }
    if (r.has_feature() && r.feature.size() == c.feature_dim()) {
      idx.feature_ordinals_.push_back(ord);
      idx.feature_matrix_.insert(idx.feature_matrix_.end(), r.feature.begin(), r.feature.end());
    }
    std::int32_t tod = r.timestamp.local_time_of_day();
    for (const auto& [name, window] : idx.config_.times.windows())
      if (window.contains(tod)) ++idx.timename_counts_[name];
  }

  // Ordinals are visited in ascending order, so postings are already sorted.
  for (const auto& [date, ords] : idx.day_index_) idx.weekday_index_[weekday_of(date)].push_back(date);
  for (const auto& [key, counts] : spellings) {
    auto best = std::max_element(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
      return a.second < b.second || (a.second == b.second && a.first > b.first);
    });
    idx.location_display_[key] = best->first;
  }
  return idx;
}

}  // namespace lifelog
