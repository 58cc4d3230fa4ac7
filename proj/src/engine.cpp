#include "lifelog/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <unordered_map>

#include "lifelog/text.hpp"

namespace lifelog {

namespace {

// Candidate ordinals (ascending) with the running sum of matched scores.
struct Candidates {
  bool unrestricted = true;
  std::vector<std::uint32_t> ords;
  std::vector<double> sums;
};

// Postings at or above the threshold, collapsed to one entry per ordinal
// carrying the best score.
std::vector<ScoredOrdinal> qualifying(std::span<const Posting> postings, double threshold) {
  std::vector<ScoredOrdinal> out;
  for (const Posting& p : postings) {
    if (p.score < threshold) continue;
    if (!out.empty() && out.back().ordinal == p.ordinal) {
      out.back().score = std::max(out.back().score, p.score);
    } else {
      out.push_back({p.ordinal, p.score});
    }
  }
  return out;
}

void restrict_scored(Candidates& c, const std::vector<ScoredOrdinal>& list) {
  if (c.unrestricted) {
    c.unrestricted = false;
    for (const auto& s : list) {
      c.ords.push_back(s.ordinal);
      c.sums.push_back(s.score);
    }
    return;
  }
  std::vector<std::uint32_t> ords;
  std::vector<double> sums;
  std::size_t i = 0, j = 0;
  while (i < c.ords.size() && j < list.size()) {
    if (c.ords[i] < list[j].ordinal) {
      ++i;
    } else if (list[j].ordinal < c.ords[i]) {
      ++j;
    } else {
      ords.push_back(c.ords[i]);
      sums.push_back(c.sums[i] + list[j].score);
      ++i;
      ++j;
    }
  }
  c.ords = std::move(ords);
  c.sums = std::move(sums);
}

void restrict_to(Candidates& c, const std::vector<std::uint32_t>& set) {
  if (c.unrestricted) {
    c.unrestricted = false;
    c.ords = set;
    c.sums.assign(set.size(), 0.0);
    return;
  }
  std::vector<std::uint32_t> ords;
  std::vector<double> sums;
  std::size_t i = 0, j = 0;
  while (i < c.ords.size() && j < set.size()) {
    if (c.ords[i] < set[j]) {
      ++i;
    } else if (set[j] < c.ords[i]) {
      ++j;
    } else {
      ords.push_back(c.ords[i]);
      sums.push_back(c.sums[i]);
      ++i;
      ++j;
    }
  }
  c.ords = std::move(ords);
  c.sums = std::move(sums);
}

std::vector<std::uint32_t> sorted_union(std::vector<std::uint32_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void append(std::vector<std::uint32_t>& out, std::span<const std::uint32_t> in) {
  out.insert(out.end(), in.begin(), in.end());
}

std::vector<std::uint32_t> date_set(const Clause& c, const IndexSet& idx) {
  std::vector<std::uint32_t> out;
  for (const Term& t : c.terms)
    if (auto d = parse_date(t.text)) append(out, idx.day(*d));
  return sorted_union(std::move(out));
}

std::vector<std::uint32_t> weekday_set(const Clause& c, const IndexSet& idx) {
  std::vector<std::uint32_t> out;
  for (const Term& t : c.terms) {
    auto wd = parse_weekday(t.text);
    if (!wd) continue;
    for (Date d : idx.weekday_dates(*wd)) append(out, idx.day(d));
  }
  return sorted_union(std::move(out));
}

std::vector<std::uint32_t> location_set(const Clause& c, const IndexSet& idx, Execution exec) {
  std::vector<std::uint32_t> out;
  for (const Term& t : c.terms) {
    if (t.coordinate) {
      auto hits = kernels::radius_scan(idx.geo_lat(), idx.geo_lon(), t.coordinate->lat,
                                       t.coordinate->lon, idx.config().coordinate_match_km, exec);
      for (auto row : hits.rows) out.push_back(idx.geo_ordinals()[row]);
    } else {
      append(out, idx.location(t.text));
    }
  }
  return sorted_union(std::move(out));
}

std::vector<TimeWindow> windows_for(const Clause& c, const IndexSet& idx) {
  std::vector<TimeWindow> out;
  for (const Term& t : c.terms)
    if (const TimeWindow* w = idx.config().times.find(t.text)) out.push_back(*w);
  return out;
}

std::size_t object_count(const ImageRecord& r, double threshold) {
  return static_cast<std::size_t>(std::count_if(r.detections.begin(), r.detections.end(),
                                                [&](const Detection& d) {
                                                  return d.kind == DetectionKind::Object &&
                                                         d.score >= threshold;
                                                }));
}

std::vector<std::string> matched_terms(const FilterQuery& q, const ImageRecord& r,
                                       const IndexSet& idx) {
  std::vector<std::string> out;
  for (const Clause& c : q.clauses) {
    switch (c.keyword) {
      case Keyword::Concepts:
      case Keyword::Objects:
      case Keyword::Attributes:
        for (const Term& t : c.terms) out.push_back(t.text);
        break;
      case Keyword::Weekdays: {
        std::string_view wd = weekday_name(r.timestamp.local_weekday());
        for (const Term& t : c.terms)
          if (t.text == wd) out.push_back(t.text);
        break;
      }
      case Keyword::Timename:
        for (const Term& t : c.terms) {
          const TimeWindow* w = idx.config().times.find(t.text);
          if (w && w->contains(r.timestamp.local_time_of_day())) out.push_back(t.text);
        }
        break;
      case Keyword::Location:
        for (const Term& t : c.terms) {
          if (t.coordinate) {
            if (r.geo && kernels::haversine_km(t.coordinate->lat, t.coordinate->lon, r.geo->lat,
                                               r.geo->lon) <= idx.config().coordinate_match_km)
              out.push_back(t.text);
          } else if (r.named_location && to_lower(*r.named_location) == t.text) {
            out.push_back(t.text);
          }
        }
        break;
      case Keyword::Date: {
        std::string d = format_date(r.timestamp.local_date());
        for (const Term& t : c.terms)
          if (t.text == d) out.push_back(t.text);
        break;
      }
    }
  }
  return out;
}

}  // namespace


std::vector<ScoredOrdinal> match_all(const FilterQuery& q, const IndexSet& idx, Execution exec) {
  const Corpus& corpus = idx.corpus();
  Candidates cand;
  std::size_t scored_terms = 0;

  for (const Clause& c : q.clauses) {
    if (!is_scored(c.keyword)) continue;
    DetectionKind kind = c.keyword == Keyword::Concepts  ? DetectionKind::Concept
                         : c.keyword == Keyword::Objects ? DetectionKind::Object
                                                         : DetectionKind::Attribute;
    for (const Term& t : c.terms) {
      double threshold = t.min_score().value_or(q.options.global_score);
      restrict_scored(cand, qualifying(idx.postings(kind, t.text), threshold));
      ++scored_terms;
    }
  }
  if (const Clause* c = q.find(Keyword::Date)) restrict_to(cand, date_set(*c, idx));
  if (const Clause* c = q.find(Keyword::Weekdays)) restrict_to(cand, weekday_set(*c, idx));
  if (const Clause* c = q.find(Keyword::Location)) restrict_to(cand, location_set(*c, idx, exec));

  if (cand.unrestricted) {
    cand.ords.resize(corpus.size());
    std::iota(cand.ords.begin(), cand.ords.end(), 0u);
    cand.sums.assign(corpus.size(), 0.0);
  }

  if (const Clause* c = q.find(Keyword::Timename)) {
    std::vector<TimeWindow> windows = windows_for(*c, idx);
    std::vector<std::uint32_t> positions(cand.ords.size());
    std::iota(positions.begin(), positions.end(), 0u);
    auto keep = kernels::select(
        positions,
        [&](std::uint32_t pos) {
          std::int32_t tod = corpus[cand.ords[pos]].timestamp.local_time_of_day();
          return std::any_of(windows.begin(), windows.end(),
                             [&](const TimeWindow& w) { return w.contains(tod); });
        },
        exec);
    Candidates next;
    for (auto pos : keep) {
      next.ords.push_back(cand.ords[pos]);
      next.sums.push_back(cand.sums[pos]);
    }
    cand = std::move(next);
  }

  std::vector<ScoredOrdinal> out;
  out.reserve(cand.ords.size());
  for (std::size_t i = 0; i < cand.ords.size(); ++i)
    out.push_back({cand.ords[i],
                   scored_terms ? cand.sums[i] / static_cast<double>(scored_terms) : 1.0});

  if (q.options.reduced) {
    // Best per cluster; ordinal order makes the earliest record win ties.
    std::unordered_map<std::int32_t, std::size_t> best;
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto [it, inserted] = best.emplace(corpus[out[i].ordinal].cluster_id, i);
      if (!inserted && out[i].score > out[it->second].score) it->second = i;
    }
    std::vector<std::size_t> keep;
    keep.reserve(best.size());
    for (const auto& [cluster, i] : best) keep.push_back(i);
    std::sort(keep.begin(), keep.end());
    std::vector<ScoredOrdinal> reduced;
    reduced.reserve(keep.size());
    for (auto i : keep) reduced.push_back(out[i]);
    out = std::move(reduced);
  }
  return out;
}

ResultPage evaluate(const FilterQuery& q, const IndexSet& idx, Execution exec) {
  const Corpus& corpus = idx.corpus();
  std::vector<ScoredOrdinal> matches = match_all(q, idx, exec);

  switch (q.options.sort) {
    case SortOrder::Date:
      break;  // already in ordinal order
    case SortOrder::Confidence:
      std::stable_sort(matches.begin(), matches.end(),
                       [](const ScoredOrdinal& a, const ScoredOrdinal& b) {
                         return a.score > b.score;
                       });
      break;
    case SortOrder::ObjectCount: {
      std::unordered_map<std::uint32_t, std::size_t> counts;
      for (const auto& m : matches)
        counts[m.ordinal] = object_count(corpus[m.ordinal], q.options.global_score);
      std::stable_sort(matches.begin(), matches.end(),
                       [&](const ScoredOrdinal& a, const ScoredOrdinal& b) {
                         return counts[a.ordinal] > counts[b.ordinal];
                       });
      break;
    }
  }

  ResultPage page;
  page.total_before_limit = matches.size();
  std::size_t n = std::min<std::size_t>(matches.size(), q.options.limit);
  page.hits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ImageRecord& r = corpus[matches[i].ordinal];
    page.hits.push_back(
        Hit{r.id, matches[i].ordinal, matches[i].score, matched_terms(q, r, idx), std::nullopt});
  }
  return page;
}

TemporalResult evaluate_temporal(const TemporalQuery& tq, const IndexSet& idx, Execution exec) {
  if (tq.stages.size() < 2)
    throw std::invalid_argument("a temporal query needs at least two stages");
  const Corpus& corpus = idx.corpus();
  const std::size_t n = tq.stages.size();

  std::vector<std::vector<std::uint32_t>> stage(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& m : match_all(tq.stages[i], idx, exec)) stage[i].push_back(m.ordinal);

  // For each stage element: ordinal of the earliest reachable final element
  // and the position of the chosen successor in the next stage.
  constexpr std::int64_t kNone = -1;
  std::vector<std::vector<std::int64_t>> end(n), next(n);
  end[n - 1].assign(stage[n - 1].begin(), stage[n - 1].end());
  next[n - 1].assign(stage[n - 1].size(), kNone);

  const std::int64_t span = tq.max_span ? tq.max_span->count() : -1;
  // Two local dates can only match when the UTC gap is below ~2 days.
  constexpr std::int64_t kSameDayHorizon = 3 * 86400;

  for (std::size_t i = n - 1; i-- > 0;) {
    const auto& cur = stage[i];
    const auto& succ = stage[i + 1];
    end[i].assign(cur.size(), kNone);
    next[i].assign(cur.size(), kNone);
    const auto m = static_cast<std::int64_t>(cur.size());
    auto link = [&](std::int64_t j) {
      const ImageRecord& r = corpus[cur[j]];
      const std::int64_t t = r.timestamp.utc_seconds;
      auto first = std::partition_point(succ.begin(), succ.end(), [&](std::uint32_t s) {
        return corpus[s].timestamp.utc_seconds <= t;
      });
      Date date = r.timestamp.local_date();
      for (auto it = first; it != succ.end(); ++it) {
        const ImageRecord& s = corpus[*it];
        std::int64_t gap = s.timestamp.utc_seconds - t;
        if (span >= 0 && gap > span) break;
        if (tq.same_day && gap > kSameDayHorizon) break;
        if (tq.same_day && s.timestamp.local_date() != date) continue;
        auto k = it - succ.begin();
        if (end[i + 1][k] == kNone) continue;
        if (end[i][j] == kNone || end[i + 1][k] < end[i][j]) {
          end[i][j] = end[i + 1][k];
          next[i][j] = k;
        }
      }
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
      for (std::int64_t j = 0; j < m; ++j) link(j);
    } else {
      for (std::int64_t j = 0; j < m; ++j) link(j);
    }
  }

  TemporalResult result;
  for (std::size_t j = 0; j < stage[0].size(); ++j) {
    if (end[0][j] == kNone) continue;
    ++result.total_before_limit;
    if (result.matches.size() >= tq.stages.back().options.limit) continue;
    TemporalMatch match;
    std::int64_t pos = static_cast<std::int64_t>(j);
    for (std::size_t i = 0; i < n; ++i) {
      match.ordinals.push_back(stage[i][pos]);
      pos = next[i][pos];
    }
    result.matches.push_back(std::move(match));
  }
  return result;
}

ResultPage radius_search(GeoPoint center, double radius_km, const IndexSet& idx, Execution exec) {
  if (!(radius_km > 0) || !std::isfinite(radius_km))
    throw std::invalid_argument("radius_km must be a positive number");
  auto scan = kernels::radius_scan(idx.geo_lat(), idx.geo_lon(), center.lat, center.lon,
                                   radius_km, exec);
  std::vector<std::size_t> order(scan.rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Rows are ascending in ordinal, so a stable sort keeps the tie-break.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scan.distance_km[a] < scan.distance_km[b];
  });
  ResultPage page;
  page.total_before_limit = order.size();
  for (auto i : order) {
    std::uint32_t ord = idx.geo_ordinals()[scan.rows[i]];
    Hit h{idx.corpus()[ord].id, ord, 1.0, {}, scan.distance_km[i]};
    page.hits.push_back(std::move(h));
  }
  return page;
}

std::vector<Neighbor> neighbors(std::string_view id, std::size_t k, const IndexSet& idx,
                                Execution exec) {
  const Corpus& corpus = idx.corpus();
  auto ord = corpus.ordinal_of(id);
  if (!ord) throw NotFound("unknown record id '" + std::string(id) + "'");
  const ImageRecord& self = corpus[*ord];
  if (k == 0 || !self.has_feature()) return {};

  auto rows = idx.feature_ordinals();
  std::vector<double> sims(rows.size());
  kernels::cosine_scan(idx.feature_matrix(), corpus.feature_dim(), self.feature, sims, exec);

  std::vector<Neighbor> all;
  all.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i] != *ord) all.push_back({corpus[rows[i]].id, rows[i], sims[i]});
  auto cmp = [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.id < b.id;
  };
  std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(), cmp);
  all.resize(take);
  return all;
}

namespace {

void add_link(std::map<std::string, FilterQuery>& out, const std::string& name,
              const std::string& dsl) {
  try {
    out[name] = parse_query(dsl);
  } catch (const ParseError&) {
    // Term not expressible in the query language; no link.
  }
}

bool expressible(Keyword kw, const std::string& term) {
  try {
    parse_query(std::string(keyword_info(kw).long_form) + " " + term);
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

std::string join_terms(Keyword kw, const std::set<std::string>& terms, char sep) {
  std::string out;
  for (const auto& t : terms) {
    if (!expressible(kw, t)) continue;
    if (!out.empty()) out += sep;
    out += t;
  }
  return out;
}

}  // namespace

std::map<std::string, FilterQuery> link_queries(std::string_view id, const IndexSet& idx,
                                                std::size_t similar_k) {
  const Corpus& corpus = idx.corpus();
  auto ord = corpus.ordinal_of(id);
  if (!ord) throw NotFound("unknown record id '" + std::string(id) + "'");
  const ImageRecord& r = corpus[*ord];

  std::map<std::string, FilterQuery> out;
  add_link(out, "same_day", "--date " + format_date(r.timestamp.local_date()));
  add_link(out, "same_weekday",
           "--weekdays " + std::string(weekday_name(r.timestamp.local_weekday())));

  std::set<std::string> objects, concepts;
  for (const auto& d : r.detections) {
    if (d.kind == DetectionKind::Object) objects.insert(d.term);
    if (d.kind == DetectionKind::Concept) concepts.insert(d.term);
  }
  if (auto terms = join_terms(Keyword::Objects, objects, ','); !terms.empty())
    add_link(out, "same_objects", "--objects " + terms);
  if (auto terms = join_terms(Keyword::Concepts, concepts, ','); !terms.empty())
    add_link(out, "same_concepts", "--concepts " + terms);

  if (r.named_location) add_link(out, "same_location", "--location " + *r.named_location);
  if (r.geo) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "--location %.6f,%.6f", r.geo->lat, r.geo->lon);
    add_link(out, "nearby", buf);
  }

  std::set<std::string> dates;
  for (const auto& n : neighbors(id, similar_k, idx))
    dates.insert(format_date(corpus[n.ordinal].timestamp.local_date()));
  if (!dates.empty()) add_link(out, "similar_dates", "--date " + join_terms(Keyword::Date, dates, ','));
  return out;
}

}  // namespace lifelog
