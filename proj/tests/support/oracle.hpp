#pragma once

// Brute-force reference implementations. Each works straight off the record
// list with no index, no kernels and no shared evaluation code.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "lifelog/corpus.hpp"
#include "lifelog/query.hpp"

namespace oracle {

using namespace lifelog;

struct Row {
  const ImageRecord* rec;
  std::size_t pos;  // rank in (utc, id) order
};

inline std::vector<Row> chronological(const Corpus& c) {
  std::vector<const ImageRecord*> recs;
  for (const auto& r : c.records()) recs.push_back(&r);
  std::sort(recs.begin(), recs.end(), [](auto* a, auto* b) {
    if (a->timestamp.utc_seconds != b->timestamp.utc_seconds)
      return a->timestamp.utc_seconds < b->timestamp.utc_seconds;
    return a->id < b->id;
  });
  std::vector<Row> rows;
  for (std::size_t i = 0; i < recs.size(); ++i) rows.push_back({recs[i], i});
  return rows;
}

inline std::int64_t local_secs(const ImageRecord& r) {
  return r.timestamp.utc_seconds + std::int64_t{r.timestamp.offset_minutes} * 60;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

inline std::int64_t local_day_number(const ImageRecord& r) { return floor_div(local_secs(r), 86400); }

inline std::string local_date_text(const ImageRecord& r) {
  std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{local_day_number(r)}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d/%02u/%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

inline std::string local_weekday_text(const ImageRecord& r) {
  static const char* names[] = {"thursday", "friday", "saturday", "sunday", "monday", "tuesday", "wednesday"};
  // 1970-01-01 was a thursday.
  std::int64_t d = local_day_number(r) % 7;
  return names[d < 0 ? d + 7 : d];
}

inline std::int64_t local_tod(const ImageRecord& r) { return local_secs(r) - local_day_number(r) * 86400; }

inline double haversine(double lat1, double lon1, double lat2, double lon2) {
  const double rad = std::numbers::pi / 180.0;
  double dlat = (lat2 - lat1) * rad, dlon = (lon2 - lon1) * rad;
  double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
             std::cos(lat1 * rad) * std::cos(lat2 * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2 * 6371.0 * std::asin(std::sqrt(std::min(1.0, h)));
}

// Same great circle, different formulation; used where tolerance is allowed.
inline double central_angle_km(double lat1, double lon1, double lat2, double lon2) {
  const double rad = std::numbers::pi / 180.0;
  double p1 = lat1 * rad, p2 = lat2 * rad, dl = (lon2 - lon1) * rad;
  double y = std::hypot(std::cos(p2) * std::sin(dl),
                        std::cos(p1) * std::sin(p2) - std::sin(p1) * std::cos(p2) * std::cos(dl));
  double x = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
  return 6371.0 * std::atan2(y, x);
}

inline std::string lower(std::string s) {
  for (char& ch : s)
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch + 32);
  return s;
}

struct Match {
  Row row;
  double score;
};

// Every record satisfying q, in chronological order, Reduced applied.
inline std::vector<Match> matches(const std::vector<Row>& rows, const FilterQuery& q,
                                  const NamedTimeTable& times, double coordinate_km) {
  std::vector<Match> out;
  for (const Row& row : rows) {
    const ImageRecord& r = *row.rec;
    bool ok = true;
    double sum = 0;
    int scored = 0;
    for (const Clause& c : q.clauses) {
      if (!ok) break;
      switch (c.keyword) {
        case Keyword::Concepts:
        case Keyword::Objects:
        case Keyword::Attributes: {
          DetectionKind kind = c.keyword == Keyword::Concepts  ? DetectionKind::Concept
                               : c.keyword == Keyword::Objects ? DetectionKind::Object
                                                               : DetectionKind::Attribute;
          for (const Term& t : c.terms) {
            double thr = t.min_score_pct ? *t.min_score_pct / 100.0 : q.options.global_score;
            double best = -1;
            for (const auto& d : r.detections)
              if (d.kind == kind && d.term == t.text && d.score >= thr) best = std::max(best, d.score);
            if (best < 0) {
              ok = false;
              break;
            }
            sum += best;
            ++scored;
          }
          break;
        }
        case Keyword::Weekdays:
          ok = std::any_of(c.terms.begin(), c.terms.end(),
                           [&](const Term& t) { return t.text == local_weekday_text(r); });
          break;
        case Keyword::Timename:
          ok = std::any_of(c.terms.begin(), c.terms.end(), [&](const Term& t) {
            const TimeWindow* w = times.find(t.text);
            if (!w) return false;
            std::int64_t tod = local_tod(r);
            return w->start <= w->end ? (tod >= w->start && tod < w->end) : (tod >= w->start || tod < w->end);
          });
          break;
        case Keyword::Location:
          ok = std::any_of(c.terms.begin(), c.terms.end(), [&](const Term& t) {
            if (t.coordinate)
              return r.geo && haversine(t.coordinate->lat, t.coordinate->lon, r.geo->lat, r.geo->lon) <= coordinate_km;
            return r.named_location && lower(*r.named_location) == t.text;
          });
          break;
        case Keyword::Date:
          ok = std::any_of(c.terms.begin(), c.terms.end(),
                           [&](const Term& t) { return t.text == local_date_text(r); });
          break;
      }
    }
    if (ok) out.push_back({row, scored ? sum / scored : 1.0});
  }
  if (q.options.reduced) {
    std::map<std::int32_t, Match> best;
    for (const auto& m : out) {
      auto it = best.find(m.row.rec->cluster_id);
      if (it == best.end())
        best.emplace(m.row.rec->cluster_id, m);
      else if (m.score > it->second.score || (m.score == it->second.score && m.row.pos < it->second.row.pos))
        it->second = m;
    }
    out.clear();
    for (auto& [cid, m] : best) out.push_back(m);
    std::sort(out.begin(), out.end(), [](const Match& a, const Match& b) { return a.row.pos < b.row.pos; });
  }
  return out;
}

struct Result {
  std::vector<std::string> ids;
  std::vector<double> scores;
  std::size_t total = 0;
};

inline Result evaluate(const Corpus& corpus, const FilterQuery& q, const NamedTimeTable& times,
                       double coordinate_km = 1.0) {
  auto rows = chronological(corpus);
  auto ms = matches(rows, q, times, coordinate_km);
  auto objects = [&](const Match& m) {
    int n = 0;
    for (const auto& d : m.row.rec->detections)
      if (d.kind == DetectionKind::Object && d.score >= q.options.global_score) ++n;
    return n;
  };
  std::sort(ms.begin(), ms.end(), [&](const Match& a, const Match& b) {
    if (q.options.sort == SortOrder::Confidence && a.score != b.score) return a.score > b.score;
    if (q.options.sort == SortOrder::ObjectCount && objects(a) != objects(b)) return objects(a) > objects(b);
    return a.row.pos < b.row.pos;
  });
  Result res;
  res.total = ms.size();
  for (std::size_t i = 0; i < ms.size() && i < q.options.limit; ++i) {
    res.ids.push_back(ms[i].row.rec->id);
    res.scores.push_back(ms[i].score);
  }
  return res;
}

struct TemporalResult {
  std::vector<std::vector<std::string>> tuples;
  std::size_t total = 0;
};

// Enumerates every chronologically valid tuple, then keeps per first element
// the one whose last element is earliest (ties: lexicographically smallest).
inline TemporalResult evaluate_temporal(const Corpus& corpus, const TemporalQuery& tq,
                                        const NamedTimeTable& times, double coordinate_km = 1.0) {
  auto rows = chronological(corpus);
  std::vector<std::vector<Row>> stage;
  for (const auto& q : tq.stages) {
    std::vector<Row> s;
    for (const auto& m : matches(rows, q, times, coordinate_km)) s.push_back(m.row);
    stage.push_back(std::move(s));
  }
  auto linked = [&](const Row& a, const Row& b) {
    std::int64_t gap = b.rec->timestamp.utc_seconds - a.rec->timestamp.utc_seconds;
    if (gap <= 0) return false;
    if (tq.max_span && gap > tq.max_span->count()) return false;
    if (tq.same_day && local_day_number(*a.rec) != local_day_number(*b.rec)) return false;
    return true;
  };
  std::map<std::size_t, std::vector<std::size_t>> best;  // first pos -> positions
  std::vector<Row> cur;
  auto consider = [&] {
    std::vector<std::size_t> pos;
    for (const auto& r : cur) pos.push_back(r.pos);
    auto it = best.find(pos.front());
    if (it == best.end()) {
      best.emplace(pos.front(), pos);
      return;
    }
    const auto& old = it->second;
    if (pos.back() < old.back() || (pos.back() == old.back() && pos < old)) it->second = pos;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == stage.size()) {
      consider();
      return;
    }
    for (const Row& r : stage[i]) {
      if (i > 0 && !linked(cur.back(), r)) continue;
      cur.push_back(r);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);

  TemporalResult out;
  out.total = best.size();
  for (const auto& [first, pos] : best) {
    if (out.tuples.size() >= tq.stages.back().options.limit) break;
    std::vector<std::string> ids;
    for (auto p : pos) ids.push_back(rows[p].rec->id);
    out.tuples.push_back(std::move(ids));
  }
  return out;
}

// All other featured records by descending cosine, ties by id.
inline std::vector<std::pair<std::string, double>> neighbors(const Corpus& corpus, const std::string& id,
                                                             std::size_t k) {
  const ImageRecord* self = nullptr;
  for (const auto& r : corpus.records())
    if (r.id == id) self = &r;
  std::vector<std::pair<std::string, double>> all;
  if (!self || self->feature.empty()) return all;
  for (const auto& r : corpus.records()) {
    if (&r == self || r.feature.empty()) continue;
    double dot = 0, a = 0, b = 0;
    for (std::size_t i = 0; i < r.feature.size(); ++i) {
      dot += double{self->feature[i]} * r.feature[i];
      a += double{self->feature[i]} * self->feature[i];
      b += double{r.feature[i]} * r.feature[i];
    }
    all.emplace_back(r.id, (a == 0 || b == 0) ? 0.0 : dot / std::sqrt(a * b));
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace oracle
