#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lifelog/errors.hpp"
#include "lifelog/index.hpp"
#include "lifelog/kernels.hpp"
#include "lifelog/query.hpp"

namespace lifelog {

struct Hit {
  std::string id;
  std::uint32_t ordinal = 0;
  // Mean matched detection score; 1.0 without scored clauses.
  double score = 1.0;
  std::vector<std::string> matched;
  std::optional<double> distance_km;  // radius searches only
};

struct ResultPage {
  std::vector<Hit> hits;
  std::size_t total_before_limit = 0;
};

// Ties in every ordering fall back to timestamp, then id, which is corpus
// ordinal order.
ResultPage evaluate(const FilterQuery& q, const IndexSet& idx,
                    Execution exec = Execution::Parallel);

struct ScoredOrdinal {
  std::uint32_t ordinal;
  double score;
};

// Every record satisfying the clauses (after Reduced when enabled), in
// ordinal order. No sorting or limit.
std::vector<ScoredOrdinal> match_all(const FilterQuery& q, const IndexSet& idx,
                                     Execution exec = Execution::Parallel);

struct TemporalMatch {
  std::vector<std::uint32_t> ordinals;  // one per stage, strictly increasing in time
};

struct TemporalResult {
  std::vector<TemporalMatch> matches;
  std::size_t total_before_limit = 0;
};

// Each first-stage record appears at most once, with the completion whose
// last element comes earliest (remaining ties: lexicographically smallest
// ordinals). Sorted by first element; limited by the final stage's limit.
// Throws std::invalid_argument with fewer than two stages.
TemporalResult evaluate_temporal(const TemporalQuery& tq, const IndexSet& idx,
                                 Execution exec = Execution::Parallel);

// Records within radius_km (inclusive), nearest first. Throws
// std::invalid_argument unless radius_km > 0.
ResultPage radius_search(GeoPoint center, double radius_km, const IndexSet& idx,
                         Execution exec = Execution::Parallel);

struct Neighbor {
  std::string id;
  std::uint32_t ordinal;
  double similarity;
};

// Top-k by cosine similarity, ties by ascending id. Empty when the record
// has no feature. Throws NotFound for unknown ids.
std::vector<Neighbor> neighbors(std::string_view id, std::size_t k, const IndexSet& idx,
                                Execution exec = Execution::Parallel);

// Follow-up queries for the image view: same_day, same_weekday, and when
// applicable same_objects, same_concepts, same_location, nearby and
// similar_dates. Throws NotFound for unknown ids.
std::map<std::string, FilterQuery> link_queries(std::string_view id, const IndexSet& idx,
                                                std::size_t similar_k = 8);

}  // namespace lifelog
