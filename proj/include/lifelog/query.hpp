#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lifelog {

// Declaration order is the canonical clause order.
enum class Keyword : std::uint8_t { Concepts, Objects, Attributes, Weekdays, Timename, Location, Date };

inline constexpr std::size_t kKeywordCount = 7;

struct KeywordInfo {
  Keyword keyword;
  std::string_view long_form;  // "--objects"
  std::string_view alias;      // "-o"
  std::string_view domain;     // human-readable value domain
};

std::span<const KeywordInfo> list_keywords();
const KeywordInfo& keyword_info(Keyword k);

// Scored keywords combine their terms with AND and accept per-term scores;
// the rest combine with OR.
constexpr bool is_scored(Keyword k) {
  return k == Keyword::Concepts || k == Keyword::Objects || k == Keyword::Attributes;
}

struct Coordinate {
  double lat = 0;
  double lon = 0;
  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

struct Term {
  std::string text;  // lowercase; dates normalized to yyyy/mm/dd
  // Hundredths of a confidence score, 1..100. Absent: global score applies.
  std::optional<int> min_score_pct;
  std::optional<Coordinate> coordinate;  // location terms of the form "lat,lon"

  std::optional<double> min_score() const {
    if (!min_score_pct) return std::nullopt;
    return *min_score_pct / 100.0;
  }
  friend bool operator==(const Term&, const Term&) = default;
};

struct Clause {
  Keyword keyword = Keyword::Concepts;
  std::vector<Term> terms;
  friend bool operator==(const Clause&, const Clause&) = default;
};

enum class SortOrder : std::uint8_t { Date, Confidence, ObjectCount };

std::string_view sort_name(SortOrder s);  // "date", "confidence", "objects"
std::optional<SortOrder> parse_sort(std::string_view name);

struct QueryOptions {
  double global_score = 0.10;
  std::uint32_t limit = 1000;
  bool reduced = false;
  SortOrder sort = SortOrder::Date;
  friend bool operator==(const QueryOptions&, const QueryOptions&) = default;
};

// Clauses are kept in canonical keyword order with at most one per keyword.
struct FilterQuery {
  std::vector<Clause> clauses;
  QueryOptions options;

  bool empty() const { return clauses.empty(); }
  const Clause* find(Keyword k) const;
  friend bool operator==(const FilterQuery&, const FilterQuery&) = default;
};

struct TemporalQuery {
  std::vector<FilterQuery> stages;
  // Maximum gap between consecutive stage matches.
  std::optional<std::chrono::seconds> max_span;
  // Consecutive matches must share a local calendar date.
  bool same_day = true;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message);
  // 0-based byte offset into the input.
  std::size_t position() const { return position_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t position_;
  std::string detail_;
};

// Grammar in docs/grammar.ebnf. Throws ParseError. Options are defaulted.
FilterQuery parse_query(std::string_view input);

struct Canonical {
  std::string text;
  std::uint64_t hash = 0;
  std::string id() const;  // 16 hex digits
};

// Canonical text covers clauses only; the hash also covers options.
std::string canonical_text(const FilterQuery& q);
Canonical canonicalize(const FilterQuery& q);
Canonical canonicalize(const TemporalQuery& tq);
std::string options_text(const QueryOptions& o);

}  // namespace lifelog
