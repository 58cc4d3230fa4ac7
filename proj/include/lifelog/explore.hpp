#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lifelog/index.hpp"
#include "lifelog/query.hpp"

namespace lifelog {

struct TermCount {
  std::string term;
  std::size_t count = 0;
  friend bool operator==(const TermCount&, const TermCount&) = default;
};

struct DaySummary {
  Date date;
  unsigned weekday = 0;
  std::size_t image_count = 0;
  std::vector<std::string> representatives;  // one per cluster, chronological
  std::vector<TermCount> top_locations;
  std::vector<TermCount> top_concepts;
  std::vector<TermCount> top_objects;
};

enum class FrequencyKind : std::uint8_t { Concept, Object, Attribute, Location };

std::string_view frequency_kind_name(FrequencyKind k);
std::optional<FrequencyKind> parse_frequency_kind(std::string_view name);

// Either chronological, or by how often one term occurs within each day.
struct DaySort {
  std::optional<FrequencyKind> kind;  // nullopt: date ascending
  std::string term;

  static DaySort by_date() { return {}; }
  static DaySort by_frequency(FrequencyKind k, std::string term) { return {k, std::move(term)}; }
};

struct SummaryRequest {
  std::size_t page = 0;
  std::size_t page_size = 6;
  std::optional<std::set<unsigned>> weekdays;  // 0 = sunday
  DaySort sort;
  std::size_t images_per_day = 8;
  std::size_t top_k = 5;
};

struct SummaryPage {
  std::vector<DaySummary> days;
  std::size_t total = 0;  // days after the weekday filter
  std::size_t page = 0;
  std::size_t page_size = 0;
};

// Number of occurrences of a term on one day: detections for visual kinds,
// images for locations (case-insensitive).
std::size_t term_frequency(const IndexSet& idx, Date day, FrequencyKind kind, std::string_view term);

// Pages past the end come back empty with the correct total. Throws
// std::invalid_argument when page_size is 0.
SummaryPage day_summaries(const SummaryRequest& req, const IndexSet& idx);

enum class SuggestionKind : std::uint8_t { Concept, Object, Attribute, Location, Timename };

std::string_view suggestion_kind_name(SuggestionKind k);
std::optional<SuggestionKind> parse_suggestion_kind(std::string_view name);

struct Suggestion {
  SuggestionKind kind = SuggestionKind::Concept;
  std::string term;
  std::size_t count = 0;
  std::vector<std::string> examples;  // up to 3 record ids
  std::optional<TimeWindow> window;   // timenames only
};

struct AutocompleteResult {
  std::vector<Suggestion> suggestions;
  std::vector<KeywordInfo> keywords;  // filled instead when the fragment starts with '-'
};

// Case-insensitive substring match over the corpus vocabulary, most frequent
// first. Throws std::invalid_argument when max is 0.
AutocompleteResult autocomplete(std::string_view fragment, std::optional<SuggestionKind> kind,
                                std::size_t max, const IndexSet& idx);

}  // namespace lifelog
