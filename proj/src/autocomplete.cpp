#include <algorithm>
#include <stdexcept>

#include "lifelog/explore.hpp"
#include "lifelog/text.hpp"

namespace lifelog {

std::string_view suggestion_kind_name(SuggestionKind k) {
  switch (k) {
    case SuggestionKind::Concept: return "concept";
    case SuggestionKind::Object: return "object";
    case SuggestionKind::Attribute: return "attribute";
    case SuggestionKind::Location: return "location";
    case SuggestionKind::Timename: return "timename";
  }
  return "concept";
}

std::optional<SuggestionKind> parse_suggestion_kind(std::string_view name) {
  if (name == "concept") return SuggestionKind::Concept;
  if (name == "object") return SuggestionKind::Object;
  if (name == "attribute") return SuggestionKind::Attribute;
  if (name == "location") return SuggestionKind::Location;
  if (name == "timename") return SuggestionKind::Timename;
  return std::nullopt;
}

namespace {

constexpr std::size_t kExamples = 3;

SuggestionKind suggestion_kind(DetectionKind k) {
  switch (k) {
    case DetectionKind::Concept: return SuggestionKind::Concept;
    case DetectionKind::Object: return SuggestionKind::Object;
    case DetectionKind::Attribute: return SuggestionKind::Attribute;
  }
  return SuggestionKind::Concept;
}

// Highest-scoring distinct records.
std::vector<std::string> best_examples(const Corpus& corpus, std::span<const Posting> postings) {
  std::vector<Posting> sorted(postings.begin(), postings.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Posting& a, const Posting& b) { return a.score > b.score; });
  std::vector<std::string> out;
  for (const Posting& p : sorted) {
    const std::string& id = corpus[p.ordinal].id;
    if (std::find(out.begin(), out.end(), id) != out.end()) continue;
    out.push_back(id);
    if (out.size() == kExamples) break;
  }
  return out;
}

}  // namespace

AutocompleteResult autocomplete(std::string_view fragment, std::optional<SuggestionKind> kind,
                                std::size_t max, const IndexSet& idx) {
  if (max == 0) throw std::invalid_argument("max must be at least 1");
  AutocompleteResult result;
  std::string needle = to_lower(trim(fragment));

  if (!needle.empty() && needle.front() == '-') {
    for (const KeywordInfo& k : list_keywords())
      if (k.long_form.starts_with(needle) || k.alias.starts_with(needle))
        result.keywords.push_back(k);
    return result;
  }

  const Corpus& corpus = idx.corpus();
  auto wanted = [&](SuggestionKind k) { return !kind || *kind == k; };

  for (const auto& [key, postings] : idx.term_index()) {
    SuggestionKind sk = suggestion_kind(key.first);
    if (!wanted(sk) || !contains_ci(key.second, needle)) continue;
    result.suggestions.push_back({sk, key.second, postings.size(), best_examples(corpus, postings), {}});
  }

  if (wanted(SuggestionKind::Location)) {
    for (const auto& [key, ords] : idx.location_index()) {
      if (!contains_ci(key, needle)) continue;
      Suggestion s{SuggestionKind::Location, idx.location_display(key), ords.size(), {}, {}};
      for (std::size_t i = 0; i < ords.size() && i < kExamples; ++i)
        s.examples.push_back(corpus[ords[i]].id);
      result.suggestions.push_back(std::move(s));
    }
  }

  if (wanted(SuggestionKind::Timename)) {
    for (const auto& [name, window] : idx.config().times.windows()) {
      std::size_t count = idx.timename_count(name);
      if (count == 0 || !contains_ci(name, needle)) continue;
      Suggestion s{SuggestionKind::Timename, name, count, {}, window};
      for (std::size_t ord = 0; ord < corpus.size() && s.examples.size() < kExamples; ++ord)
        if (window.contains(corpus[ord].timestamp.local_time_of_day()))
          s.examples.push_back(corpus[ord].id);
      result.suggestions.push_back(std::move(s));
    }
  }

  std::stable_sort(result.suggestions.begin(), result.suggestions.end(),
                   [](const Suggestion& a, const Suggestion& b) {
                     if (a.count != b.count) return a.count > b.count;
                     if (a.term != b.term) return a.term < b.term;
                     return a.kind < b.kind;
                   });
  if (result.suggestions.size() > max) result.suggestions.resize(max);
  return result;
}

}  // namespace lifelog
