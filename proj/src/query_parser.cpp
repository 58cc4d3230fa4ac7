#include <algorithm>
#include <charconv>

#include "lifelog/civil_time.hpp"
#include "lifelog/query.hpp"
#include "lifelog/text.hpp"

namespace lifelog {

namespace {

constexpr std::array<KeywordInfo, kKeywordCount> kKeywords = {{
    {Keyword::Concepts, "--concepts", "-c", "comma-separated concept terms, each optionally term(score); all must match"},
    {Keyword::Objects, "--objects", "-o", "comma-separated object terms, each optionally term(score); all must match"},
    {Keyword::Attributes, "--attributes", "-a", "comma-separated attribute terms, each optionally term(score); all must match"},
    {Keyword::Weekdays, "--weekdays", "-w", "comma-separated weekday names; any may match"},
    {Keyword::Timename, "--timename", "-t", "comma-separated named time windows (morning, afternoon, ...); any may match"},
    {Keyword::Location, "--location", "-l", "semicolon-separated named locations or lat,lon coordinates; any may match"},
    {Keyword::Date, "--date", "-d", "comma-separated dates yyyy/mm/dd or yyyy-mm-dd; any may match"},
}};

std::string valid_keywords_text() {
  std::string s;
  for (const auto& k : kKeywords) {
    if (!s.empty()) s += ", ";
    s += std::string(k.long_form) + "/" + std::string(k.alias);
  }
  return s;
}

std::optional<Keyword> lookup_keyword(std::string_view token) {
  std::string lower = to_lower(token);
  for (const auto& k : kKeywords)
    if (lower == k.long_form || lower == k.alias) return k.keyword;
  return std::nullopt;
}

bool is_keyword_token(std::string_view tok) {
  if (tok.size() < 2 || tok[0] != '-') return false;
  char c = tok[1];
  return c == '-' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

struct Token {
  std::string_view text;
  std::size_t pos;
};

std::vector<Token> keyword_tokens(std::string_view input) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < input.size()) {
    while (i < input.size() && is_space(input[i])) ++i;
    std::size_t start = i;
    while (i < input.size() && !is_space(input[i])) ++i;
    if (i > start) {
      std::string_view tok = input.substr(start, i - start);
      if (is_keyword_token(tok)) out.push_back({tok, start});
    }
  }
  return out;
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

// Decimal with at most two fractional digits, returned in hundredths.
std::optional<int> parse_hundredths(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
  if (frac.size() > 2 || whole.size() > 3) return std::nullopt;
  for (char c : whole)
    if (c < '0' || c > '9') return std::nullopt;
  for (char c : frac)
    if (c < '0' || c > '9') return std::nullopt;
  int w = 0;
  for (char c : whole) w = w * 10 + (c - '0');
  int f = 0;
  for (std::size_t i = 0; i < 2; ++i) f = f * 10 + (i < frac.size() ? frac[i] - '0' : 0);
  return w * 100 + f;
}

bool is_number(std::string_view s) {
  if (!s.empty() && s[0] == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  bool digits = false, dot = false;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      digits = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      return false;
    }
  }
  return digits && s.front() != '.' && s.back() != '.';
}

double to_double(std::string_view s) {
  double v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

struct RawTerm {
  std::string_view text;
  std::size_t pos;
};

std::vector<RawTerm> split_terms(std::string_view body, std::size_t body_pos, char sep) {
  std::vector<RawTerm> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == sep) {
      std::string_view raw = body.substr(start, i - start);
      std::size_t lead = 0;
      while (lead < raw.size() && is_space(raw[lead])) ++lead;
      out.push_back({trim(raw), body_pos + start + lead});
      start = i + 1;
    }
  }
  return out;
}

Term parse_term(Keyword kw, RawTerm raw) {
  const KeywordInfo& info = keyword_info(kw);
  if (raw.text.empty())
    throw ParseError(raw.pos, "empty term in " + std::string(info.long_form));

  std::string_view text = raw.text;
  Term term;
  if (text.back() == ')') {
    std::size_t open = text.rfind('(');
    if (open == std::string_view::npos)
      throw ParseError(raw.pos + text.size() - 1, "unbalanced ')' in term");
    std::string_view score_text = trim(text.substr(open + 1, text.size() - open - 2));
    std::string_view name = trim(text.substr(0, open));
    if (name.empty())
      throw ParseError(raw.pos + open, "score without a preceding term");
    if (!is_scored(kw))
      throw ParseError(raw.pos + open, std::string(info.long_form) + " does not accept scores");
    auto pct = parse_hundredths(score_text);
    if (!pct || *pct < 1 || *pct > 100)
      throw ParseError(raw.pos + open + 1,
                       "score '" + std::string(score_text) + "' for term '" + std::string(name) +
                           "' must be a decimal in (0, 1] with at most two decimals");
    term.min_score_pct = *pct;
    text = name;
  }
  if (text.find_first_of("()") != std::string_view::npos)
    throw ParseError(raw.pos + text.find_first_of("()"), "unexpected parenthesis in term");

  if (kw == Keyword::Location) {
    std::size_t comma = text.find(',');
    if (comma != std::string_view::npos) {
      std::string_view lat = trim(text.substr(0, comma));
      std::string_view lon = trim(text.substr(comma + 1));
      if (!is_number(lat) || !is_number(lon))
        throw ParseError(raw.pos + comma,
                         "location terms may only contain a comma as a lat,lon coordinate");
      double la = to_double(lat), lo = to_double(lon);
      if (la < -90 || la > 90 || lo < -180 || lo > 180)
        throw ParseError(raw.pos, "coordinate out of range");
      term.text = std::string(lat) + "," + std::string(lon);
      term.coordinate = Coordinate{la, lo};
      return term;
    }
  }
  if (text.front() == '-')
    throw ParseError(raw.pos, "terms must not start with '-'");

  if (kw == Keyword::Date) {
    auto d = parse_date(text);
    if (!d)
      throw ParseError(raw.pos, "invalid date '" + std::string(text) +
                                    "', expected yyyy/mm/dd or yyyy-mm-dd");
    term.text = format_date(*d);
    return term;
  }
  term.text = to_lower(collapse_spaces(text));
  return term;
}

}  // namespace

std::span<const KeywordInfo> list_keywords() { return kKeywords; }

const KeywordInfo& keyword_info(Keyword k) { return kKeywords[static_cast<std::size_t>(k)]; }

std::string_view sort_name(SortOrder s) {
  switch (s) {
    case SortOrder::Date: return "date";
    case SortOrder::Confidence: return "confidence";
    case SortOrder::ObjectCount: return "objects";
  }
  return "date";
}

std::optional<SortOrder> parse_sort(std::string_view name) {
  if (name == "date") return SortOrder::Date;
  if (name == "confidence") return SortOrder::Confidence;
  if (name == "objects") return SortOrder::ObjectCount;
  return std::nullopt;
}

const Clause* FilterQuery::find(Keyword k) const {
  for (const auto& c : clauses)
    if (c.keyword == k) return &c;
  return nullptr;
}

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
      position_(position),
      detail_(message) {}

FilterQuery parse_query(std::string_view input) {
  FilterQuery q;
  auto keywords = keyword_tokens(input);

  std::size_t first = keywords.empty() ? input.size() : keywords.front().pos;
  std::string_view prefix = input.substr(0, first);
  if (!trim(prefix).empty()) {
    std::size_t at = 0;
    while (is_space(input[at])) ++at;
    throw ParseError(at, "expected a keyword such as --objects or -o; valid keywords: " +
                             valid_keywords_text());
  }

  std::array<bool, kKeywordCount> seen{};
  for (std::size_t k = 0; k < keywords.size(); ++k) {
    const Token& tok = keywords[k];
    auto kw = lookup_keyword(tok.text);
    if (!kw)
      throw ParseError(tok.pos, "unknown keyword '" + std::string(tok.text) +
                                    "'; valid keywords: " + valid_keywords_text());
    auto idx = static_cast<std::size_t>(*kw);
    if (seen[idx])
      throw ParseError(tok.pos, "duplicate keyword '" + std::string(tok.text) + "'");
    seen[idx] = true;

    std::size_t body_pos = tok.pos + tok.text.size();
    std::size_t body_end = k + 1 < keywords.size() ? keywords[k + 1].pos : input.size();
    std::string_view body = input.substr(body_pos, body_end - body_pos);
    if (trim(body).empty())
      throw ParseError(tok.pos, "keyword '" + std::string(tok.text) + "' requires at least one term");

    Clause clause{*kw, {}};
    char sep = *kw == Keyword::Location ? ';' : ',';
    for (const RawTerm& raw : split_terms(body, body_pos, sep))
      clause.terms.push_back(parse_term(*kw, raw));

    if (!is_scored(*kw)) {
      std::sort(clause.terms.begin(), clause.terms.end(),
                [](const Term& a, const Term& b) { return a.text < b.text; });
      clause.terms.erase(std::unique(clause.terms.begin(), clause.terms.end()),
                         clause.terms.end());
    }
    q.clauses.push_back(std::move(clause));
  }
  std::sort(q.clauses.begin(), q.clauses.end(),
            [](const Clause& a, const Clause& b) { return a.keyword < b.keyword; });
  return q;
}

}  // namespace lifelog
