#include <algorithm>
#include <cstdio>

#include "lifelog/query.hpp"
#include "lifelog/text.hpp"

namespace lifelog {

namespace {

std::string render_term(const Term& t) {
  std::string s = t.text;
  if (t.min_score_pct) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "(%d.%02d)", *t.min_score_pct / 100, *t.min_score_pct % 100);
    s += buf;
  }
  return s;
}

}  // namespace

std::string Canonical::id() const { return to_hex(hash); }

std::string canonical_text(const FilterQuery& q) {
  std::string out;
  for (std::size_t k = 0; k < kKeywordCount; ++k) {
    const Clause* c = q.find(static_cast<Keyword>(k));
    if (!c) continue;
    if (!out.empty()) out += ' ';
    out += keyword_info(c->keyword).long_form;
    out += ' ';
    // Parsed OR clauses are already sorted; AND clauses keep input order.
    std::vector<const Term*> terms;
    for (const auto& t : c->terms) terms.push_back(&t);
    if (!is_scored(c->keyword))
      std::stable_sort(terms.begin(), terms.end(),
                       [](const Term* a, const Term* b) { return a->text < b->text; });
    char sep = c->keyword == Keyword::Location ? ';' : ',';
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i) out += sep;
      out += render_term(*terms[i]);
    }
  }
  return out;
}

std::string options_text(const QueryOptions& o) {
  return "score=" + format_double(o.global_score) + ";limit=" + std::to_string(o.limit) +
         ";reduced=" + (o.reduced ? "true" : "false") + ";sort=" + std::string(sort_name(o.sort));
}

Canonical canonicalize(const FilterQuery& q) {
  Canonical c;
  c.text = canonical_text(q);
  c.hash = fnv1a64(c.text + "\n" + options_text(q.options));
  return c;
}

Canonical canonicalize(const TemporalQuery& tq) {
  Canonical c;
  std::string digest;
  for (std::size_t i = 0; i < tq.stages.size(); ++i) {
    std::string stage = canonical_text(tq.stages[i]);
    if (i) c.text += " >> ";
    c.text += stage;
    digest += stage + "\n" + options_text(tq.stages[i].options) + "\n";
  }
  digest += "span=" + (tq.max_span ? std::to_string(tq.max_span->count()) : std::string("none"));
  digest += tq.same_day ? ";same_day" : ";any_day";
  c.hash = fnv1a64(digest);
  return c;
}

}  // namespace lifelog
