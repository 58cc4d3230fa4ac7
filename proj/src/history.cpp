#include "lifelog/history.hpp"

#include <algorithm>
#include <stdexcept>

#include "lifelog/errors.hpp"

namespace lifelog {

using nlohmann::json;

HistoryStore::HistoryStore(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("history capacity must be at least 1");
}

const HistoryEntry* HistoryStore::find(std::string_view id) const {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const HistoryEntry& e) { return e.id == id; });
  return it == entries_.end() ? nullptr : &*it;
}

const HistoryEntry& HistoryStore::record(std::string id, std::vector<std::string> query,
                                         std::int64_t issued_at_ms) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const HistoryEntry& e) { return e.id == id; });
  if (it != entries_.end()) {
    std::rotate(entries_.begin(), it, it + 1);
    entries_.front().issued_at_ms = issued_at_ms;
    return entries_.front();
  }
  HistoryEntry e;
  e.id = std::move(id);
  e.query = std::move(query);
  e.issued_at_ms = issued_at_ms;
  entries_.insert(entries_.begin(), std::move(e));
  if (entries_.size() > capacity_) entries_.resize(capacity_);
  return entries_.front();
}

const HistoryEntry& HistoryStore::view_event(std::string_view entry_id, std::string record_id,
                                             std::int64_t view_ms) {
  if (view_ms < 0) throw std::invalid_argument("view_ms must not be negative");
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const HistoryEntry& e) { return e.id == entry_id; });
  if (it == entries_.end())
    throw NotFound("unknown history entry '" + std::string(entry_id) + "'");
  if (!it->first_viewed) it->first_viewed = record_id;
  if (!it->longest_viewed || view_ms > it->longest_view_ms) {
    it->longest_viewed = record_id;
    it->longest_view_ms = view_ms;
  }
  it->last_viewed = std::move(record_id);
  return *it;
}

json history_entry_to_json(const HistoryEntry& e) {
  auto opt = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
  return json{{"id", e.id},
              {"query", e.query},
              {"issued_at", e.issued_at_ms},
              {"first_viewed", opt(e.first_viewed)},
              {"last_viewed", opt(e.last_viewed)},
              {"longest_viewed", opt(e.longest_viewed)},
              {"longest_view_ms", e.longest_view_ms}};
}

HistoryEntry history_entry_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("history entry must be an object");
  HistoryEntry e;
  auto need = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument(std::string("history entry lacks '") + key + "'");
    return *it;
  };
  const json& id = need("id");
  if (!id.is_string() || id.get<std::string>().empty())
    throw std::invalid_argument("history 'id' must be a non-empty string");
  e.id = id.get<std::string>();
  const json& query = need("query");
  if (!query.is_array()) throw std::invalid_argument("history 'query' must be an array of strings");
  for (const auto& q : query) {
    if (!q.is_string()) throw std::invalid_argument("history 'query' must be an array of strings");
    e.query.push_back(q.get<std::string>());
  }
  const json& issued = need("issued_at");
  if (!issued.is_number_integer()) throw std::invalid_argument("history 'issued_at' must be an integer");
  e.issued_at_ms = issued.get<std::int64_t>();
  auto opt = [&](const char* key, std::optional<std::string>& out) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return;
    if (!it->is_string()) throw std::invalid_argument(std::string("history '") + key + "' must be a string or null");
    out = it->get<std::string>();
  };
  opt("first_viewed", e.first_viewed);
  opt("last_viewed", e.last_viewed);
  opt("longest_viewed", e.longest_viewed);
  if (auto it = j.find("longest_view_ms"); it != j.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
      throw std::invalid_argument("history 'longest_view_ms' must be a non-negative integer");
    e.longest_view_ms = it->get<std::int64_t>();
  }
  return e;
}

json HistoryStore::to_json() const {
  json out = json::array();
  for (const auto& e : entries_) out.push_back(history_entry_to_json(e));
  return out;
}

void HistoryStore::load_json(const json& doc) {
  if (!doc.is_array()) throw std::invalid_argument("history document must be a JSON array");
  std::vector<HistoryEntry> loaded;
  for (const auto& j : doc) {
    HistoryEntry e = history_entry_from_json(j);
    bool dup = std::any_of(loaded.begin(), loaded.end(),
                           [&](const HistoryEntry& x) { return x.id == e.id; });
    if (!dup && loaded.size() < capacity_) loaded.push_back(std::move(e));
  }
  entries_ = std::move(loaded);
}

}  // namespace lifelog
