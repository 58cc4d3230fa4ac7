#pragma once

// Reference replay model for the query history: a list of plain structs,
// front = most recent, rewritten from scratch on every event.

#include <cstdint>
#include <list>
#include <optional>
#include <string>
#include <vector>

namespace history_model {

struct Entry {
  std::string id;
  std::vector<std::string> query;
  std::int64_t issued_at = 0;
  std::optional<std::string> first, last, longest;
  std::int64_t longest_ms = 0;
};

class Model {
 public:
  explicit Model(std::size_t capacity) : capacity_(capacity) {}

  void record(const std::string& id, const std::vector<std::string>& query, std::int64_t at) {
    Entry e{id, query, at, {}, {}, {}, 0};
    for (auto it = list_.begin(); it != list_.end(); ++it) {
      if (it->id == id) {
        e = *it;
        e.issued_at = at;
        list_.erase(it);
        break;
      }
    }
    list_.push_front(e);
    while (list_.size() > capacity_) list_.pop_back();
  }

  // False when the entry does not exist.
  bool view(const std::string& id, const std::string& record, std::int64_t ms) {
    for (auto& e : list_) {
      if (e.id != id) continue;
      if (!e.first) e.first = record;
      e.last = record;
      if (!e.longest || ms > e.longest_ms) {
        e.longest = record;
        e.longest_ms = ms;
      }
      return true;
    }
    return false;
  }

  void clear() { list_.clear(); }
  const std::list<Entry>& entries() const { return list_; }

 private:
  std::size_t capacity_;
  std::list<Entry> list_;
};

}  // namespace history_model
