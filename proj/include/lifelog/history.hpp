#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lifelog {

struct HistoryEntry {
  std::string id;                  // canonical hash
  std::vector<std::string> query;  // canonical text, one per temporal stage
  std::int64_t issued_at_ms = 0;
  std::optional<std::string> first_viewed;
  std::optional<std::string> last_viewed;
  std::optional<std::string> longest_viewed;
  std::int64_t longest_view_ms = 0;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

// Deduplicating, capacity-bounded query history, most recent first. Not
// synchronized; the service serializes access per session.
class HistoryStore {
 public:
  static constexpr std::size_t kDefaultCapacity = 200;

  explicit HistoryStore(std::size_t capacity = kDefaultCapacity);

  // Moves an existing entry to the front (keeping its view data) or inserts
  // a new one, evicting the oldest beyond capacity.
  const HistoryEntry& record(std::string id, std::vector<std::string> query,
                             std::int64_t issued_at_ms);
  // Throws NotFound for an unknown entry, std::invalid_argument for
  // negative durations.
  const HistoryEntry& view_event(std::string_view entry_id, std::string record_id,
                                 std::int64_t view_ms);
  void clear() { entries_.clear(); }

  std::span<const HistoryEntry> entries() const { return entries_; }
  const HistoryEntry* find(std::string_view id) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }

  nlohmann::json to_json() const;
  // Replaces the contents. Throws std::invalid_argument on schema errors;
  // later duplicates and entries past capacity are dropped.
  void load_json(const nlohmann::json& doc);

 private:
  std::size_t capacity_;
  std::vector<HistoryEntry> entries_;
};

nlohmann::json history_entry_to_json(const HistoryEntry& e);
HistoryEntry history_entry_from_json(const nlohmann::json& j);

}  // namespace lifelog
