#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lifelog/corpus.hpp"
#include "lifelog/engine.hpp"
#include "lifelog/explore.hpp"
#include "lifelog/history.hpp"
#include "lifelog/index.hpp"
#include "lifelog/query.hpp"

namespace lifelog {

// Service configuration. File format (docs/config.md): one `key = value`
// per line, '#' starts a comment.
struct ApiConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path corpus_path;
  std::optional<std::filesystem::path> static_dir;
  std::optional<std::filesystem::path> image_dir;
  NamedTimeTable times = NamedTimeTable::defaults();
  QueryOptions defaults;
  std::size_t history_capacity = HistoryStore::kDefaultCapacity;
  std::optional<std::string> submit_url;
  double coordinate_match_km = 1.0;
  ClusterParams clustering;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relative paths resolve against `base_dir`. Throws ConfigError.
ApiConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ApiConfig load_config(const std::filesystem::path& path);

enum class SubmitOutcome : std::uint8_t { Accepted, Rejected, Unreachable };
std::string_view outcome_name(SubmitOutcome o);

struct SubmissionReceipt {
  std::string record_id;
  std::int64_t submitted_at_ms = 0;
  SubmitOutcome outcome = SubmitOutcome::Accepted;
};

// POSTs {"id", "timestamp"} to `url` (http only). Without a url the
// submission is logged locally and accepted. 200 -> Accepted, any other
// status -> Rejected, no response -> Unreachable. Throws NotFound for an
// unknown id before touching the network.
SubmissionReceipt submit(std::string_view record_id, const IndexSet& idx,
                         const std::optional<std::string>& url);

// JSON shapes shared by the HTTP service and `lifelog query --json`.
namespace wire {
nlohmann::json record(const ImageRecord& r);
nlohmann::json options(const QueryOptions& o);
nlohmann::json result_page(const FilterQuery& q, const ResultPage& page, const Corpus& corpus);
nlohmann::json temporal_result(const TemporalQuery& tq, const TemporalResult& result,
                               const Corpus& corpus);
nlohmann::json summary(const DaySummary& s);
nlohmann::json suggestion(const Suggestion& s);
nlohmann::json keyword(const KeywordInfo& k);
nlohmann::json receipt(const SubmissionReceipt& r);
nlohmann::json error(std::string_view type, std::string_view message,
                     std::optional<std::size_t> position = std::nullopt);
}  // namespace wire

// HTTP front end over one immutable index. Handlers run concurrently;
// per-session history stores are serialized individually.
class Service {
 public:
  Service(std::shared_ptr<const IndexSet> index, ApiConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Returns the bound port; throws std::runtime_error on failure. port 0
  // picks a free port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Stand-in for the competition judge. Accepts {"id", "timestamp"} POSTs
// on /submit: 200 when the id is a target (or no targets are configured),
// 400 otherwise or on a malformed body.
class MockSubmissionServer {
 public:
  explicit MockSubmissionServer(std::set<std::string> targets = {});
  ~MockSubmissionServer();
  MockSubmissionServer(const MockSubmissionServer&) = delete;
  MockSubmissionServer& operator=(const MockSubmissionServer&) = delete;

  int bind(const std::string& host, int port);
  void run();
  void stop();
  std::size_t received() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lifelog
