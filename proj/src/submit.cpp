#include <chrono>
#include <iostream>
#include <mutex>

#include <httplib.h>

#include "lifelog/api.hpp"

namespace lifelog {

using nlohmann::json;

std::string_view outcome_name(SubmitOutcome o) {
  switch (o) {
    case SubmitOutcome::Accepted: return "accepted";
    case SubmitOutcome::Rejected: return "rejected";
    case SubmitOutcome::Unreachable: return "unreachable";
  }
  return "unreachable";
}

namespace {

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

std::optional<Endpoint> split_url(const std::string& url) {
  constexpr std::string_view scheme = "http://";
  if (url.rfind(scheme, 0) != 0) return std::nullopt;
  auto slash = url.find('/', scheme.size());
  Endpoint e;
  e.origin = url.substr(0, slash);
  e.path = slash == std::string::npos ? "/" : url.substr(slash);
  if (e.origin.size() == scheme.size()) return std::nullopt;
  return e;
}

}  // namespace

SubmissionReceipt submit(std::string_view record_id, const IndexSet& idx,
                         const std::optional<std::string>& url) {
  auto ord = idx.corpus().ordinal_of(record_id);
  if (!ord) throw NotFound("unknown record id '" + std::string(record_id) + "'");
  const ImageRecord& r = idx.corpus()[*ord];

  SubmissionReceipt receipt{r.id, now_ms(), SubmitOutcome::Accepted};
  if (!url) {
    std::clog << "practice submission: " << r.id << " (" << format_rfc3339(r.timestamp) << ")\n";
    return receipt;
  }
  auto endpoint = split_url(*url);
  if (!endpoint) {
    receipt.outcome = SubmitOutcome::Unreachable;
    return receipt;
  }
  httplib::Client client(endpoint->origin);
  client.set_connection_timeout(2, 0);
  client.set_read_timeout(5, 0);
  json body = {{"id", r.id}, {"timestamp", format_rfc3339(r.timestamp)}};
  auto res = client.Post(endpoint->path, body.dump(), "application/json");
  if (!res)
    receipt.outcome = SubmitOutcome::Unreachable;
  else
    receipt.outcome = res->status == 200 ? SubmitOutcome::Accepted : SubmitOutcome::Rejected;
  return receipt;
}

struct MockSubmissionServer::Impl {
  httplib::Server server;
  std::set<std::string> targets;
  mutable std::mutex mu;
  std::size_t received = 0;
};

MockSubmissionServer::MockSubmissionServer(std::set<std::string> targets)
    : impl_(std::make_unique<Impl>()) {
  impl_->targets = std::move(targets);
  impl_->server.Post("/submit", [this](const httplib::Request& req, httplib::Response& res) {
    json body = json::parse(req.body, nullptr, false);
    {
      std::lock_guard lock(impl_->mu);
      ++impl_->received;
    }
    if (body.is_discarded() || !body.is_object() || !body.contains("id") ||
        !body["id"].is_string() || !body.contains("timestamp") || !body["timestamp"].is_string()) {
      res.status = 400;
      res.set_content(R"({"result":"malformed"})", "application/json");
      return;
    }
    std::string id = body["id"].get<std::string>();
    bool ok = impl_->targets.empty() || impl_->targets.count(id) > 0;
    res.status = ok ? 200 : 400;
    res.set_content(json{{"result", ok ? "correct" : "wrong"}, {"id", id}}.dump(),
                    "application/json");
  });
}

MockSubmissionServer::~MockSubmissionServer() { stop(); }

int MockSubmissionServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : port;
  if (port != 0 && !impl_->server.bind_to_port(host, port)) bound = -1;
  if (bound < 0) throw std::runtime_error("cannot bind mock submission server to " + host + ":" + std::to_string(port));
  return bound;
}

void MockSubmissionServer::run() { impl_->server.listen_after_bind(); }

void MockSubmissionServer::stop() {
  if (impl_) impl_->server.stop();
}

std::size_t MockSubmissionServer::received() const {
  std::lock_guard lock(impl_->mu);
  return impl_->received;
}

}  // namespace lifelog
