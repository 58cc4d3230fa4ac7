#include <charconv>
#include <chrono>
#include <map>
#include <mutex>

#include <httplib.h>

#include "lifelog/api.hpp"
#include "lifelog/text.hpp"

namespace lifelog {

using nlohmann::json;

namespace {

// Raised inside handlers for malformed parameters; mapped to 400.
class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

double number_param(const std::string& name, const std::string& v) {
  double out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw BadRequest("parameter '" + name + "' must be a number");
  return out;
}

long long integer_param(const std::string& name, const std::string& v, long long lo, long long hi) {
  long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || out < lo || out > hi)
    throw BadRequest("parameter '" + name + "' must be an integer in [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  return out;
}

bool bool_param(const std::string& name, const std::string& v) {
  std::string s = to_lower(v);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw BadRequest("parameter '" + name + "' must be true or false");
}

// Applies score/limit/reduced/sort overrides from a flat string map.
QueryOptions options_from(const std::map<std::string, std::string>& kv, QueryOptions o) {
  if (auto it = kv.find("score"); it != kv.end()) {
    o.global_score = number_param("score", it->second);
    if (o.global_score < 0 || o.global_score > 1) throw BadRequest("parameter 'score' must lie in [0, 1]");
  }
  if (auto it = kv.find("limit"); it != kv.end())
    o.limit = static_cast<std::uint32_t>(integer_param("limit", it->second, 1, 0xffffffffLL));
  if (auto it = kv.find("reduced"); it != kv.end()) o.reduced = bool_param("reduced", it->second);
  if (auto it = kv.find("sort"); it != kv.end()) {
    auto s = parse_sort(to_lower(it->second));
    if (!s) throw BadRequest("parameter 'sort' must be date, confidence or objects");
    o.sort = *s;
  }
  return o;
}

std::map<std::string, std::string> query_params(const httplib::Request& req) {
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : req.params) kv[k] = v;
  return kv;
}

// JSON body fields to the same flat map (numbers and booleans stringified).
std::map<std::string, std::string> body_options(const json& body) {
  std::map<std::string, std::string> kv;
  for (const char* key : {"score", "limit", "reduced", "sort"}) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) continue;
    if (it->is_string())
      kv[key] = it->get<std::string>();
    else if (it->is_boolean())
      kv[key] = it->get<bool>() ? "true" : "false";
    else if (it->is_number_integer())
      kv[key] = std::to_string(it->get<long long>());
    else if (it->is_number())
      kv[key] = format_double(it->get<double>());
    else
      throw BadRequest(std::string("field '") + key + "' has the wrong type");
  }
  return kv;
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded()) throw BadRequest("request body is not valid JSON");
  return body;
}

struct StageError : ParseError {
  StageError(std::size_t stage, const ParseError& e) : ParseError(e), stage(stage) {}
  std::size_t stage;
};

TemporalQuery temporal_from(const json& body, const QueryOptions& defaults) {
  if (!body.is_object()) throw BadRequest("request body must be a JSON object");
  auto stages = body.find("stages");
  if (stages == body.end() || !stages->is_array())
    throw BadRequest("field 'stages' must be an array of query strings");
  QueryOptions opts = options_from(body_options(body), defaults);
  TemporalQuery tq;
  for (std::size_t i = 0; i < stages->size(); ++i) {
    if (!(*stages)[i].is_string()) throw BadRequest("field 'stages' must be an array of query strings");
    try {
      FilterQuery q = parse_query((*stages)[i].get<std::string>());
      q.options = opts;
      tq.stages.push_back(std::move(q));
    } catch (const ParseError& e) {
      throw StageError(i, e);
    }
  }
  if (auto span = body.find("max_span"); span != body.end() && !span->is_null()) {
    if (!span->is_number_integer() || span->get<long long>() < 0)
      throw BadRequest("field 'max_span' must be a non-negative number of seconds");
    tq.max_span = std::chrono::seconds{span->get<long long>()};
    tq.same_day = false;
  }
  if (auto sd = body.find("same_day"); sd != body.end() && !sd->is_null()) {
    if (!sd->is_boolean()) throw BadRequest("field 'same_day' must be a boolean");
    tq.same_day = sd->get<bool>();
  }
  return tq;
}

}  // namespace

struct Service::Impl {
  std::shared_ptr<const IndexSet> index;
  ApiConfig config;
  httplib::Server server;

  struct Session {
    std::mutex mu;
    HistoryStore store;
    explicit Session(std::size_t capacity) : store(capacity) {}
  };
  std::mutex sessions_mu;
  std::map<std::string, std::unique_ptr<Session>> sessions;

  Session& session(const httplib::Request& req) {
    std::string name = "default";
    if (req.has_header("X-Session-Id")) name = req.get_header_value("X-Session-Id");
    if (req.has_param("session")) name = req.get_param_value("session");
    std::lock_guard lock(sessions_mu);
    auto& s = sessions[name];
    if (!s) s = std::make_unique<Session>(config.history_capacity);
    return *s;
  }

  // Runs a handler, mapping every expected failure to a 4xx envelope.
  template <class F>
  auto guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const StageError& e) {
        json body = wire::error("parse_error", e.detail(), e.position());
        body["error"]["stage"] = e.stage;
        reply(res, 400, body);
      } catch (const ParseError& e) {
        reply(res, 400, wire::error("parse_error", e.detail(), e.position()));
      } catch (const NotFound& e) {
        reply(res, 404, wire::error("not_found", e.what()));
      } catch (const BadRequest& e) {
        reply(res, 400, wire::error("bad_request", e.what()));
      } catch (const std::invalid_argument& e) {
        reply(res, 400, wire::error("bad_request", e.what()));
      } catch (const std::exception& e) {
        reply(res, 500, wire::error("internal", e.what()));
      }
    };
  }

  void routes();
};

void Service::Impl::routes() {
  server.Get("/api/health", guarded([this](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"status", "ok"}, {"records", index->corpus().size()}});
  }));

  server.Get("/api/keywords", guarded([](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& k : list_keywords()) out.push_back(wire::keyword(k));
    reply(res, 200, {{"keywords", out}});
  }));

  server.Get("/api/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
    FilterQuery q = parse_query(param(req, "q").value_or(""));
    q.options = options_from(query_params(req), config.defaults);
    reply(res, 200, wire::result_page(q, evaluate(q, *index), index->corpus()));
  }));

  server.Post("/api/search/temporal", guarded([this](const httplib::Request& req, httplib::Response& res) {
    TemporalQuery tq = temporal_from(parse_body(req), config.defaults);
    reply(res, 200, wire::temporal_result(tq, evaluate_temporal(tq, *index), index->corpus()));
  }));

  server.Get("/api/summaries", guarded([this](const httplib::Request& req, httplib::Response& res) {
    SummaryRequest sr;
    if (auto v = param(req, "page")) sr.page = static_cast<std::size_t>(integer_param("page", *v, 0, 1'000'000'000));
    if (auto v = param(req, "page_size"))
      sr.page_size = static_cast<std::size_t>(integer_param("page_size", *v, 1, 100'000));
    if (auto v = param(req, "images_per_day"))
      sr.images_per_day = static_cast<std::size_t>(integer_param("images_per_day", *v, 0, 10'000));
    if (auto v = param(req, "top_k")) sr.top_k = static_cast<std::size_t>(integer_param("top_k", *v, 0, 1000));
    if (auto v = param(req, "weekday"); v && !trim(*v).empty()) {
      std::set<unsigned> days;
      std::string_view rest = *v;
      while (true) {
        auto comma = rest.find(',');
        std::string name = to_lower(trim(rest.substr(0, comma)));
        auto wd = parse_weekday(name);
        if (!wd) throw BadRequest("unknown weekday '" + name + "'");
        days.insert(*wd);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
      sr.weekdays = std::move(days);
    }
    if (auto v = param(req, "sort"); v && *v != "date") {
      auto colon = v->find(':');
      auto kind = colon == std::string::npos ? std::nullopt : parse_frequency_kind(to_lower(v->substr(0, colon)));
      if (!kind || colon + 1 >= v->size())
        throw BadRequest("parameter 'sort' must be 'date' or '<concept|object|attribute|location>:<term>'");
      sr.sort = DaySort::by_frequency(*kind, to_lower(trim(v->substr(colon + 1))));
    }
    SummaryPage page = day_summaries(sr, *index);
    json days = json::array();
    for (const auto& d : page.days) {
      json j = wire::summary(d);
      if (sr.sort.kind) j["sort_count"] = term_frequency(*index, d.date, *sr.sort.kind, sr.sort.term);
      days.push_back(std::move(j));
    }
    reply(res, 200, {{"total", page.total}, {"page", page.page}, {"page_size", page.page_size}, {"days", days}});
  }));

  server.Get("/api/autocomplete", guarded([this](const httplib::Request& req, httplib::Response& res) {
    std::string fragment = param(req, "fragment").value_or("");
    std::optional<SuggestionKind> kind;
    if (auto v = param(req, "kind"); v && !v->empty()) {
      kind = parse_suggestion_kind(to_lower(*v));
      if (!kind) throw BadRequest("parameter 'kind' must be concept, object, attribute, location or timename");
    }
    std::size_t max = 20;
    if (auto v = param(req, "max")) max = static_cast<std::size_t>(integer_param("max", *v, 1, 100'000));
    AutocompleteResult r = autocomplete(fragment, kind, max, *index);
    json sugg = json::array(), kws = json::array();
    for (const auto& s : r.suggestions) sugg.push_back(wire::suggestion(s));
    for (const auto& k : r.keywords) kws.push_back(wire::keyword(k));
    reply(res, 200, {{"fragment", fragment}, {"suggestions", sugg}, {"keywords", kws}});
  }));

  server.Get(R"(/api/image/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    auto ord = index->corpus().ordinal_of(id);
    if (!ord) throw NotFound("unknown record id '" + id + "'");
    std::size_t k = 8;
    if (auto v = param(req, "k")) k = static_cast<std::size_t>(integer_param("k", *v, 0, 1000));
    json nb = json::array();
    for (const auto& n : neighbors(id, k, *index)) nb.push_back({{"id", n.id}, {"similarity", n.similarity}});
    json links = json::object();
    for (const auto& [name, q] : link_queries(id, *index)) links[name] = canonical_text(q);
    reply(res, 200, {{"record", wire::record(index->corpus()[*ord])}, {"neighbors", nb}, {"links", links}});
  }));

  server.Get("/api/geo", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto lat = param(req, "center_lat"), lon = param(req, "center_lon"), radius = param(req, "radius_km");
    if (!lat || !lon || !radius) throw BadRequest("center_lat, center_lon and radius_km are required");
    GeoPoint center{number_param("center_lat", *lat), number_param("center_lon", *lon)};
    if (center.lat < -90 || center.lat > 90 || center.lon < -180 || center.lon > 180)
      throw BadRequest("center coordinates out of range");
    ResultPage page = radius_search(center, number_param("radius_km", *radius), *index);
    if (auto v = param(req, "limit")) {
      auto limit = static_cast<std::size_t>(integer_param("limit", *v, 1, 0xffffffffLL));
      if (page.hits.size() > limit) page.hits.resize(limit);
    }
    json hits = json::array();
    for (const auto& h : page.hits)
      hits.push_back({{"id", h.id},
                      {"distance_km", *h.distance_km},
                      {"timestamp", format_rfc3339(index->corpus()[h.ordinal].timestamp)}});
    reply(res, 200, {{"center", {{"lat", center.lat}, {"lon", center.lon}}},
                     {"radius_km", number_param("radius_km", *radius)},
                     {"total", page.total_before_limit},
                     {"hits", hits}});
  }));

  server.Post("/api/submit", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    if (!body.is_object() || !body.contains("id") || !body["id"].is_string())
      throw BadRequest("body must be {\"id\": <record id>}");
    reply(res, 200, wire::receipt(submit(body["id"].get<std::string>(), *index, config.submit_url)));
  }));

  server.Get("/api/history", guarded([this](const httplib::Request& req, httplib::Response& res) {
    Session& s = session(req);
    std::lock_guard lock(s.mu);
    reply(res, 200, {{"capacity", s.store.capacity()}, {"entries", s.store.to_json()}});
  }));

  server.Post("/api/history", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    if (!body.is_object()) throw BadRequest("request body must be a JSON object");
    auto queries = body.find("queries");
    if (queries == body.end() || !queries->is_array() || queries->empty())
      throw BadRequest("field 'queries' must be a non-empty array of query strings");
    json temporal = body;
    temporal["stages"] = *queries;
    TemporalQuery tq = temporal_from(temporal, config.defaults);
    Canonical c = tq.stages.size() == 1 ? canonicalize(tq.stages[0]) : canonicalize(tq);
    std::vector<std::string> texts;
    for (const auto& q : tq.stages) texts.push_back(canonical_text(q));
    Session& s = session(req);
    std::lock_guard lock(s.mu);
    const HistoryEntry& e = s.store.record(c.id(), std::move(texts), now_ms());
    reply(res, 200, {{"entry", history_entry_to_json(e)}});
  }));

  server.Post("/api/history/view", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    if (!body.is_object() || !body.contains("entry") || !body["entry"].is_string() ||
        !body.contains("record") || !body["record"].is_string() || !body.contains("view_ms") ||
        !body["view_ms"].is_number_integer())
      throw BadRequest(R"(body must be {"entry": id, "record": id, "view_ms": integer})");
    Session& s = session(req);
    std::lock_guard lock(s.mu);
    const HistoryEntry& e = s.store.view_event(body["entry"].get<std::string>(),
                                               body["record"].get<std::string>(),
                                               body["view_ms"].get<std::int64_t>());
    reply(res, 200, {{"entry", history_entry_to_json(e)}});
  }));

  server.Put("/api/history", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    if (body.is_object() && body.contains("entries")) body = body["entries"];
    Session& s = session(req);
    std::lock_guard lock(s.mu);
    s.store.load_json(body);
    reply(res, 200, {{"capacity", s.store.capacity()}, {"entries", s.store.to_json()}});
  }));

  server.Delete("/api/history", guarded([this](const httplib::Request& req, httplib::Response& res) {
    Session& s = session(req);
    std::lock_guard lock(s.mu);
    s.store.clear();
    reply(res, 200, {{"capacity", s.store.capacity()}, {"entries", json::array()}});
  }));

  if (config.image_dir) server.set_mount_point("/images", config.image_dir->string());
  if (config.static_dir) server.set_mount_point("/", config.static_dir->string());

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 404 && res.body.empty())
      reply(res, 404, wire::error("not_found", "no such endpoint"));
  });
}

Service::Service(std::shared_ptr<const IndexSet> index, ApiConfig config)
    : impl_(std::make_unique<Impl>()) {
  impl_->index = std::move(index);
  impl_->config = std::move(config);
  impl_->routes();
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0)
    bound = impl_->server.bind_to_any_port(host);
  else if (impl_->server.bind_to_port(host, port))
    bound = port;
  if (bound < 0) throw std::runtime_error("cannot bind to " + host + ":" + std::to_string(port));
  return bound;
}

void Service::run() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_) impl_->server.stop();
}

bool Service::running() const { return impl_->server.is_running(); }

}  // namespace lifelog
