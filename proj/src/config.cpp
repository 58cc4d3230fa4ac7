#include <charconv>
#include <fstream>
#include <sstream>

#include "lifelog/api.hpp"
#include "lifelog/text.hpp"

namespace lifelog {

namespace {

double to_number(std::string_view key, std::string_view v, std::size_t line) {
  double out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("config line " + std::to_string(line) + ": '" + std::string(key) +
                      "' expects a number, got '" + std::string(v) + "'");
  return out;
}

long long to_integer(std::string_view key, std::string_view v, std::size_t line) {
  long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("config line " + std::to_string(line) + ": '" + std::string(key) +
                      "' expects an integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v, std::size_t line) {
  std::string s = to_lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("config line " + std::to_string(line) + ": '" + std::string(key) +
                    "' expects true or false");
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view v) {
  std::filesystem::path p{std::string(v)};
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

ApiConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ApiConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view l = raw;
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    auto eq = l.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line) + ": expected key = value");
    std::string key = to_lower(trim(l.substr(0, eq)));
    std::string_view value = trim(l.substr(eq + 1));
    const std::string where = "config line " + std::to_string(line) + ": ";

    if (key == "listen") {
      auto colon = value.rfind(':');
      if (colon == std::string_view::npos) throw ConfigError(where + "listen expects host:port");
      cfg.host = std::string(value.substr(0, colon));
      cfg.port = static_cast<int>(to_integer(key, value.substr(colon + 1), line));
      if (cfg.port < 0 || cfg.port > 65535) throw ConfigError(where + "port out of range");
    } else if (key == "corpus") {
      cfg.corpus_path = resolve(base_dir, value);
    } else if (key == "static_dir") {
      cfg.static_dir = resolve(base_dir, value);
    } else if (key == "image_dir") {
      cfg.image_dir = resolve(base_dir, value);
    } else if (key == "score") {
      cfg.defaults.global_score = to_number(key, value, line);
      if (cfg.defaults.global_score < 0 || cfg.defaults.global_score > 1)
        throw ConfigError(where + "score must lie in [0, 1]");
    } else if (key == "limit") {
      long long v = to_integer(key, value, line);
      if (v < 1 || v > 0xffffffffLL) throw ConfigError(where + "limit must be positive");
      cfg.defaults.limit = static_cast<std::uint32_t>(v);
    } else if (key == "reduced") {
      cfg.defaults.reduced = to_bool(key, value, line);
    } else if (key == "sort") {
      auto s = parse_sort(to_lower(value));
      if (!s) throw ConfigError(where + "sort must be date, confidence or objects");
      cfg.defaults.sort = *s;
    } else if (key == "history_capacity") {
      long long v = to_integer(key, value, line);
      if (v < 1) throw ConfigError(where + "history_capacity must be positive");
      cfg.history_capacity = static_cast<std::size_t>(v);
    } else if (key == "submit_url") {
      if (!value.empty()) cfg.submit_url = std::string(value);
    } else if (key == "coordinate_match_km") {
      cfg.coordinate_match_km = to_number(key, value, line);
      if (!(cfg.coordinate_match_km > 0)) throw ConfigError(where + "coordinate_match_km must be positive");
    } else if (key == "cluster_threshold") {
      cfg.clustering.threshold = to_number(key, value, line);
      if (!(cfg.clustering.threshold > 0 && cfg.clustering.threshold <= 1))
        throw ConfigError(where + "cluster_threshold must lie in (0, 1]");
    } else if (key == "cluster_max_gap") {
      cfg.clustering.max_gap_seconds = to_integer(key, value, line);
    } else if (key.starts_with("timename.")) {
      std::string name = key.substr(9);
      auto dash = value.find('-');
      auto start = dash == std::string_view::npos ? std::nullopt : parse_clock(trim(value.substr(0, dash)));
      auto end = dash == std::string_view::npos ? std::nullopt : parse_clock(trim(value.substr(dash + 1)));
      if (!start || !end || *start >= 86400 || *start == *end)
        throw ConfigError(where + "timename windows are written HH:MM-HH:MM");
      if (name.empty()) throw ConfigError(where + "timename needs a name");
      cfg.times.set(name, TimeWindow{*start, *end == 86400 ? 0 : *end});
    } else {
      throw ConfigError(where + "unknown key '" + key + "'");
    }
  }
  return cfg;
}

ApiConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

}  // namespace lifelog
