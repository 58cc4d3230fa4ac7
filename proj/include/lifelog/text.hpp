#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lifelog {

// ASCII-only helpers; non-ASCII bytes pass through untouched.
inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

inline bool contains_ci(std::string_view haystack_lower, std::string_view needle_lower) {
  return haystack_lower.find(needle_lower) != std::string_view::npos;
}

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t v);

}  // namespace lifelog
