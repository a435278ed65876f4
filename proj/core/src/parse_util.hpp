#pragma once

// Small helpers for the descriptor strings ("sphere:3", "ellipse:2,1", ...).

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "cutloci/error.hpp"

namespace cutloci::detail {

inline std::pair<std::string_view, std::string_view> split_once(std::string_view text, char sep) {
  const auto pos = text.find(sep);
  if (pos == std::string_view::npos) return {text, {}};
  return {text.substr(0, pos), text.substr(pos + 1)};
}

inline std::vector<std::string_view> split_all(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto pos = text.find(sep);
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) return parts;
    text.remove_prefix(pos + 1);
  }
}

inline int parse_int(std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

inline std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (auto part : split_all(text, ',')) out.push_back(parse_int(part));
  return out;
}

inline std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split_all(text, ',')) out.push_back(parse_double(part));
  return out;
}

}  // namespace cutloci::detail
