#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ribbonlab/error.hpp"

namespace ribbonlab::detail {

struct TextLine {
  int number = 0;  // 1-based
  std::vector<std::string_view> tokens;
};

// Tokenizes each line on whitespace after stripping '#' comments. Lines that
// end up empty are dropped.
inline std::vector<TextLine> tokenize_lines(std::string_view text) {
  std::vector<TextLine> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    TextLine line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
      if (j > i) line.tokens.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return lines;
}

inline std::optional<std::int64_t> to_integer(std::string_view token) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
  return value;
}

inline std::int64_t expect_integer(const TextLine& line, std::size_t index) {
  if (index >= line.tokens.size()) throw ParseError(line.number, "missing integer");
  auto value = to_integer(line.tokens[index]);
  if (!value) {
    throw ParseError(line.number,
                     "non-integer token '" + std::string(line.tokens[index]) + "'");
  }
  return *value;
}

}  // namespace ribbonlab::detail
