#pragma once

// Small text and file helpers shared by the readers and writers.

#include <charconv>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lcem::text {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

/// Splits on '\n', dropping a trailing '\r' from each line. A final newline
/// does not produce an empty trailing line.
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split_on(std::string_view line, char sep);
std::vector<std::string> split_whitespace(std::string_view line);

template <typename Number>
bool parse_number(std::string_view text, Number& value) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

/// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

}  // namespace lcem::text
