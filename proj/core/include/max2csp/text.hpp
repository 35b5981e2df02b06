#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace max2csp {

/// Malformed text input; the message carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal string that parses back to exactly `x`.
std::string format_real(double x);

/// Whitespace-separated tokens of one line.
std::vector<std::string_view> split_tokens(std::string_view line);

int parse_int(std::string_view tok, std::size_t line);
std::uint64_t parse_uint64(std::string_view tok, std::size_t line);
double parse_real(std::string_view tok, std::size_t line);

/// Logical lines of a text document: comment ('#') and blank lines removed,
/// each paired with its 1-based line number.
struct NumberedLine {
  std::size_t number;
  std::string_view text;
};
std::vector<NumberedLine> content_lines(std::string_view text);

/// Writes `contents` to `path` via a temporary sibling and rename.
void write_file_atomic(const std::string& path, std::string_view contents);
std::string read_file(const std::string& path);

}  // namespace max2csp
