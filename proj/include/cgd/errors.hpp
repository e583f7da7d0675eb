#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cgd {

// Raised when a raw game's option structure contains a cycle.
class NotShortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a sequence term or search would exceed a configured limit.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cgd
