#pragma once

#include <stdexcept>
#include <string>

namespace lobcal {

// Broad failure classes used to map library errors onto process exit codes:
// input-shaped problems (parse/io/config/domain) versus numerical failures
// (solver did not reach its required tolerance).
enum class ErrorKind { parse, io, config, domain, solver };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, long line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + message
                                     : message),
        kind_(kind),
        line_(line) {}

  ErrorKind kind() const { return kind_; }

  // 1-based input line for parse errors, -1 otherwise.
  long line() const { return line_; }

 private:
  ErrorKind kind_;
  long line_;
};

}  // namespace lobcal
