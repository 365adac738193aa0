#pragma once

#include <stdexcept>
#include <string>

namespace metldpc {

// Bad inputs / contract violations; the CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Environment failures (I/O, corrupt files); CLI exit code 1.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
    bad_header,
    ragged_matrix,
    negative_entry,
    missing_label,
    duplicate_label,
    label_range,
    puncture_mismatch,
    trailing_content,
};

class ProtographParseError : public ValidationError {
  public:
    ProtographParseError(ParseErrorKind kind, int line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what),
          kind_(kind),
          line_(line) {}

    ParseErrorKind kind() const { return kind_; }
    int line() const { return line_; }

  private:
    ParseErrorKind kind_;
    int line_;
};

}  // namespace metldpc
