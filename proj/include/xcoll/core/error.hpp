#pragma once

#include <stdexcept>
#include <string>

namespace xcoll {

// Malformed arguments or an unsatisfied operation precondition.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Case data that cannot be parsed or resolved.
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& msg, int line = -1, std::string field = {})
      : std::runtime_error(format(msg, line, field)), line_(line), field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(const std::string& msg, int line, const std::string& field) {
    std::string out;
    if (line >= 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + msg;
  }
  int line_;
  std::string field_;
};

// A computed object broke an invariant that should hold by construction.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace xcoll
