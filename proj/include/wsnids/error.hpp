#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wsnids {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

class PastEvent : public Error {
 public:
  using Error::Error;
};

class IllegalRoute : public Error {
 public:
  using Error::Error;
};

class ProfileMissing : public Error {
 public:
  using Error::Error;
};

class InvalidObservation : public Error {
 public:
  using Error::Error;
};

class NoSuccessor : public Error {
 public:
  using Error::Error;
};

/// Scenario text could not be parsed. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Scenario parsed but is inconsistent; lists every violation found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept {
    return violations_;
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace wsnids
