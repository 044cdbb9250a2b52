#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wsnids/topology.hpp"

namespace wsnids {

using Fields = std::vector<std::pair<std::string, std::string>>;

/// One log line: `tick<TAB>seq<TAB>kind<TAB>subject<TAB>key=value,...`.
/// Agent-emitted records share the seq of the event being dispatched.
struct LogRecord {
  Tick tick = 0;
  std::uint64_t seq = 0;
  std::string kind;
  NodeId subject;
  Fields fields;

  /// Value of `key`, if present.
  std::optional<std::string_view> get(std::string_view key) const;
  std::string str(std::string_view key) const;
  std::uint64_t u64(std::string_view key) const;
  double f64(std::string_view key) const;

  std::string to_line() const;
  static LogRecord parse(std::string_view line);
  bool operator==(const LogRecord&) const = default;
};

class EventLog {
 public:
  void append(LogRecord r) { records_.push_back(std::move(r)); }
  const std::vector<LogRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  void write(std::ostream& out) const;
  std::string to_string() const;
  static EventLog read(std::istream& in);

  /// FNV-1a over the serialized log.
  std::uint64_t hash() const;

 private:
  std::vector<LogRecord> records_;
};

/// Fixed-precision decimal used for every floating value in the log.
std::string format_double(double x);

}  // namespace wsnids
