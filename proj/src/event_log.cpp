#include "wsnids/event_log.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "wsnids/error.hpp"

namespace wsnids {

namespace {

std::uint64_t to_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw Error("bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::optional<std::string_view> LogRecord::get(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

std::string LogRecord::str(std::string_view key) const {
  auto v = get(key);
  if (!v) {
    throw Error("log record " + kind + " lacks field '" + std::string(key) + "'");
  }
  return std::string(*v);
}

std::uint64_t LogRecord::u64(std::string_view key) const {
  return to_u64(str(key));
}

double LogRecord::f64(std::string_view key) const {
  return std::stod(str(key));
}

std::string LogRecord::to_line() const {
  std::string out = std::to_string(tick) + '\t' + std::to_string(seq) + '\t' +
                    kind + '\t' + wsnids::to_string(subject) + '\t';
  bool first = true;
  for (const auto& [k, v] : fields) {
    if (!first) out += ',';
    first = false;
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

LogRecord LogRecord::parse(std::string_view line) {
  auto cols = split(line, '\t');
  if (cols.size() != 5) {
    throw Error("log line needs 5 tab-separated columns: '" + std::string(line) + "'");
  }
  LogRecord r;
  r.tick = to_u64(cols[0]);
  r.seq = to_u64(cols[1]);
  r.kind = std::string(cols[2]);
  r.subject = NodeId{static_cast<std::uint32_t>(to_u64(cols[3]))};
  if (!cols[4].empty()) {
    for (auto kv : split(cols[4], ',')) {
      auto eq = kv.find('=');
      if (eq == std::string_view::npos) {
        throw Error("log field without '=': '" + std::string(kv) + "'");
      }
      r.fields.emplace_back(std::string(kv.substr(0, eq)),
                            std::string(kv.substr(eq + 1)));
    }
  }
  return r;
}

void EventLog::write(std::ostream& out) const {
  for (const auto& r : records_) out << r.to_line() << '\n';
}

std::string EventLog::to_string() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

EventLog EventLog::read(std::istream& in) {
  EventLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    log.append(LogRecord::parse(line));
  }
  return log;
}

std::uint64_t EventLog::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& r : records_) {
    mix(r.to_line());
    mix("\n");
  }
  return h;
}

}  // namespace wsnids
