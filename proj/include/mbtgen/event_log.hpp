#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mbtgen/layout.hpp"
#include "mbtgen/model.hpp"
#include "mbtgen/scheduler.hpp"

namespace mbtgen {

enum class EventType { kStart, kVertex, kEdge, kKeepAlive, kStop };

std::string_view to_string(EventType type) noexcept;

/// One line of a recorded clickstream, e.g.
///   {"t": 1200, "type": "edge", "name": "Find Owners"}
struct EventLogRecord {
  Millis t{0};  // since session start
  EventType type = EventType::kStart;
  std::optional<std::string> name;

  friend bool operator==(const EventLogRecord&, const EventLogRecord&) = default;
};

class LogFormatError : public std::runtime_error {
 public:
  LogFormatError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses newline-delimited JSON records. Blank lines are skipped.
/// Throws LogFormatError naming the first offending line.
std::vector<EventLogRecord> parse_event_log(std::istream& in);
std::vector<EventLogRecord> parse_event_log(std::string_view text);

std::string render_event_log(const std::vector<EventLogRecord>& records);

enum class ReplayEnd { kStop, kWatchdog, kEndOfLog };

struct ReplayResult {
  Model model;  // finalized, not yet laid out
  ReplayEnd end = ReplayEnd::kEndOfLog;
  Millis finalized_at{0};
  std::size_t applied = 0;  // vertex/edge records that reached the model
  std::size_t ignored = 0;  // records after finalization or with unusable names
  std::vector<std::string> warnings;
};

/// Replays a parsed log through a Session with a simulated watchdog: the
/// deadline is the last start/keepalive time plus `keep_alive_timeout`, and a
/// record stamped at or past it arrives after automatic finalization.
ReplayResult replay_event_log(const std::vector<EventLogRecord>& records, Millis keep_alive_timeout);

}  // namespace mbtgen
