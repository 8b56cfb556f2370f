#include "mbtgen/event_log.hpp"

#include <sstream>

#include "json.hpp"
#include "mbtgen/error.hpp"

namespace mbtgen {
namespace {

using Json = nlohmann::ordered_json;

std::optional<EventType> parse_type(std::string_view s) {
  if (s == "start") return EventType::kStart;
  if (s == "vertex") return EventType::kVertex;
  if (s == "edge") return EventType::kEdge;
  if (s == "keepalive") return EventType::kKeepAlive;
  if (s == "stop") return EventType::kStop;
  return std::nullopt;
}

bool needs_name(EventType type) {
  return type == EventType::kStart || type == EventType::kVertex || type == EventType::kEdge;
}

EventLogRecord parse_line(std::string_view line, std::size_t line_no) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw LogFormatError(line_no, std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw LogFormatError(line_no, "record must be a JSON object");

  EventLogRecord rec;
  auto t = j.find("t");
  if (t == j.end() || !t->is_number_integer() || t->get<long long>() < 0) {
    throw LogFormatError(line_no, "field 't' must be a non-negative integer");
  }
  rec.t = Millis{t->get<long long>()};

  auto type = j.find("type");
  if (type == j.end() || !type->is_string()) throw LogFormatError(line_no, "field 'type' must be a string");
  auto parsed = parse_type(type->get<std::string>());
  if (!parsed) throw LogFormatError(line_no, "unknown record type '" + type->get<std::string>() + "'");
  rec.type = *parsed;

  auto name = j.find("name");
  if (needs_name(rec.type)) {
    if (name == j.end() || !name->is_string()) {
      throw LogFormatError(line_no, "'" + std::string(to_string(rec.type)) + "' record needs a string 'name'");
    }
    rec.name = name->get<std::string>();
  } else if (name != j.end()) {
    throw LogFormatError(line_no, "'" + std::string(to_string(rec.type)) + "' record takes no 'name'");
  }
  return rec;
}

}  // namespace

std::string_view to_string(EventType type) noexcept {
  switch (type) {
    case EventType::kStart:
      return "start";
    case EventType::kVertex:
      return "vertex";
    case EventType::kEdge:
      return "edge";
    case EventType::kKeepAlive:
      return "keepalive";
    case EventType::kStop:
      return "stop";
  }
  return "unknown";
}

std::vector<EventLogRecord> parse_event_log(std::istream& in) {
  std::vector<EventLogRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    EventLogRecord rec = parse_line(line, line_no);
    if (records.empty()) {
      if (rec.type != EventType::kStart) throw LogFormatError(line_no, "first record must be 'start'");
      try {
        Session probe(*rec.name);
      } catch (const Error& e) {
        throw LogFormatError(line_no, e.what());
      }
    } else {
      if (rec.type == EventType::kStart) throw LogFormatError(line_no, "only one 'start' record is allowed");
      if (rec.t < records.back().t) throw LogFormatError(line_no, "timestamps must be non-decreasing");
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw LogFormatError(line_no == 0 ? 1 : line_no, "log has no 'start' record");
  return records;
}

std::vector<EventLogRecord> parse_event_log(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_event_log(in);
}

std::string render_event_log(const std::vector<EventLogRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    Json j = Json::object();
    j["t"] = r.t.count();
    j["type"] = std::string(to_string(r.type));
    if (r.name) j["name"] = *r.name;
    out += j.dump();
    out += '\n';
  }
  return out;
}

ReplayResult replay_event_log(const std::vector<EventLogRecord>& records, Millis keep_alive_timeout) {
  if (keep_alive_timeout.count() <= 0) {
    throw Error(ErrorCode::kInvalidDelay, "timer delay must be greater than 0 seconds");
  }
  if (records.empty() || records.front().type != EventType::kStart || !records.front().name) {
    throw Error(ErrorCode::kInvalidTitle, "event log does not begin with a start record");
  }

  ReplayResult result;
  Session session(*records.front().name);
  Millis deadline = records.front().t + keep_alive_timeout;
  bool done = false;

  auto finish = [&](ReplayEnd end, Millis at) {
    result.model = session.finalize();
    result.end = end;
    result.finalized_at = at;
    done = true;
  };

  for (std::size_t i = 1; i < records.size(); ++i) {
    const EventLogRecord& rec = records[i];
    if (done) {
      ++result.ignored;
      continue;
    }
    if (rec.t >= deadline) {
      finish(ReplayEnd::kWatchdog, deadline);
      ++result.ignored;
      continue;
    }
    switch (rec.type) {
      case EventType::kKeepAlive:
        deadline = rec.t + keep_alive_timeout;
        break;
      case EventType::kStop:
        finish(ReplayEnd::kStop, rec.t);
        break;
      case EventType::kVertex:
      case EventType::kEdge:
        try {
          if (rec.type == EventType::kVertex) {
            session.record_vertex(*rec.name);
          } else {
            session.record_edge(*rec.name);
          }
          ++result.applied;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kUnusableName) throw;
          ++result.ignored;
          result.warnings.push_back("ignored record " + std::to_string(i + 1) + ": " + e.what());
        }
        break;
      case EventType::kStart:
        break;  // rejected by the parser
    }
  }
  if (!done) finish(ReplayEnd::kEndOfLog, records.back().t);
  result.warnings.insert(result.warnings.end(), session.warnings().begin(), session.warnings().end());
  return result;
}

}  // namespace mbtgen
