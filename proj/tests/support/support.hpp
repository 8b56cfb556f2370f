#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "mbtgen/event_log.hpp"
#include "mbtgen/model.hpp"
#include "mbtgen/scheduler.hpp"

namespace mbtgen::testing {

/// The five-page, ten-transition online bookshop model used as the layout
/// regression case: vertices n2..n6, a self-loop on the entry page and four
/// "SearchBook" edges with different endpoints.
Model shopping_cart_model();

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "mbtgen");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

std::filesystem::path fixture_path(const std::string& relative);

struct StreamEvent {
  bool is_vertex;
  std::string label;
};

/// Random interleaving of vertex and edge events drawn from small label
/// pools, so repeats (and therefore dedup) are common.
std::vector<StreamEvent> random_stream(std::mt19937& rng, std::size_t max_events);

/// Random event log: start, then 0..max_events vertex/edge records mixed
/// with keepalives, gaps that sometimes outlast the timeout, and an optional
/// trailing stop.
std::vector<EventLogRecord> random_event_log(std::mt19937& rng, std::size_t max_events, Millis timeout);

/// Independent restatement of the stitching rules over plain tuples. Used as
/// an oracle for Session; shares no code with it.
struct ReferenceGraph {
  std::vector<std::string> vertex_names;                                // creation order
  std::vector<std::tuple<std::string, std::string, std::string>> edges;  // (name, src name, tgt name)
  std::optional<std::string> start_name;
};

ReferenceGraph reference_replay(const std::vector<StreamEvent>& events);

/// Projects a model onto names so it can be compared with ReferenceGraph.
ReferenceGraph project(const Model& model);

/// Drives a running HTTP server with a log, advancing the fake clock to each
/// record's timestamp first. After the last record, time runs out the
/// keep-alive timeout so an unstopped session finalizes via the watchdog.
void replay_over_http(const std::vector<EventLogRecord>& records, int port, ManualScheduler& clock,
                      Millis timeout);

}  // namespace mbtgen::testing
