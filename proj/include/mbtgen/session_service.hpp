#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "mbtgen/json_export.hpp"
#include "mbtgen/layout.hpp"
#include "mbtgen/model.hpp"
#include "mbtgen/scheduler.hpp"
#include "mbtgen/watchdog.hpp"

namespace mbtgen {

struct ServiceConfig {
  int port = 8496;
  Millis keep_alive_timeout{10'000};
  std::filesystem::path out_dir = ".";
  LayoutConfig layout{};
};

struct Response {
  int status = 200;
  std::string body;

  friend bool operator==(const Response&, const Response&) = default;
};

enum class FinalizeReason { kStopRequest, kPreempted, kWatchdog, kShutdown };

std::string_view to_string(FinalizeReason reason) noexcept;

/// Outcome of one finalize -> layout -> export -> save pipeline run.
struct ExportRecord {
  std::uint64_t session_serial = 0;
  FinalizeReason reason = FinalizeReason::kStopRequest;
  Model model;                                // laid-out model as handed to the exporter
  std::uint64_t finalized_hash = 0;           // structural_hash at the moment of finalization
  std::optional<std::filesystem::path> path;  // empty when storage failed
  std::string error;
};

/// Finalize a model the way the service does: layout, serialize, save.
ExportRecord export_model(Model model, const LayoutConfig& layout, const std::filesystem::path& out_dir);

/// Owns the single active recording session and its keep-alive watchdog.
///
/// Transport-neutral: every handler returns a status code and body that the
/// HTTP front end forwards verbatim. All session mutations and watchdog
/// transitions are serialized by one mutex; the export pipeline runs after
/// the mutex is released, on the thread that won finalization.
class SessionService {
 public:
  using ExportObserver = std::function<void(const ExportRecord&)>;

  /// Throws Error(kInvalidDelay) for a zero keep-alive timeout and
  /// Error(kInvalidConfig) for a bad layout configuration.
  SessionService(ServiceConfig config, Scheduler& scheduler);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  Response handle_startrec(std::optional<std::string_view> title);
  Response handle_vertex(std::optional<std::string_view> name);
  Response handle_edge(std::optional<std::string_view> name);
  Response handle_keepalive();
  Response handle_stoprec();

  /// Finalizes and exports any active session. Used on process shutdown.
  void shutdown();

  /// Called after every export, from the thread that ran the pipeline.
  void set_export_observer(ExportObserver observer);

  const ServiceConfig& config() const { return config_; }
  bool recording() const;
  /// Snapshot of the in-progress model, if a session is recording.
  std::optional<Model> current_model() const;
  std::uint64_t sessions_started() const;
  std::uint64_t sessions_exported() const;
  std::optional<ExportRecord> last_export() const;

 private:
  struct Pending {
    std::uint64_t serial;
    FinalizeReason reason;
    Model model;
  };

  enum class EventKind { kVertex, kEdge };

  Response handle_event(EventKind kind, std::optional<std::string_view> name);
  void on_watchdog_expiry();
  // Requires mutex_. Moves the active session out, finalized.
  std::optional<Pending> take_session_locked(FinalizeReason reason);
  ExportRecord run_export(Pending pending);

  ServiceConfig config_;

  mutable std::mutex mutex_;
  std::unique_ptr<Session> session_;
  std::uint64_t serial_ = 0;

  mutable std::mutex export_mutex_;
  ExportObserver observer_;
  std::optional<ExportRecord> last_export_;
  std::uint64_t exported_ = 0;

  // Declared last: destroyed first, after any in-flight expiry has returned.
  WatchdogTimer watchdog_;
};

}  // namespace mbtgen
