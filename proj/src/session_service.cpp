#include "mbtgen/session_service.hpp"

#include <iostream>
#include <utility>

#include "mbtgen/error.hpp"

namespace mbtgen {
namespace {

constexpr std::string_view kStarted = "STARTED";
constexpr std::string_view kOk = "OK";
constexpr std::string_view kAlive = "ALIVE";
constexpr std::string_view kStopped = "STOPPED";
constexpr std::string_view kNoSession = "NO_SESSION";

Response respond(int status, std::string_view body) { return Response{status, std::string(body)}; }

void log_warnings(const Session& session) {
  for (const auto& w : session.warnings()) {
    std::clog << "[mbtgen] session '" << session.model().name() << "': " << w << '\n';
  }
}

}  // namespace

std::string_view to_string(FinalizeReason reason) noexcept {
  switch (reason) {
    case FinalizeReason::kStopRequest:
      return "stoprec";
    case FinalizeReason::kPreempted:
      return "preempted";
    case FinalizeReason::kWatchdog:
      return "watchdog";
    case FinalizeReason::kShutdown:
      return "shutdown";
  }
  return "unknown";
}

ExportRecord export_model(Model model, const LayoutConfig& layout, const std::filesystem::path& out_dir) {
  ExportRecord record;
  record.finalized_hash = structural_hash(model);
  record.model = generate_plane_data(std::move(model), layout);
  try {
    record.path = save_mbt_json(parse_model(record.model), record.model.name(), out_dir);
  } catch (const Error& e) {
    record.error = e.what();
  }
  return record;
}

SessionService::SessionService(ServiceConfig config, Scheduler& scheduler)
    : config_(std::move(config)),
      watchdog_(scheduler, config_.keep_alive_timeout) {
  if (config_.keep_alive_timeout.count() <= 0) {
    throw Error(ErrorCode::kInvalidDelay, "timer delay must be greater than 0 seconds");
  }
  config_.layout.validate();
  watchdog_.set_callback([this] { on_watchdog_expiry(); });
}

SessionService::~SessionService() { watchdog_.stop(); }

std::optional<SessionService::Pending> SessionService::take_session_locked(FinalizeReason reason) {
  if (!session_ || !session_->recording()) return std::nullopt;
  watchdog_.stop();
  Model model = session_->finalize();
  log_warnings(*session_);
  session_.reset();
  return Pending{serial_, reason, std::move(model)};
}

ExportRecord SessionService::run_export(Pending pending) {
  ExportRecord record = export_model(std::move(pending.model), config_.layout, config_.out_dir);
  record.session_serial = pending.serial;
  record.reason = pending.reason;
  if (record.path) {
    std::clog << "[mbtgen] saved '" << record.model.name() << "' (" << to_string(record.reason) << ") to "
              << record.path->string() << '\n';
  } else {
    std::clog << "[mbtgen] export of '" << record.model.name() << "' failed: " << record.error << '\n';
  }

  ExportObserver observer;
  {
    std::lock_guard lock(export_mutex_);
    last_export_ = record;
    ++exported_;
    observer = observer_;
  }
  if (observer) observer(record);
  return record;
}

Response SessionService::handle_startrec(std::optional<std::string_view> title) {
  if (!title) return respond(400, "MISSING_TITLE");
  std::optional<Pending> previous;
  {
    std::lock_guard lock(mutex_);
    std::unique_ptr<Session> next;
    try {
      next = std::make_unique<Session>(*title);
    } catch (const Error&) {
      return respond(400, "INVALID_TITLE");
    }
    previous = take_session_locked(FinalizeReason::kPreempted);
    session_ = std::move(next);
    ++serial_;
    try {
      watchdog_.start();
    } catch (const Error& e) {
      session_.reset();
      return respond(500, e.what());
    }
  }
  if (previous) run_export(std::move(*previous));
  return respond(200, kStarted);
}

Response SessionService::handle_event(EventKind kind, std::optional<std::string_view> name) {
  if (!name) return respond(400, "MISSING_NAME");
  std::lock_guard lock(mutex_);
  if (!session_ || !session_->recording()) return respond(409, kNoSession);
  try {
    if (kind == EventKind::kVertex) {
      session_->record_vertex(*name);
    } else {
      session_->record_edge(*name);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnusableName) return respond(400, "INVALID_NAME");
    if (e.code() == ErrorCode::kSessionNotActive) return respond(409, kNoSession);
    return respond(500, e.what());
  }
  return respond(200, kOk);
}

Response SessionService::handle_vertex(std::optional<std::string_view> name) {
  return handle_event(EventKind::kVertex, name);
}

Response SessionService::handle_edge(std::optional<std::string_view> name) {
  return handle_event(EventKind::kEdge, name);
}

Response SessionService::handle_keepalive() {
  std::lock_guard lock(mutex_);
  if (!session_ || !session_->recording()) return respond(200, kNoSession);
  watchdog_.reset();
  return respond(200, kAlive);
}

Response SessionService::handle_stoprec() {
  std::optional<Pending> pending;
  {
    std::lock_guard lock(mutex_);
    pending = take_session_locked(FinalizeReason::kStopRequest);
  }
  if (!pending) return respond(409, kNoSession);
  const ExportRecord record = run_export(std::move(*pending));
  if (!record.path) return respond(500, "STORAGE_FAILURE");
  return respond(200, kStopped);
}

void SessionService::on_watchdog_expiry() {
  std::optional<Pending> pending;
  {
    std::lock_guard lock(mutex_);
    // A keepalive that re-armed the timer after it fired wins the race.
    if (watchdog_.armed()) return;
    pending = take_session_locked(FinalizeReason::kWatchdog);
  }
  if (pending) run_export(std::move(*pending));
}

void SessionService::shutdown() {
  std::optional<Pending> pending;
  {
    std::lock_guard lock(mutex_);
    pending = take_session_locked(FinalizeReason::kShutdown);
  }
  if (pending) run_export(std::move(*pending));
}

void SessionService::set_export_observer(ExportObserver observer) {
  std::lock_guard lock(export_mutex_);
  observer_ = std::move(observer);
}

bool SessionService::recording() const {
  std::lock_guard lock(mutex_);
  return session_ && session_->recording();
}

std::optional<Model> SessionService::current_model() const {
  std::lock_guard lock(mutex_);
  if (!session_) return std::nullopt;
  return session_->model();
}

std::uint64_t SessionService::sessions_started() const {
  std::lock_guard lock(mutex_);
  return serial_;
}

std::uint64_t SessionService::sessions_exported() const {
  std::lock_guard lock(export_mutex_);
  return exported_;
}

std::optional<ExportRecord> SessionService::last_export() const {
  std::lock_guard lock(export_mutex_);
  return last_export_;
}

}  // namespace mbtgen
