#include "mbtgen/watchdog.hpp"

#include <thread>
#include <utility>

#include "mbtgen/error.hpp"

namespace mbtgen {

WatchdogTimer::WatchdogTimer(Scheduler& scheduler, Millis delay, Callback on_expiry)
    : scheduler_(scheduler), delay_(delay) {
  state_->on_expiry = std::move(on_expiry);
}

WatchdogTimer::~WatchdogTimer() {
  stop();
  std::unique_lock lock(state_->mutex);
  state_->idle.wait(lock, [this] { return state_->running == 0; });
}

void WatchdogTimer::set_callback(Callback on_expiry) {
  std::lock_guard lock(state_->mutex);
  state_->on_expiry = std::move(on_expiry);
}

void WatchdogTimer::arm_locked() {
  State& s = *state_;
  if (s.armed) scheduler_.cancel(s.task);
  const std::uint64_t generation = ++s.generation;
  s.armed = true;
  s.started = true;
  s.deadline = scheduler_.now() + delay_;
  std::weak_ptr<State> weak = state_;
  s.task = scheduler_.schedule_after(delay_, [weak, generation] { fire(weak, generation); });
}

void WatchdogTimer::start() {
  if (delay_.count() <= 0) {
    throw Error(ErrorCode::kInvalidDelay, "timer delay must be greater than 0 seconds");
  }
  std::lock_guard lock(state_->mutex);
  arm_locked();
}

bool WatchdogTimer::reset() {
  std::lock_guard lock(state_->mutex);
  if (!state_->started) return false;
  arm_locked();
  return true;
}

void WatchdogTimer::stop() {
  std::lock_guard lock(state_->mutex);
  if (state_->armed) scheduler_.cancel(state_->task);
  state_->armed = false;
  ++state_->generation;
}

bool WatchdogTimer::armed() const {
  std::lock_guard lock(state_->mutex);
  return state_->armed;
}

std::optional<Millis> WatchdogTimer::deadline() const {
  std::lock_guard lock(state_->mutex);
  if (!state_->armed) return std::nullopt;
  return state_->deadline;
}

void WatchdogTimer::fire(const std::weak_ptr<State>& weak, std::uint64_t generation) {
  std::shared_ptr<State> s = weak.lock();
  if (!s) return;
  Callback callback;
  {
    std::lock_guard lock(s->mutex);
    if (!s->armed || generation != s->generation) return;
    s->armed = false;
    callback = s->on_expiry;
    ++s->running;
  }
  if (callback) callback();
  {
    std::lock_guard lock(s->mutex);
    --s->running;
  }
  s->idle.notify_all();
}

}  // namespace mbtgen
