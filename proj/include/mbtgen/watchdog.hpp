#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>

#include "mbtgen/scheduler.hpp"

namespace mbtgen {

/// One-shot expiry timer re-armed by reset(). Expiry fires at most once per
/// start/reset cycle; a reset or stop before the deadline suppresses it.
/// The scheduler must outlive the timer. Destruction waits for an expiry
/// callback that is already running on another thread.
class WatchdogTimer {
 public:
  using Callback = std::function<void()>;

  WatchdogTimer(Scheduler& scheduler, Millis delay, Callback on_expiry = {});
  ~WatchdogTimer();

  WatchdogTimer(const WatchdogTimer&) = delete;
  WatchdogTimer& operator=(const WatchdogTimer&) = delete;

  void set_callback(Callback on_expiry);

  /// Arms the timer. Throws Error(kInvalidDelay) for a zero delay.
  void start();
  /// false if never started; otherwise re-arms with the full delay.
  bool reset();
  void stop();

  bool armed() const;
  Millis delay() const { return delay_; }
  /// Deadline on the scheduler's clock while armed.
  std::optional<Millis> deadline() const;

 private:
  struct State {
    std::mutex mutex;
    std::condition_variable idle;
    Callback on_expiry;
    bool started = false;
    bool armed = false;
    std::uint64_t generation = 0;
    Scheduler::TaskId task = 0;
    Millis deadline{0};
    int running = 0;
  };

  void arm_locked();
  static void fire(const std::weak_ptr<State>& weak, std::uint64_t generation);

  Scheduler& scheduler_;
  const Millis delay_;
  std::shared_ptr<State> state_ = std::make_shared<State>();
};

}  // namespace mbtgen
