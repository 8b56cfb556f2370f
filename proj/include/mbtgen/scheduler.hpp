#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

namespace mbtgen {

using Millis = std::chrono::milliseconds;

/// Source of delayed callbacks. The watchdog depends only on this, so tests
/// can drive time by hand with ManualScheduler.
class Scheduler {
 public:
  using TaskId = std::uint64_t;
  using Task = std::function<void()>;

  virtual ~Scheduler() = default;

  virtual TaskId schedule_after(Millis delay, Task task) = 0;
  /// Returns true if the task was still pending and will not run.
  virtual bool cancel(TaskId id) = 0;
  virtual Millis now() const = 0;
};

/// Runs tasks on one background thread against the steady clock.
class ThreadScheduler final : public Scheduler {
 public:
  ThreadScheduler();
  ~ThreadScheduler() override;

  ThreadScheduler(const ThreadScheduler&) = delete;
  ThreadScheduler& operator=(const ThreadScheduler&) = delete;

  TaskId schedule_after(Millis delay, Task task) override;
  bool cancel(TaskId id) override;
  Millis now() const override;

 private:
  using Clock = std::chrono::steady_clock;
  using Key = std::pair<Clock::time_point, TaskId>;

  void run();

  const Clock::time_point epoch_ = Clock::now();
  mutable std::mutex mutex_;
  std::condition_variable wake_;
  std::map<Key, Task> queue_;
  std::map<TaskId, Clock::time_point> due_by_id_;
  TaskId next_id_ = 1;
  bool stopping_ = false;
  std::thread worker_;
};

/// Fake clock. Time stands still until advance() is called; due tasks then
/// run on the calling thread in deadline order, with now() equal to their
/// deadline while they run.
class ManualScheduler final : public Scheduler {
 public:
  TaskId schedule_after(Millis delay, Task task) override;
  bool cancel(TaskId id) override;
  Millis now() const override;

  void advance(Millis delta);
  void advance_to(Millis when);
  std::size_t pending() const;

 private:
  using Key = std::pair<Millis, TaskId>;

  mutable std::mutex mutex_;
  std::mutex advance_mutex_;
  Millis now_{0};
  std::map<Key, Task> queue_;
  std::map<TaskId, Millis> due_by_id_;
  TaskId next_id_ = 1;
};

}  // namespace mbtgen
