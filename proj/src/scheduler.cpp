#include "mbtgen/scheduler.hpp"

#include <utility>

namespace mbtgen {

// ---------------------------------------------------------------------------
// ThreadScheduler

ThreadScheduler::ThreadScheduler() : worker_([this] { run(); }) {}

ThreadScheduler::~ThreadScheduler() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  worker_.join();
}

Scheduler::TaskId ThreadScheduler::schedule_after(Millis delay, Task task) {
  TaskId id;
  {
    std::lock_guard lock(mutex_);
    id = next_id_++;
    const auto due = Clock::now() + delay;
    queue_.emplace(Key{due, id}, std::move(task));
    due_by_id_.emplace(id, due);
  }
  wake_.notify_all();
  return id;
}

bool ThreadScheduler::cancel(TaskId id) {
  std::lock_guard lock(mutex_);
  auto it = due_by_id_.find(id);
  if (it == due_by_id_.end()) return false;
  queue_.erase(Key{it->second, id});
  due_by_id_.erase(it);
  return true;
}

Millis ThreadScheduler::now() const {
  return std::chrono::duration_cast<Millis>(Clock::now() - epoch_);
}

void ThreadScheduler::run() {
  std::unique_lock lock(mutex_);
  while (!stopping_) {
    if (queue_.empty()) {
      wake_.wait(lock);
      continue;
    }
    auto first = queue_.begin();
    if (first->first.first > Clock::now()) {
      wake_.wait_until(lock, first->first.first);
      continue;
    }
    Task task = std::move(first->second);
    due_by_id_.erase(first->first.second);
    queue_.erase(first);
    lock.unlock();
    task();
    lock.lock();
  }
}

// ---------------------------------------------------------------------------
// ManualScheduler

Scheduler::TaskId ManualScheduler::schedule_after(Millis delay, Task task) {
  std::lock_guard lock(mutex_);
  const TaskId id = next_id_++;
  const Millis due = now_ + delay;
  queue_.emplace(Key{due, id}, std::move(task));
  due_by_id_.emplace(id, due);
  return id;
}

bool ManualScheduler::cancel(TaskId id) {
  std::lock_guard lock(mutex_);
  auto it = due_by_id_.find(id);
  if (it == due_by_id_.end()) return false;
  queue_.erase(Key{it->second, id});
  due_by_id_.erase(it);
  return true;
}

Millis ManualScheduler::now() const {
  std::lock_guard lock(mutex_);
  return now_;
}

void ManualScheduler::advance(Millis delta) { advance_to(now() + delta); }

void ManualScheduler::advance_to(Millis when) {
  std::lock_guard serial(advance_mutex_);
  for (;;) {
    Task task;
    {
      std::lock_guard lock(mutex_);
      if (queue_.empty() || queue_.begin()->first.first > when) {
        if (when > now_) now_ = when;
        return;
      }
      auto first = queue_.begin();
      if (first->first.first > now_) now_ = first->first.first;
      task = std::move(first->second);
      due_by_id_.erase(first->first.second);
      queue_.erase(first);
    }
    task();
  }
}

std::size_t ManualScheduler::pending() const {
  std::lock_guard lock(mutex_);
  return queue_.size();
}

}  // namespace mbtgen
