#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <limits>
#include <mutex>
#include <optional>

namespace sharedctl {

// Multi-producer multi-consumer queue with close semantics. With a finite
// capacity, push drops the oldest element instead of blocking, so producers
// never wait on consumers.
template <typename T>
class Channel {
 public:
  explicit Channel(std::size_t capacity = std::numeric_limits<std::size_t>::max())
      : capacity_(capacity) {}

  // Returns false if the channel is closed.
  bool push(T value) {
    {
      std::lock_guard lock(mu_);
      if (closed_) return false;
      if (queue_.size() >= capacity_) {
        queue_.pop_front();
        ++dropped_;
      }
      queue_.push_back(std::move(value));
    }
    cv_.notify_one();
    return true;
  }

  // Blocks until a value is available; nullopt once closed and drained.
  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !queue_.empty() || closed_; });
    return take(lock);
  }

  template <typename Rep, typename Period>
  std::optional<T> pop_for(std::chrono::duration<Rep, Period> timeout) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
    return take(lock);
  }

  std::optional<T> try_pop() {
    std::unique_lock lock(mu_);
    return take(lock);
  }

  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  bool closed() const {
    std::lock_guard lock(mu_);
    return closed_;
  }
  // Closed and nothing left to read.
  bool exhausted() const {
    std::lock_guard lock(mu_);
    return closed_ && queue_.empty();
  }
  std::size_t size() const {
    std::lock_guard lock(mu_);
    return queue_.size();
  }
  std::size_t dropped() const {
    std::lock_guard lock(mu_);
    return dropped_;
  }

 private:
  std::optional<T> take(std::unique_lock<std::mutex>&) {
    if (queue_.empty()) return std::nullopt;
    T v = std::move(queue_.front());
    queue_.pop_front();
    return v;
  }

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> queue_;
  std::size_t capacity_;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

}  // namespace sharedctl
