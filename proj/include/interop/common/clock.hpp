#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace interop {

/// Nanoseconds on a monotonic timeline. Virtual and real clocks share it.
using Nanos = std::int64_t;

inline constexpr Nanos kNanosPerMilli = 1'000'000;
inline constexpr Nanos kNanosPerSecond = 1'000'000'000;

constexpr Nanos from_seconds(double seconds) {
  return static_cast<Nanos>(seconds * static_cast<double>(kNanosPerSecond) + 0.5);
}

constexpr double to_seconds(Nanos ns) {
  return static_cast<double>(ns) / static_cast<double>(kNanosPerSecond);
}

constexpr double to_millis(Nanos ns) {
  return static_cast<double>(ns) / static_cast<double>(kNanosPerMilli);
}

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Nanos now() const = 0;
};

class SteadyClock final : public Clock {
 public:
  Nanos now() const override {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  }
};

/// Clock advanced explicitly by a simulation driver.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Nanos start = 0) : now_(start) {}

  Nanos now() const override { return now_.load(std::memory_order_acquire); }

  void set(Nanos t) { now_.store(t, std::memory_order_release); }
  void advance(Nanos delta) { now_.fetch_add(delta, std::memory_order_acq_rel); }

 private:
  std::atomic<Nanos> now_;
};

}  // namespace interop
