#pragma once

#include <chrono>
#include <stdexcept>

namespace cdkit {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  Stopwatch() : start_(Clock::now()) {}
  void reset() { start_ = Clock::now(); }
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Clock::time_point start_;
};

/// Optional wall-clock budget; a default-constructed deadline never expires.
class Deadline {
 public:
  Deadline() = default;
  static Deadline after(double seconds) {
    Deadline d;
    d.active_ = seconds > 0.0;
    d.at_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
    return d;
  }
  bool expired() const { return active_ && Clock::now() >= at_; }

 private:
  bool active_ = false;
  Clock::time_point at_{};
};

/// Raised by refiners when their Deadline passes.
class OutOfTime : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cdkit
