#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace sonc {

// Default numerical tolerance used by the solvers and the stopping rules.
inline constexpr double kDefaultTol = 0x1p-23;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Cooperative wall-clock limit. Long-running loops poll expired() and bail
// out with TimeoutError; a default-constructed deadline never expires.
class Deadline {
 public:
  Deadline() = default;
  static Deadline after(double seconds) {
    Deadline d;
    d.end_ = std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(seconds));
    return d;
  }
  bool expired() const {
    return end_ && std::chrono::steady_clock::now() >= *end_;
  }

 private:
  std::optional<std::chrono::steady_clock::time_point> end_;
};

struct TimeoutError : std::runtime_error {
  TimeoutError() : std::runtime_error("wall-clock limit exceeded") {}
};

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace sonc
