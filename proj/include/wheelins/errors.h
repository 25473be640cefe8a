#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wheelins {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GimbalLock : public Error {
 public:
  GimbalLock() : Error("gimbal lock: heading and roll are not separable") {}
};

class NonMonotonicTime : public Error {
 public:
  NonMonotonicTime(double prev, double curr)
      : Error("non-monotonic IMU time: " + std::to_string(prev) +
              " -> " + std::to_string(curr)) {}
};

class WindowTooShort : public Error {
 public:
  explicit WindowTooShort(double seconds)
      : Error("static alignment window too short: " +
              std::to_string(seconds) + " s") {}
};

class MotionDetected : public Error {
 public:
  MotionDetected(double stddev, double threshold)
      : Error("motion detected in static window: specific-force std " +
              std::to_string(stddev) + " > " + std::to_string(threshold)) {}
};

class SingularInnovationCovariance : public Error {
 public:
  SingularInnovationCovariance()
      : Error("innovation covariance is numerically singular") {}
};

class EmptyInterval : public Error {
 public:
  EmptyInterval() : Error("displacement accumulator holds no epochs") {}
};

class NoOverlap : public Error {
 public:
  NoOverlap() : Error("estimate and reference time spans do not overlap") {}
};

class TooShort : public Error {
 public:
  TooShort(double distance, double segment)
      : Error("traveled distance " + std::to_string(distance) +
              " m is shorter than one segment of " + std::to_string(segment) +
              " m") {}
};

class EmptySeries : public Error {
 public:
  EmptySeries() : Error("error series is empty") {}
};

class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column,
             const std::string& what)
      : Error(source + ":" + std::to_string(line) + ":" +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(double time, double variance)
      : Error("filter diverged at t=" + std::to_string(time) +
              " s: horizontal position variance " + std::to_string(variance) +
              " m^2") {}
};

}  // namespace wheelins
