#pragma once

#include <stdexcept>
#include <string>

namespace recurdim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or structurally invalid configuration text.
class SpecError : public Error {
 public:
  SpecError(const std::string& message, int line = 0, int column = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + message
                       : message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// A component whose maps do not share one integer contraction ratio >= 2.
class RatioError : public Error {
 public:
  RatioError(const std::string& message, int map_index)
      : Error(message), map_index_(map_index) {}
  int map_index() const noexcept { return map_index_; }

 private:
  int map_index_;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double lo = 0.0, double hi = 0.0)
      : Error(message), lo_(lo), hi_(hi) {}
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// The sampled function is too coarse for the requested subdivision.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace recurdim
