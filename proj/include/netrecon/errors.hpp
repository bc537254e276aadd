#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netrecon {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated constructor invariant.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Raised when some |x_i| leaves the overflow bound during integration.
class SimulationBlowup : public Error {
 public:
  SimulationBlowup(double time, const std::string& what)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A regressor produced a non-finite value on a trajectory sample.
class EvaluationError : public Error {
 public:
  EvaluationError(std::size_t sample, const std::string& what)
      : Error(what), sample_(sample) {}
  std::size_t sample() const noexcept { return sample_; }

 private:
  std::size_t sample_;
};

/// The model class cannot explain the data (fit residual above tolerance).
class DataInconsistent : public Error {
 public:
  DataInconsistent(double residual, const std::string& what)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Enumeration would exceed the configured piece or pair cap.
class ScaleError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace netrecon
