#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace basinctl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A model or constraint map produced NaN/Inf.
class NonFiniteOutput : public Error {
 public:
  using Error::Error;
};

class NonFiniteInput : public Error {
 public:
  using Error::Error;
};

/// Integration blew up. Carries the step index and the offending state.
class NonFiniteState : public Error {
 public:
  NonFiniteState(std::size_t step, Eigen::VectorXd state, const std::string& what)
      : Error(what), step_(step), state_(std::move(state)) {}

  std::size_t step() const noexcept { return step_; }
  const Eigen::VectorXd& state() const noexcept { return state_; }

 private:
  std::size_t step_;
  Eigen::VectorXd state_;
};

class UnknownModel : public Error {
 public:
  using Error::Error;
};

class BadTopology : public Error {
 public:
  using Error::Error;
};

class IneligibleStart : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

/// Malformed config file. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line) : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace basinctl
