#pragma once

#include <stdexcept>
#include <string>

namespace qplr {

/// Base of every error raised by the library. `stage()` names the pipeline
/// stage that failed ("model", "spectral", ...); the runner prefixes it when
/// an error crosses a stage boundary.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Input violates a documented precondition (bad window, non-Hermitian
/// potential, index out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Time grid too long for the window: the propagation front would reach the
/// Dirichlet edges.
class ContainmentError : public Error {
 public:
  using Error::Error;
};

/// The integrated density of states has no retained slope (flat band).
class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

/// Front threshold never attained, so no light-cone fit is possible.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Config file failed schema validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qplr
