#pragma once

#include <stdexcept>
#include <string>

namespace paradom {

// Process exit codes used by the command-line driver. Numerical refusals
// occupy 10..19.
enum class ExitCode : int {
  ok = 0,
  failure = 1,
  usage = 2,
  resolution = 10,
  certificate = 11,
  data_too_rough = 12,
  no_convergence = 13,
  shift_too_small = 14,
  range = 15,
  divergence = 16,
  data = 17,
  multiplier = 18,
  numerical = 19,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Invalid sizes, mismatched grids, inadmissible parameters.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ExitCode::usage, what) {}
};

/// A Fourier symbol evaluated to a non-finite value.
class MultiplierError : public Error {
 public:
  explicit MultiplierError(const std::string& what)
      : Error(ExitCode::multiplier, what) {}
};

/// exp_field argument outside the representable range.
class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what)
      : Error(ExitCode::range, what) {}
};

/// The grid cannot represent the requested object (unresolved noise,
/// partition too small, cutoff cap reached).
class ResolutionError : public Error {
 public:
  explicit ResolutionError(const std::string& what)
      : Error(ExitCode::resolution, what) {}
};

/// A contraction certificate failed or a Neumann series did not converge.
class CertificateError : public Error {
 public:
  explicit CertificateError(const std::string& what)
      : Error(ExitCode::certificate, what) {}
};

class DataTooRoughError : public Error {
 public:
  explicit DataTooRoughError(const std::string& what)
      : Error(ExitCode::data_too_rough, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what)
      : Error(ExitCode::no_convergence, what) {}
};

class ShiftTooSmallError : public Error {
 public:
  explicit ShiftTooSmallError(const std::string& what)
      : Error(ExitCode::shift_too_small, what) {}
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what)
      : Error(ExitCode::divergence, what) {}
};

/// Missing or inconsistent enhanced-data objects, unreadable files.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what)
      : Error(ExitCode::data, what) {}
};

/// Breakdown inside a numerical kernel (e.g. a collapsed Krylov or
/// subspace basis).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ExitCode::numerical, what) {}
};

}  // namespace paradom
