#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hypzero {

/// Broad failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
  InvalidInput,    // malformed or out-of-contract arguments
  NonConvergence,  // numerical iteration did not certify
  MissingFile,     // an input file could not be opened
  Pole,            // evaluation on top of a root / singularity
  Reroute,         // path integration hit a branch collision
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the root finder; carries the per-sweep maximal relative correction so callers can see
/// how far the iteration got before giving up.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> trace, int precision_bits)
      : Error(ErrorKind::NonConvergence, what), trace_(std::move(trace)), precision_bits_(precision_bits) {}

  const std::vector<double>& trace() const noexcept { return trace_; }
  int precision_bits() const noexcept { return precision_bits_; }

 private:
  std::vector<double> trace_;
  int precision_bits_;
};

inline Error invalid_input(const std::string& what) { return Error(ErrorKind::InvalidInput, what); }

}  // namespace hypzero
