#pragma once

#include <stdexcept>
#include <string>

namespace salem {

/// Process exit codes used by the command-line front end.
enum class ExitCode : int {
  kPass = 0,
  kVerificationFailure = 1,
  kInvalidInput = 2,
  kResourceLimit = 3,
};

/// Base class of every error raised by the library. Carries the exit code
/// the CLI reports for it.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Parameters or arguments outside their documented domain.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ExitCode::kInvalidInput, what) {}
};

/// Malformed input file. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(ExitCode::kInvalidInput,
              file + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Integer width, memory budget or frequency budget exceeded.
class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what)
      : Error(ExitCode::kResourceLimit, what) {}
};

/// A randomized stage could not produce a verified candidate.
class RetriesExhausted : public Error {
 public:
  explicit RetriesExhausted(const std::string& what)
      : Error(ExitCode::kVerificationFailure, what) {}
};

/// An inequality or structural invariant failed where it must hold.
class VerificationFailure : public Error {
 public:
  explicit VerificationFailure(const std::string& what)
      : Error(ExitCode::kVerificationFailure, what) {}
};

}  // namespace salem
