#pragma once

#include <stdexcept>
#include <string>

namespace erblock {

enum class ErrorKind {
  Parse,
  Validation,
  Lookup,
  Argument,
  Capacity,
  LearnerFailure,
  Io,
};

// Every failure raised by the library carries a kind; the CLI maps kinds to
// process exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};
struct LookupError : Error {
  explicit LookupError(const std::string& what) : Error(ErrorKind::Lookup, what) {}
};
struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(ErrorKind::Argument, what) {}
};
struct CapacityError : Error {
  explicit CapacityError(const std::string& what) : Error(ErrorKind::Capacity, what) {}
};
struct LearnerFailure : Error {
  explicit LearnerFailure(const std::string& what) : Error(ErrorKind::LearnerFailure, what) {}
};
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace erblock
