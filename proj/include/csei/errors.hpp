#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace csei {

enum class ErrorKind {
  io,          // unreadable/unwritable files
  schema,      // missing columns, malformed headers
  config,      // invalid or unknown configuration
  data,        // bad values inside otherwise well-formed records
  dimension,   // mismatched matrix/vector shapes
  degenerate,  // inputs outside an operation's domain (constant series, ...)
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::io: return "io";
    case ErrorKind::schema: return "schema";
    case ErrorKind::config: return "config";
    case ErrorKind::data: return "data";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::degenerate: return "degenerate";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Attributes a wrapped module failure to the pipeline stage it occurred in.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), stage + ": " + cause.what()),
        stage_(std::move(stage)) {}
  StageError(std::string stage, ErrorKind kind, const std::string& message)
      : Error(kind, stage + ": " + message), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace csei
