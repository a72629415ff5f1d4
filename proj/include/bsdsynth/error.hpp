#pragma once

#include <stdexcept>
#include <string>

namespace bsdsynth {

enum class ErrorKind {
  InputShape,    // bit-vector width does not match the declared width
  Domain,        // unknown node, variable out of range
  NotConverged,  // speculated leaves remain where final ones are required
  Config,        // bad configuration / unknown builtin
  Budget,        // oracle probe budget exhausted
  Protocol,      // external oracle misbehaved
  UnknownInput,  // truth-table oracle has no row for the query
  Format,        // malformed file contents
  Estimate,      // too few samples for a complexity estimate
  Mode,          // requested mode not available (e.g. exhaustive cap)
  PartialResult, // learning stopped before anything was decided
  Io,            // filesystem / process failures
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bsdsynth
