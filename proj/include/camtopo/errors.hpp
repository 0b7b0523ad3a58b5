#pragma once

#include <stdexcept>
#include <string>

namespace camtopo {

enum class ErrorKind {
  // geometry
  DegenerateProjection,
  RayParallelToGround,
  PointBehindCamera,
  NonPositiveHeight,
  // configuration / data ingestion
  InvalidConfig,
  ParseError,
  NonMonotonicTimestamps,
  IoError,
  MissingArtifact,
  // estimation
  NoValidFrames,
  NoValidPairs,
  EmptyEstimates,
  TooFewFrames,
  ZeroDuration,
  NoReliablePairs,
  ZeroSpeed,
  EmptyTracklet,
  DimensionMismatch,
  Internal,
};

const char* error_kind_name(ErrorKind kind);

/// Single exception type for all domain errors; the kind drives CLI exit
/// codes and lets tests assert on the precise failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace camtopo
