#include "camtopo/errors.hpp"

namespace camtopo {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateProjection: return "DegenerateProjection";
    case ErrorKind::RayParallelToGround: return "RayParallelToGround";
    case ErrorKind::PointBehindCamera: return "PointBehindCamera";
    case ErrorKind::NonPositiveHeight: return "NonPositiveHeight";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::MissingArtifact: return "MissingArtifact";
    case ErrorKind::NoValidFrames: return "NoValidFrames";
    case ErrorKind::NoValidPairs: return "NoValidPairs";
    case ErrorKind::EmptyEstimates: return "EmptyEstimates";
    case ErrorKind::TooFewFrames: return "TooFewFrames";
    case ErrorKind::ZeroDuration: return "ZeroDuration";
    case ErrorKind::NoReliablePairs: return "NoReliablePairs";
    case ErrorKind::ZeroSpeed: return "ZeroSpeed";
    case ErrorKind::EmptyTracklet: return "EmptyTracklet";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace camtopo
