#pragma once

#include <cstdint>
#include <vector>

#include "camtopo/geometry.hpp"

namespace camtopo {

/// One timestamped observation of a person in a camera.
struct FrameObs {
  double time_s = 0.0;
  Pixel foot;
  Pixel head;
  std::vector<double> feature;  // unit-norm appearance descriptor
};

/// One person's contiguous observation sequence within a single camera.
/// person_id is ground truth carried for evaluation only; the inference
/// stages never read it.
struct Tracklet {
  int camera_id = -1;
  int person_id = -1;
  std::vector<FrameObs> frames;  // time_s strictly increasing, size >= 2

  double first_time() const { return frames.front().time_s; }
  double last_time() const { return frames.back().time_s; }
};

/// Tracklets grouped per camera; the index of a tracklet within its camera
/// vector is the identifier used by correspondence files.
struct TrackletSet {
  std::vector<std::vector<Tracklet>> by_camera;

  int n_cameras() const { return static_cast<int>(by_camera.size()); }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& v : by_camera) n += v.size();
    return n;
  }
};

/// Matched identity pairs between two cameras with similarity scores.
/// One-to-one: a tracklet index appears at most once per side.
struct CorrespondencePair {
  int index_k = -1;
  int index_l = -1;
  double score = 0.0;  // in [0, 1]
};

struct CorrespondenceSet {
  int cam_k = -1;
  int cam_l = -1;
  std::vector<CorrespondencePair> pairs;
};

}  // namespace camtopo
