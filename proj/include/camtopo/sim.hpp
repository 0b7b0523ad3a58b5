#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "camtopo/types.hpp"

namespace camtopo {

/// Undirected blind-region link between two cameras. path_length_m is the
/// walking distance through the blind region; it may be <= 0 only when the
/// two footprints overlap (the person is seen by both cameras around the
/// handover).
struct LinkSpec {
  int cam_a = -1;
  int cam_b = -1;
  double path_length_m = 0.0;
};

/// Axis-aligned ground rectangle a camera observes.
struct Footprint {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
};

struct WorldConfig {
  int n_cameras = 5;
  std::vector<LinkSpec> links;        // default: 4-link chain
  std::vector<Footprint> footprints;  // per camera; default: chain layout
  double frame_rate = 2.0;            // Hz
  int n_persons = 300;
  double speed_min = 0.8;  // m/s
  double speed_max = 2.1;
  double height_mean = 1.72;  // m
  double height_std = 0.07;
  int feature_dim = 16;
  double feature_noise_std = 0.7;
  std::vector<double> camera_scale_errors;  // per camera; default all 1
  std::uint64_t rng_seed = 7;

  // Simulation shape knobs.
  int n_transitions = 4;         // camera-to-camera moves per person
  double start_window_s = 240.0; // person start times uniform in [0, this]
  double height_noise_std = 0.0; // per-frame body-height jitter, meters
  bool speed_jitter = false;     // +/-10% per-segment speed variation
  int image_width = 1280;
  int image_height = 720;

  void validate() const;  // throws InvalidConfig naming the violated field
};

/// Desk-scale default world: 5 cameras in a chain, blind paths
/// {46, 52, 35, 60} m, 300 walkers with uniform speeds in [0.8, 2.1] m/s.
WorldConfig default_world_config();

/// Lays out chain/tree footprints from the link list (BFS from the lowest
/// camera id); fills cfg.footprints. Links that close a cycle keep their
/// stated path length but are not embedded.
void layout_footprints(WorldConfig& cfg, double fov_w = 12.0,
                       double fov_h = 6.0);

/// One ground-truth transition: the person left cam_a and next appeared in
/// cam_b after dt_s seconds (negative when the views overlap).
struct TransitionPair {
  int cam_a = -1;
  int person_a = -1;
  int cam_b = -1;
  int person_b = -1;
  double dt_s = 0.0;
};

struct GroundTruth {
  std::vector<TransitionPair> pairs;
  std::vector<LinkSpec> link_distances;  // configured true blind-path lengths
};

struct World {
  std::vector<CameraModel> cameras;  // reported parameters (mis-scaled t)
  TrackletSet tracklets;
  GroundTruth truth;
};

/// Deterministic synthetic world. Reported camera translations are the true
/// ones multiplied by camera_scale_errors[id]; tracklet pixels are rendered
/// through the true cameras.
World generate_world(const WorldConfig& config);

struct IngestResult {
  TrackletSet tracklets;
  int dropped_single_frame = 0;
};

/// Reads a tracklet file; sorts by (camera_id, first timestamp), drops
/// tracklets with fewer than two frames (counted in dropped_single_frame).
/// Throws ParseError with a line number and NonMonotonicTimestamps naming
/// the offending tracklet.
IngestResult ingest_tracklets(const std::string& path);

}  // namespace camtopo
