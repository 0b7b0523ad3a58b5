#pragma once

#include <map>
#include <utility>
#include <vector>

#include "camtopo/types.hpp"

namespace camtopo {

struct SpeedEstimate {
  int camera_id = -1;
  int tracklet_index = -1;
  double speed_mps = 0.0;  // >= 0, finite
};

enum class DistributionKind { Distance, Time };

/// Normalized histogram over inter-camera distance (meters) or transition
/// time (seconds). Samples outside the support are clamped into the edge
/// bins so the mass always sums to 1.
struct DistanceDistribution {
  int cam_k = -1;
  int cam_l = -1;
  DistributionKind kind = DistributionKind::Distance;
  double bin_width = 2.0;
  double support_min = -50.0;
  double support_max = 200.0;
  std::vector<double> mass;     // per bin, >= 0, sums to 1 when n_samples > 0
  long n_samples = 0;
  std::vector<double> samples;  // raw values; kept in memory, not serialized

  int n_bins() const { return static_cast<int>(mass.size()); }
  double bin_center(int i) const {
    return support_min + (i + 0.5) * bin_width;
  }
  int bin_of(double value) const;  // clamped into [0, n_bins)

  double mean() const;       // mass-weighted, with-in-bin uniform
  double stddev() const;     // includes the within-bin uniform term w^2/12
  double mode_center() const;

  /// Same link seen from the other endpoint: mirrored mass, negated support.
  DistanceDistribution reversed() const;
};

DistanceDistribution histogram_from_samples(const std::vector<double>& samples,
                                            double bin_width,
                                            double support_min,
                                            double support_max,
                                            DistributionKind kind);

struct TopologyEdge {
  DistanceDistribution distance;  // meters
  DistanceDistribution time;      // seconds
  long reliable_pairs = 0;
};

/// Camera graph; edges keyed (k, l) with k < l. Distance and time-based
/// histograms are built together so the time-based baseline is always
/// available for comparison.
struct Topology {
  int n_cameras = 0;
  std::map<std::pair<int, int>, TopologyEdge> edges;
  struct InvalidLink {
    int cam_k = -1;
    int cam_l = -1;
    long reliable_pairs = 0;
  };
  std::vector<InvalidLink> invalid_links;  // below min_support

  const TopologyEdge* find_edge(int k, int l) const {
    auto it = edges.find({std::min(k, l), std::max(k, l)});
    return it == edges.end() ? nullptr : &it->second;
  }
};

struct TopologyParams {
  double sim_threshold = 0.7;  // reliable-correspondence gate
  long min_support = 20;       // connectivity check
  double bin_width_m = 2.0;
  double dist_support_min = -50.0;
  double dist_support_max = 200.0;
  double bin_width_s = 2.0;
  double time_support_min = -60.0;
  double time_support_max = 300.0;
};

/// Average ground speed of a tracklet: total back-projected path length over
/// elapsed time. Requires >= 2 frames (TooFewFrames) and a non-zero duration
/// (ZeroDuration).
SpeedEstimate person_speed(const Tracklet& tracklet, int tracklet_index,
                           const CameraModel& cam);

/// Blind-region distance from the two observed speeds and the signed
/// transition time: 0.5 * (v_k + v_l) * dt.
double pair_distance(double speed_k, double speed_l, double dt_s);

/// Bins distance samples of one camera pair. Throws NoReliablePairs when the
/// sample list is empty.
DistanceDistribution build_distance_distribution(
    int cam_k, int cam_l, const std::vector<double>& distance_samples,
    const TopologyParams& params);

/// Per-pair observation used when assembling the graph: a reliable matched
/// pair's speeds and signed transition time.
struct PairSample {
  double speed_k = 0.0;
  double speed_l = 0.0;
  double dt_s = 0.0;
};

/// Builds the distance-based topology and its time-based twin from reliable
/// pair samples per camera pair. Pairs with fewer than min_support samples
/// are reported as invalid links.
Topology build_topology(
    int n_cameras,
    const std::map<std::pair<int, int>, std::vector<PairSample>>& samples,
    const TopologyParams& params);

}  // namespace camtopo
