#pragma once

#include <vector>

#include "camtopo/topology.hpp"
#include "camtopo/types.hpp"

namespace camtopo {

/// A tracklet reduced to one matching unit: average-pooled feature vector,
/// appearance interval, and ground speed.
struct PooledIdentity {
  int camera_id = -1;
  int tracklet_index = -1;
  std::vector<double> pooled_feature;
  double first_time_s = 0.0;
  double last_time_s = 0.0;
  double speed_mps = 0.0;
};

/// Transition-time search window from cam_from to cam_to:
/// [center - half_width, center + half_width] seconds relative to the
/// query's exit time.
struct SearchWindow {
  int cam_from = -1;
  int cam_to = -1;
  double center_s = 0.0;
  double half_width_s = 0.0;  // >= 0
};

/// Arithmetic mean of the per-frame features, no renormalization.
/// Throws EmptyTracklet.
PooledIdentity pool_features(const Tracklet& tracklet);

/// exp(-||a - b||_2), in (0, 1]. Throws DimensionMismatch.
double similarity(const PooledIdentity& a, const PooledIdentity& b);

/// Person-adaptive window: the distance histogram is mapped to transition
/// time by dividing bin edges by the speed (mass preserved), the center is
/// the mass-weighted mean, and whole time bins are added symmetrically
/// around it (spilling to the other side at a support edge) until the
/// enclosed mass reaches `coverage`. Throws ZeroSpeed; callers fall back to
/// the link's time-based window. Passing the time histogram with speed 1
/// yields the global time-based window.
SearchWindow adaptive_window(const DistanceDistribution& dist, double speed,
                             double coverage);

/// Mass of the distribution (mapped by `speed`) inside
/// [center - half_width, center + half_width], with fractional bin overlap.
/// Used by tests and the coverage sweep in evaluation.
double enclosed_mass(const DistanceDistribution& dist, double speed,
                     double center_s, double half_width_s);

inline bool window_contains(const SearchWindow& w, double exit_query_s,
                            double entry_gallery_s) {
  const double dt = entry_gallery_s - exit_query_s;
  return dt >= w.center_s - w.half_width_s && dt <= w.center_s + w.half_width_s;
}

/// Greedy mutual-best one-to-one assignment by similarity over the candidate
/// pairs admitted by the windows. A pair (i, j) is a candidate when j's
/// first appearance falls inside i's window, or (when gallery-side windows
/// are supplied) i's first appearance falls inside j's reverse window.
/// Matches below `threshold` are rejected; ties break toward lower indices.
CorrespondenceSet match_pair(const std::vector<PooledIdentity>& queries,
                             const std::vector<PooledIdentity>& gallery,
                             const std::vector<SearchWindow>& query_windows,
                             const std::vector<SearchWindow>& gallery_windows,
                             double threshold);

}  // namespace camtopo
