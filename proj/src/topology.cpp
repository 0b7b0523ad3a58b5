#include "camtopo/topology.hpp"

#include <algorithm>
#include <cmath>

#include "camtopo/util.hpp"

namespace camtopo {

int DistanceDistribution::bin_of(double value) const {
  const int n = n_bins();
  if (n == 0) return 0;
  const int raw = static_cast<int>(std::floor((value - support_min) / bin_width));
  return std::clamp(raw, 0, n - 1);
}

double DistanceDistribution::mean() const {
  double m = 0.0;
  for (int i = 0; i < n_bins(); ++i) {
    m += mass[static_cast<std::size_t>(i)] * bin_center(i);
  }
  return m;
}

double DistanceDistribution::stddev() const {
  const double mu = mean();
  double var = 0.0;
  for (int i = 0; i < n_bins(); ++i) {
    const double d = bin_center(i) - mu;
    var += mass[static_cast<std::size_t>(i)] * d * d;
  }
  return std::sqrt(std::max(var, 0.0));
}

double DistanceDistribution::mode_center() const {
  int best = 0;
  for (int i = 1; i < n_bins(); ++i) {
    if (mass[static_cast<std::size_t>(i)] >
        mass[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return bin_center(best);
}

DistanceDistribution DistanceDistribution::reversed() const {
  DistanceDistribution out = *this;
  out.cam_k = cam_l;
  out.cam_l = cam_k;
  out.support_min = -support_max;
  out.support_max = -support_min;
  out.mass.assign(mass.rbegin(), mass.rend());
  out.samples.clear();
  for (double s : samples) out.samples.push_back(-s);
  return out;
}

DistanceDistribution histogram_from_samples(const std::vector<double>& samples,
                                            double bin_width,
                                            double support_min,
                                            double support_max,
                                            DistributionKind kind) {
  DistanceDistribution dist;
  dist.kind = kind;
  dist.bin_width = bin_width;
  dist.support_min = support_min;
  dist.support_max = support_max;
  const int n_bins = std::max(
      1, static_cast<int>(std::ceil((support_max - support_min) / bin_width -
                                    1e-12)));
  dist.mass.assign(static_cast<std::size_t>(n_bins), 0.0);
  dist.samples = samples;
  dist.n_samples = static_cast<long>(samples.size());
  if (samples.empty()) return dist;

  const double w = 1.0 / static_cast<double>(samples.size());
  for (double s : samples) {
    dist.mass[static_cast<std::size_t>(dist.bin_of(s))] += w;
  }
  return dist;
}

SpeedEstimate person_speed(const Tracklet& tracklet, int tracklet_index,
                           const CameraModel& cam) {
  if (tracklet.frames.size() < 2) {
    raise(ErrorKind::TooFewFrames,
          strf("camera %d tracklet %d: need at least 2 frames",
               tracklet.camera_id, tracklet_index));
  }
  const double elapsed = tracklet.last_time() - tracklet.first_time();
  if (elapsed < 1e-6) {
    raise(ErrorKind::ZeroDuration,
          strf("camera %d tracklet %d: zero elapsed time", tracklet.camera_id,
               tracklet_index));
  }

  double path = 0.0;
  GroundPoint prev = back_project_ground(cam, tracklet.frames.front().foot);
  for (std::size_t i = 1; i < tracklet.frames.size(); ++i) {
    const GroundPoint cur =
        back_project_ground(cam, tracklet.frames[i].foot);
    path += std::hypot(cur.x - prev.x, cur.y - prev.y);
    prev = cur;
  }

  SpeedEstimate est;
  est.camera_id = tracklet.camera_id;
  est.tracklet_index = tracklet_index;
  est.speed_mps = path / elapsed;
  return est;
}

double pair_distance(double speed_k, double speed_l, double dt_s) {
  return 0.5 * (speed_k + speed_l) * dt_s;
}

DistanceDistribution build_distance_distribution(
    int cam_k, int cam_l, const std::vector<double>& distance_samples,
    const TopologyParams& params) {
  if (distance_samples.empty()) {
    raise(ErrorKind::NoReliablePairs,
          strf("pair %d-%d: no reliable correspondences", cam_k, cam_l));
  }
  DistanceDistribution dist = histogram_from_samples(
      distance_samples, params.bin_width_m, params.dist_support_min,
      params.dist_support_max, DistributionKind::Distance);
  dist.cam_k = cam_k;
  dist.cam_l = cam_l;
  return dist;
}

Topology build_topology(
    int n_cameras,
    const std::map<std::pair<int, int>, std::vector<PairSample>>& samples,
    const TopologyParams& params) {
  Topology topo;
  topo.n_cameras = n_cameras;

  for (const auto& [key, pair_samples] : samples) {
    if (pair_samples.empty()) continue;
    if (static_cast<long>(pair_samples.size()) < params.min_support) {
      topo.invalid_links.push_back(
          {key.first, key.second, static_cast<long>(pair_samples.size())});
      continue;
    }
    std::vector<double> distances;
    std::vector<double> times;
    distances.reserve(pair_samples.size());
    times.reserve(pair_samples.size());
    for (const auto& s : pair_samples) {
      distances.push_back(pair_distance(s.speed_k, s.speed_l, s.dt_s));
      times.push_back(s.dt_s);
    }

    TopologyEdge edge;
    edge.distance =
        build_distance_distribution(key.first, key.second, distances, params);
    edge.time = histogram_from_samples(times, params.bin_width_s,
                                       params.time_support_min,
                                       params.time_support_max,
                                       DistributionKind::Time);
    edge.time.cam_k = key.first;
    edge.time.cam_l = key.second;
    edge.reliable_pairs = static_cast<long>(pair_samples.size());
    topo.edges[key] = std::move(edge);
  }
  return topo;
}

}  // namespace camtopo
