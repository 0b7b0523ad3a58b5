#include "camtopo/reid.hpp"

#include <algorithm>
#include <cmath>

#include "camtopo/util.hpp"

namespace camtopo {

PooledIdentity pool_features(const Tracklet& tracklet) {
  if (tracklet.frames.empty()) {
    raise(ErrorKind::EmptyTracklet,
          strf("camera %d person %d: no frames to pool", tracklet.camera_id,
               tracklet.person_id));
  }
  PooledIdentity out;
  out.camera_id = tracklet.camera_id;
  out.pooled_feature.assign(tracklet.frames.front().feature.size(), 0.0);
  for (const auto& frame : tracklet.frames) {
    if (frame.feature.size() != out.pooled_feature.size()) {
      raise(ErrorKind::DimensionMismatch,
            strf("camera %d person %d: inconsistent feature dimensions",
                 tracklet.camera_id, tracklet.person_id));
    }
    for (std::size_t i = 0; i < frame.feature.size(); ++i) {
      out.pooled_feature[i] += frame.feature[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(tracklet.frames.size());
  for (auto& c : out.pooled_feature) c *= inv;
  out.first_time_s = tracklet.first_time();
  out.last_time_s = tracklet.last_time();
  return out;
}

double similarity(const PooledIdentity& a, const PooledIdentity& b) {
  if (a.pooled_feature.size() != b.pooled_feature.size()) {
    raise(ErrorKind::DimensionMismatch,
          strf("pooled feature dimensions differ: %zu vs %zu",
               a.pooled_feature.size(), b.pooled_feature.size()));
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < a.pooled_feature.size(); ++i) {
    const double d = a.pooled_feature[i] - b.pooled_feature[i];
    sq += d * d;
  }
  return std::exp(-std::sqrt(sq));
}

SearchWindow adaptive_window(const DistanceDistribution& dist, double speed,
                             double coverage) {
  if (dist.n_samples <= 0 || dist.n_bins() == 0) {
    raise(ErrorKind::Internal, "adaptive_window on an empty distribution");
  }
  if (!(speed > 0.0)) {
    raise(ErrorKind::ZeroSpeed, "person speed is zero; window undefined");
  }

  // Bin selection happens on the stored histogram; only the final conversion
  // divides by the speed, so windows for speeds v and a*v are exact 1/a
  // scalings of each other.
  const int n = dist.n_bins();
  double center_d = 0.0;
  for (int i = 0; i < n; ++i) {
    center_d += dist.mass[static_cast<std::size_t>(i)] * dist.bin_center(i);
  }

  int lo = dist.bin_of(center_d);
  int hi = lo;
  double enclosed = dist.mass[static_cast<std::size_t>(lo)];
  while (enclosed < coverage - 1e-12 && (lo > 0 || hi < n - 1)) {
    if (lo > 0) {
      --lo;
      enclosed += dist.mass[static_cast<std::size_t>(lo)];
    }
    if (hi < n - 1 && enclosed < coverage - 1e-12) {
      ++hi;
      enclosed += dist.mass[static_cast<std::size_t>(hi)];
    }
  }

  const double left_edge = dist.support_min + lo * dist.bin_width;
  const double right_edge = dist.support_min + (hi + 1) * dist.bin_width;
  const double half_d =
      std::max(center_d - left_edge, right_edge - center_d);

  SearchWindow w;
  w.cam_from = dist.cam_k;
  w.cam_to = dist.cam_l;
  w.center_s = center_d / speed;
  w.half_width_s = half_d / speed;
  return w;
}

double enclosed_mass(const DistanceDistribution& dist, double speed,
                     double center_s, double half_width_s) {
  if (!(speed > 0.0)) {
    raise(ErrorKind::ZeroSpeed, "enclosed_mass needs a positive speed");
  }
  const double lo = (center_s - half_width_s) * speed;
  const double hi = (center_s + half_width_s) * speed;
  double total = 0.0;
  for (int i = 0; i < dist.n_bins(); ++i) {
    const double b0 = dist.support_min + i * dist.bin_width;
    const double b1 = b0 + dist.bin_width;
    const double overlap = std::min(hi, b1) - std::max(lo, b0);
    if (overlap <= 0.0) continue;
    total += dist.mass[static_cast<std::size_t>(i)] *
             std::min(1.0, overlap / dist.bin_width);
  }
  return total;
}

CorrespondenceSet match_pair(const std::vector<PooledIdentity>& queries,
                             const std::vector<PooledIdentity>& gallery,
                             const std::vector<SearchWindow>& query_windows,
                             const std::vector<SearchWindow>& gallery_windows,
                             double threshold) {
  struct Candidate {
    int qi;
    int gj;
    double sim;
  };
  std::vector<Candidate> candidates;

  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (std::size_t j = 0; j < gallery.size(); ++j) {
      bool admitted = false;
      if (!query_windows.empty()) {
        admitted = window_contains(query_windows[i], queries[i].last_time_s,
                                   gallery[j].first_time_s);
      }
      if (!admitted && !gallery_windows.empty()) {
        admitted = window_contains(gallery_windows[j], gallery[j].last_time_s,
                                   queries[i].first_time_s);
      }
      if (!admitted) continue;
      const double s = similarity(queries[i], gallery[j]);
      if (s < threshold) continue;
      candidates.push_back(
          {static_cast<int>(i), static_cast<int>(j), s});
    }
  }

  // Greedy mutual-best: highest similarity first, ties toward lower indices.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.sim != b.sim) return a.sim > b.sim;
              if (a.qi != b.qi) return a.qi < b.qi;
              return a.gj < b.gj;
            });

  std::vector<bool> used_q(queries.size(), false);
  std::vector<bool> used_g(gallery.size(), false);
  CorrespondenceSet out;
  if (!queries.empty()) out.cam_k = queries.front().camera_id;
  if (!gallery.empty()) out.cam_l = gallery.front().camera_id;
  for (const auto& c : candidates) {
    if (used_q[static_cast<std::size_t>(c.qi)] ||
        used_g[static_cast<std::size_t>(c.gj)]) {
      continue;
    }
    used_q[static_cast<std::size_t>(c.qi)] = true;
    used_g[static_cast<std::size_t>(c.gj)] = true;
    out.pairs.push_back({c.qi, c.gj, c.sim});
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const CorrespondencePair& a, const CorrespondencePair& b) {
              if (a.index_k != b.index_k) return a.index_k < b.index_k;
              return a.index_l < b.index_l;
            });
  return out;
}

}  // namespace camtopo
