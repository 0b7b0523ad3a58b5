#include "camtopo/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "camtopo/util.hpp"

namespace camtopo {

namespace {

// Smallest consecutive frame gap in the data; the truth-resolution tolerance
// scales with it (frame quantization shifts observed dt by at most two
// ticks).
double min_frame_gap(const TrackletSet& tracklets, double fallback) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& cam : tracklets.by_camera) {
    for (const auto& t : cam) {
      for (std::size_t i = 1; i < t.frames.size(); ++i) {
        gap = std::min(gap, t.frames[i].time_s - t.frames[i - 1].time_s);
      }
    }
  }
  return std::isfinite(gap) ? gap : fallback;
}

}  // namespace

std::vector<ResolvedTransition> resolve_transitions(
    const GroundTruth& truth, const TrackletSet& tracklets,
    double frame_rate_hint) {
  std::map<std::pair<int, int>, std::vector<int>> by_cam_pid;
  for (int cam = 0; cam < tracklets.n_cameras(); ++cam) {
    const auto& list = tracklets.by_camera[static_cast<std::size_t>(cam)];
    for (int idx = 0; idx < static_cast<int>(list.size()); ++idx) {
      by_cam_pid[{cam, list[static_cast<std::size_t>(idx)].person_id}]
          .push_back(idx);
    }
  }

  const double tick = min_frame_gap(tracklets, 1.0 / frame_rate_hint);
  const double tol = 2.5 * tick;

  std::vector<ResolvedTransition> out;
  out.reserve(truth.pairs.size());
  for (const auto& pair : truth.pairs) {
    ResolvedTransition r;
    r.cam_src = pair.cam_a;
    r.cam_dst = pair.cam_b;
    r.dt_s = pair.dt_s;

    const auto it_a = by_cam_pid.find({pair.cam_a, pair.person_a});
    const auto it_b = by_cam_pid.find({pair.cam_b, pair.person_b});
    if (it_a != by_cam_pid.end() && it_b != by_cam_pid.end()) {
      double best = tol;
      for (int ia : it_a->second) {
        const auto& ta =
            tracklets.by_camera[static_cast<std::size_t>(pair.cam_a)]
                [static_cast<std::size_t>(ia)];
        for (int ib : it_b->second) {
          const auto& tb =
              tracklets.by_camera[static_cast<std::size_t>(pair.cam_b)]
                  [static_cast<std::size_t>(ib)];
          const double dt_obs = tb.first_time() - ta.last_time();
          const double err = std::abs(dt_obs - pair.dt_s);
          if (err < best) {
            best = err;
            r.idx_src = ia;
            r.idx_dst = ib;
            r.resolved = true;
          }
        }
      }
    }
    out.push_back(r);
  }
  return out;
}

Rank1Result rank1(const std::vector<CorrespondenceSet>& matches,
                  const std::vector<ResolvedTransition>& truth) {
  // Orientation-free tracklet pair keys.
  auto make_key = [](int cam_a, int idx_a, int cam_b, int idx_b) {
    if (std::tie(cam_a, idx_a) > std::tie(cam_b, idx_b)) {
      std::swap(cam_a, cam_b);
      std::swap(idx_a, idx_b);
    }
    return std::tuple<int, int, int, int>(cam_a, idx_a, cam_b, idx_b);
  };

  std::set<std::tuple<int, int, int, int>> truth_keys;
  for (const auto& t : truth) {
    if (!t.resolved) continue;
    truth_keys.insert(make_key(t.cam_src, t.idx_src, t.cam_dst, t.idx_dst));
  }

  Rank1Result result;
  result.t_gt = static_cast<long>(truth.size());
  for (const auto& set : matches) {
    for (const auto& p : set.pairs) {
      const auto key = make_key(set.cam_k, p.index_k, set.cam_l, p.index_l);
      const auto it = truth_keys.find(key);
      if (it != truth_keys.end()) {
        truth_keys.erase(it);  // each ground-truth pair counts once
        ++result.tp;
      }
    }
  }
  result.percent =
      result.t_gt > 0
          ? 100.0 * static_cast<double>(result.tp) /
                static_cast<double>(result.t_gt)
          : 0.0;
  return result;
}

std::vector<LinkStats> distribution_stats(const Topology& topology) {
  std::vector<LinkStats> out;
  for (const auto& [key, edge] : topology.edges) {
    LinkStats s;
    s.cam_k = key.first;
    s.cam_l = key.second;
    s.time_mean = edge.time.mean();
    s.time_std = edge.time.stddev();
    s.dist_mean = edge.distance.mean();
    s.dist_std = edge.distance.stddev();
    s.n_samples = edge.distance.n_samples;
    out.push_back(s);
  }
  return out;
}

namespace {

// One matching window to be built at a given coverage: either person-adaptive
// (distance histogram / person speed) or the link-global time window.
struct WindowSpec {
  const DistanceDistribution* hist = nullptr;
  double speed = 1.0;
};

WindowSpec window_spec(const TopologyEdge& edge, DistributionKind kind,
                       double speed) {
  if (kind == DistributionKind::Distance && speed > 0.0) {
    return {&edge.distance, speed};
  }
  return {&edge.time, 1.0};  // global fallback, also the time-based kind
}

SearchWindow build_window(const WindowSpec& spec, double coverage) {
  return adaptive_window(*spec.hist, spec.speed, coverage);
}

// All windows the matcher would use: one per tracklet per side per edge.
std::vector<WindowSpec> collect_window_specs(const EvalInputs& in,
                                             DistributionKind kind) {
  std::vector<WindowSpec> specs;
  for (const auto& [key, edge] : in.topology->edges) {
    for (int cam : {key.first, key.second}) {
      for (const auto& ident :
           (*in.pooled)[static_cast<std::size_t>(cam)]) {
        specs.push_back(window_spec(edge, kind, ident.speed_mps));
      }
    }
  }
  return specs;
}

double mean_width(const std::vector<WindowSpec>& specs, double coverage) {
  if (specs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& spec : specs) {
    total += 2.0 * build_window(spec, coverage).half_width_s;
  }
  return total / static_cast<double>(specs.size());
}

// Largest coverage whose mean window width stays at or below the target
// (mean width is a non-decreasing step function of coverage).
double coverage_for_range(const std::vector<WindowSpec>& specs,
                          double target_range_s) {
  if (specs.empty()) return 0.0;
  const double c_min = 1e-9;
  const double c_max = 1.0;
  if (mean_width(specs, c_min) >= target_range_s) return c_min;
  if (mean_width(specs, c_max) <= target_range_s) return c_max;
  double lo = c_min, hi = c_max;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mean_width(specs, mid) <= target_range_s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

struct LinkRate {
  long queries = 0;
  long hits = 0;
};

}  // namespace

std::vector<RetrievalPoint> retrieval_curve(const EvalInputs& in,
                                            const std::vector<double>& ranges) {
  std::vector<RetrievalPoint> curve;
  std::vector<double> sorted_ranges = ranges;
  std::sort(sorted_ranges.begin(), sorted_ranges.end());

  const auto specs_time = collect_window_specs(in, DistributionKind::Time);
  const auto specs_dist = collect_window_specs(in, DistributionKind::Distance);

  for (double range : sorted_ranges) {
    RetrievalPoint point;
    point.target_range_s = range;
    point.coverage_time = coverage_for_range(specs_time, range);
    point.coverage_dist = coverage_for_range(specs_dist, range);
    point.achieved_range_time_s = mean_width(specs_time, point.coverage_time);
    point.achieved_range_dist_s = mean_width(specs_dist, point.coverage_dist);

    for (DistributionKind kind :
         {DistributionKind::Time, DistributionKind::Distance}) {
      const double coverage = kind == DistributionKind::Time
                                  ? point.coverage_time
                                  : point.coverage_dist;
      std::map<std::pair<int, int>, LinkRate> per_link;
      for (const auto& t : *in.truth) {
        const auto key = std::make_pair(std::min(t.cam_src, t.cam_dst),
                                        std::max(t.cam_src, t.cam_dst));
        auto& rate = per_link[key];
        ++rate.queries;
        if (!t.resolved) continue;
        const TopologyEdge* edge = in.topology->find_edge(t.cam_src, t.cam_dst);
        if (edge == nullptr) continue;  // invalid link: candidates empty
        const auto& src =
            (*in.pooled)[static_cast<std::size_t>(t.cam_src)]
                [static_cast<std::size_t>(t.idx_src)];
        const auto& dst =
            (*in.pooled)[static_cast<std::size_t>(t.cam_dst)]
                [static_cast<std::size_t>(t.idx_dst)];
        const SearchWindow w =
            build_window(window_spec(*edge, kind, src.speed_mps), coverage);
        if (window_contains(w, src.last_time_s, dst.first_time_s)) {
          ++rate.hits;
        }
      }

      double unweighted = 0.0;
      long links = 0;
      long total_q = 0, total_h = 0;
      for (const auto& [key, rate] : per_link) {
        if (rate.queries == 0) continue;
        unweighted += static_cast<double>(rate.hits) /
                      static_cast<double>(rate.queries);
        ++links;
        total_q += rate.queries;
        total_h += rate.hits;
      }
      const double rate_pct =
          links > 0 ? 100.0 * unweighted / static_cast<double>(links) : 0.0;
      const double weighted_pct =
          total_q > 0 ? 100.0 * static_cast<double>(total_h) /
                            static_cast<double>(total_q)
                      : 0.0;
      if (kind == DistributionKind::Time) {
        point.rate_time_percent = rate_pct;
        point.rate_time_weighted_percent = weighted_pct;
      } else {
        point.rate_dist_percent = rate_pct;
        point.rate_dist_weighted_percent = weighted_pct;
      }
    }
    curve.push_back(point);
  }
  return curve;
}

double fixed_window_retrieval_percent(const EvalInputs& in, double lo_s,
                                      double hi_s) {
  std::map<std::pair<int, int>, LinkRate> per_link;
  for (const auto& t : *in.truth) {
    const auto key = std::make_pair(std::min(t.cam_src, t.cam_dst),
                                    std::max(t.cam_src, t.cam_dst));
    auto& rate = per_link[key];
    ++rate.queries;
    if (!t.resolved) continue;
    const auto& src = (*in.pooled)[static_cast<std::size_t>(t.cam_src)]
        [static_cast<std::size_t>(t.idx_src)];
    const auto& dst = (*in.pooled)[static_cast<std::size_t>(t.cam_dst)]
        [static_cast<std::size_t>(t.idx_dst)];
    const double dt = dst.first_time_s - src.last_time_s;
    if (dt >= lo_s && dt <= hi_s) ++rate.hits;
  }
  double unweighted = 0.0;
  long links = 0;
  for (const auto& [key, rate] : per_link) {
    if (rate.queries == 0) continue;
    unweighted +=
        static_cast<double>(rate.hits) / static_cast<double>(rate.queries);
    ++links;
  }
  return links > 0 ? 100.0 * unweighted / static_cast<double>(links) : 0.0;
}

std::vector<int> adaptive_recovers_fixed_misses(const EvalInputs& in,
                                                double lo_s, double hi_s,
                                                double coverage) {
  std::vector<int> recovered;
  for (int i = 0; i < static_cast<int>(in.truth->size()); ++i) {
    const auto& t = (*in.truth)[static_cast<std::size_t>(i)];
    if (!t.resolved) continue;
    const TopologyEdge* edge = in.topology->find_edge(t.cam_src, t.cam_dst);
    if (edge == nullptr) continue;
    const auto& src = (*in.pooled)[static_cast<std::size_t>(t.cam_src)]
        [static_cast<std::size_t>(t.idx_src)];
    const auto& dst = (*in.pooled)[static_cast<std::size_t>(t.cam_dst)]
        [static_cast<std::size_t>(t.idx_dst)];
    const double dt = dst.first_time_s - src.last_time_s;
    const bool fixed_hit = dt >= lo_s && dt <= hi_s;
    if (fixed_hit) continue;
    const SearchWindow w = build_window(
        window_spec(*edge, DistributionKind::Distance, src.speed_mps),
        coverage);
    if (window_contains(w, src.last_time_s, dst.first_time_s)) {
      recovered.push_back(i);
    }
  }
  return recovered;
}

RestrictedReidResult restricted_reid(const EvalInputs& in,
                                     DistributionKind kind,
                                     std::optional<double> target_range_s,
                                     double coverage, double threshold) {
  RestrictedReidResult result;
  const auto specs = collect_window_specs(in, kind);
  if (target_range_s.has_value()) {
    coverage = coverage_for_range(specs, *target_range_s);
  }
  result.coverage = coverage;
  result.mean_range_s = mean_width(specs, coverage);

  for (const auto& [key, edge] : in.topology->edges) {
    const auto& queries = (*in.pooled)[static_cast<std::size_t>(key.first)];
    const auto& gallery = (*in.pooled)[static_cast<std::size_t>(key.second)];
    std::vector<SearchWindow> q_windows;
    std::vector<SearchWindow> g_windows;
    q_windows.reserve(queries.size());
    g_windows.reserve(gallery.size());
    for (const auto& q : queries) {
      q_windows.push_back(
          build_window(window_spec(edge, kind, q.speed_mps), coverage));
    }
    for (const auto& g : gallery) {
      g_windows.push_back(
          build_window(window_spec(edge, kind, g.speed_mps), coverage));
    }
    CorrespondenceSet set =
        match_pair(queries, gallery, q_windows, g_windows, threshold);
    set.cam_k = key.first;
    set.cam_l = key.second;
    result.matches.push_back(std::move(set));
  }

  if (in.truth != nullptr) {
    result.rank1 = rank1(result.matches, *in.truth);
  }
  return result;
}

}  // namespace camtopo
