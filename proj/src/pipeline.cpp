#include "camtopo/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "camtopo/util.hpp"

namespace camtopo {

namespace {

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; results land in a
// pre-sized vector so the outcome is order-deterministic.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}

  template <typename Fn>
  auto run(const std::string& stage, Fn&& fn) -> decltype(fn()) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record(stage, start);
      } else {
        auto result = fn();
        record(stage, start);
        return result;
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "stage " + stage + ": " + e.what());
    }
  }

 private:
  void record(const std::string& stage,
              std::chrono::steady_clock::time_point start) {
    const auto end = std::chrono::steady_clock::now();
    sink_[stage] =
        std::chrono::duration<double, std::milli>(end - start).count();
  }

  std::map<std::string, double>& sink_;
};

std::vector<std::pair<int, int>> camera_pairs(int n_cameras) {
  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; k < n_cameras; ++k) {
    for (int l = k + 1; l < n_cameras; ++l) pairs.push_back({k, l});
  }
  return pairs;
}

}  // namespace

std::vector<std::vector<PooledIdentity>> pool_all(
    const TrackletSet& tracklets, const std::vector<CameraModel>& cameras,
    int threads) {
  std::vector<std::vector<PooledIdentity>> pooled(
      static_cast<std::size_t>(tracklets.n_cameras()));
  parallel_for(tracklets.n_cameras(), effective_threads(threads), [&](int cam) {
    const auto& list = tracklets.by_camera[static_cast<std::size_t>(cam)];
    auto& out = pooled[static_cast<std::size_t>(cam)];
    out.resize(list.size());
    const CameraModel* model = nullptr;
    for (const auto& c : cameras) {
      if (c.camera_id == cam) model = &c;
    }
    for (int i = 0; i < static_cast<int>(list.size()); ++i) {
      PooledIdentity ident = pool_features(list[static_cast<std::size_t>(i)]);
      ident.tracklet_index = i;
      if (model != nullptr) {
        try {
          ident.speed_mps =
              person_speed(list[static_cast<std::size_t>(i)], i, *model)
                  .speed_mps;
        } catch (const Error&) {
          ident.speed_mps = 0.0;  // stationary or degenerate; fall back later
        }
      }
      out[static_cast<std::size_t>(i)] = std::move(ident);
    }
  });
  return pooled;
}

std::vector<CorrespondenceSet> initial_reid(
    const std::vector<std::vector<PooledIdentity>>& pooled,
    const PipelineConfig& config) {
  const int n = static_cast<int>(pooled.size());
  const auto pairs = camera_pairs(n);
  std::vector<CorrespondenceSet> sets(pairs.size());

  parallel_for(static_cast<int>(pairs.size()), effective_threads(config.threads),
               [&](int idx) {
                 const auto [k, l] = pairs[static_cast<std::size_t>(idx)];
                 const auto& queries = pooled[static_cast<std::size_t>(k)];
                 const auto& gallery = pooled[static_cast<std::size_t>(l)];
                 // Broad symmetric window; covers travel in both directions.
                 std::vector<SearchWindow> windows(
                     queries.size(),
                     SearchWindow{k, l, 0.0, config.initial_half_window_s});
                 CorrespondenceSet set = match_pair(queries, gallery, windows,
                                                    {},
                                                    config.initial_threshold);
                 set.cam_k = k;
                 set.cam_l = l;
                 sets[static_cast<std::size_t>(idx)] = std::move(set);
               });

  std::vector<CorrespondenceSet> out;
  for (auto& set : sets) {
    if (!set.pairs.empty()) out.push_back(std::move(set));
  }
  return out;
}

namespace {

CorrespondenceSet reliable_subset(const CorrespondenceSet& set,
                                  double threshold) {
  CorrespondenceSet out;
  out.cam_k = set.cam_k;
  out.cam_l = set.cam_l;
  for (const auto& p : set.pairs) {
    if (p.score > threshold) out.pairs.push_back(p);
  }
  return out;
}

}  // namespace

ScaleStageResult align_scales(const TrackletSet& tracklets,
                              const std::vector<CameraModel>& cameras,
                              const std::vector<CorrespondenceSet>& stage1,
                              const PipelineConfig& config) {
  const int n = tracklets.n_cameras();

  // Mean heights per tracklet at the current scales (NaN = unusable).
  std::vector<std::vector<double>> heights(static_cast<std::size_t>(n));
  parallel_for(n, effective_threads(config.threads), [&](int cam) {
    const auto& list = tracklets.by_camera[static_cast<std::size_t>(cam)];
    auto& out = heights[static_cast<std::size_t>(cam)];
    out.assign(list.size(), std::numeric_limits<double>::quiet_NaN());
    const CameraModel* model = nullptr;
    for (const auto& c : cameras) {
      if (c.camera_id == cam) model = &c;
    }
    if (model == nullptr) return;
    for (std::size_t i = 0; i < list.size(); ++i) {
      try {
        out[i] = mean_height(list[i], *model);
      } catch (const Error&) {
        // leave NaN
      }
    }
  });

  std::vector<ScaleEstimate> estimates;
  for (const auto& set : stage1) {
    const CorrespondenceSet reliable =
        reliable_subset(set, config.sim_threshold);
    if (reliable.pairs.empty()) continue;
    try {
      estimates.push_back(estimate_scale_ratio(
          reliable, heights[static_cast<std::size_t>(set.cam_k)],
          heights[static_cast<std::size_t>(set.cam_l)]));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoValidPairs) throw;
    }
  }

  int reference = config.reference_camera;
  if (reference < 0 || reference >= n) reference = 0;

  ScaleStageResult result;
  result.cameras = cameras;
  if (estimates.empty()) {
    // Nothing to align: keep unit scales, flag everything but the reference.
    result.report.reference_camera = reference;
    for (int i = 0; i < n; ++i) {
      result.report.cameras.push_back({i, 1.0, i != reference});
    }
    return result;
  }

  result.report = propagate_scales(estimates, n, reference);
  for (auto& cam : result.cameras) {
    for (const auto& entry : result.report.cameras) {
      if (entry.id == cam.camera_id) cam.scale = entry.scale;
    }
  }
  return result;
}

Topology infer_topology(const std::vector<std::vector<PooledIdentity>>& pooled,
                        const std::vector<CorrespondenceSet>& stage1,
                        const PipelineConfig& config) {
  std::map<std::pair<int, int>, std::vector<PairSample>> samples;
  for (const auto& set : stage1) {
    const CorrespondenceSet reliable =
        reliable_subset(set, config.sim_threshold);
    if (reliable.pairs.empty()) continue;
    auto& bucket = samples[{set.cam_k, set.cam_l}];
    for (const auto& p : reliable.pairs) {
      const auto& a = pooled[static_cast<std::size_t>(set.cam_k)]
          [static_cast<std::size_t>(p.index_k)];
      const auto& b = pooled[static_cast<std::size_t>(set.cam_l)]
          [static_cast<std::size_t>(p.index_l)];
      // Transition time in the direction of travel: the tracklet that
      // appears first is the source.
      const bool a_first = a.first_time_s <= b.first_time_s;
      const PooledIdentity& src = a_first ? a : b;
      const PooledIdentity& dst = a_first ? b : a;
      PairSample sample;
      sample.speed_k = src.speed_mps;
      sample.speed_l = dst.speed_mps;
      sample.dt_s = dst.first_time_s - src.last_time_s;
      bucket.push_back(sample);
    }
  }
  return build_topology(static_cast<int>(pooled.size()), samples,
                        config.topology_params());
}

std::vector<CorrespondenceSet> restricted_matching(
    const std::vector<std::vector<PooledIdentity>>& pooled,
    const Topology& topology, DistributionKind kind,
    const PipelineConfig& config) {
  EvalInputs in;
  in.topology = &topology;
  in.pooled = &pooled;
  return restricted_reid(in, kind, std::nullopt, config.coverage,
                         config.initial_threshold)
      .matches;
}

PipelineResult run_pipeline(const TrackletSet& tracklets,
                            std::vector<CameraModel> cameras,
                            const PipelineConfig& config,
                            const GroundTruth* truth) {
  config.validate();
  for (const auto& cam : cameras) cam.validate();

  PipelineResult result;
  StageTimer timer(result.timings_ms);

  auto pooled_initial = timer.run("pool", [&] {
    return pool_all(tracklets, cameras, config.threads);
  });

  result.stage1 = timer.run("initial_reid", [&] {
    return initial_reid(pooled_initial, config);
  });

  auto scale_stage = timer.run("scale_align", [&] {
    return align_scales(tracklets, cameras, result.stage1, config);
  });
  result.cameras_aligned = std::move(scale_stage.cameras);
  result.scale_report = std::move(scale_stage.report);

  // Speeds change with the corrected scales; re-pool before topology.
  result.pooled = timer.run("repool", [&] {
    return pool_all(tracklets, result.cameras_aligned, config.threads);
  });

  result.topology = timer.run("topology", [&] {
    return infer_topology(result.pooled, result.stage1, config);
  });

  timer.run("restricted_reid", [&] {
    if (config.topology_kind != "time") {
      result.final_dist = restricted_matching(
          result.pooled, result.topology, DistributionKind::Distance, config);
    }
    if (config.topology_kind != "dist") {
      result.final_time = restricted_matching(
          result.pooled, result.topology, DistributionKind::Time, config);
    }
  });

  if (truth != nullptr) {
    timer.run("evaluate", [&] {
      const auto resolved = resolve_transitions(*truth, tracklets);
      result.report.stage1 = rank1(result.stage1, resolved);
      result.report.final_dist = rank1(result.final_dist, resolved);
      result.report.final_time = rank1(result.final_time, resolved);

      EvalInputs in;
      in.topology = &result.topology;
      in.tracklets = &tracklets;
      in.pooled = &result.pooled;
      in.truth = &resolved;
      result.report.retrieval = retrieval_curve(in, config.eval_ranges_s);
      for (double range : config.eval_ranges_s) {
        EvalReport::Rank1Point point;
        point.range_s = range;
        point.rank1_time_percent =
            restricted_reid(in, DistributionKind::Time, range, config.coverage,
                            config.initial_threshold)
                .rank1.percent;
        point.rank1_dist_percent =
            restricted_reid(in, DistributionKind::Distance, range,
                            config.coverage, config.initial_threshold)
                .rank1.percent;
        result.report.rank1_curve.push_back(point);
      }
      result.report.per_link_stats = distribution_stats(result.topology);
    });
  }
  return result;
}

}  // namespace camtopo
