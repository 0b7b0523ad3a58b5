#pragma once

#include <map>
#include <string>
#include <vector>

#include "camtopo/config.hpp"
#include "camtopo/evaluation.hpp"
#include "camtopo/reid.hpp"
#include "camtopo/scale.hpp"
#include "camtopo/topology.hpp"

namespace camtopo {

struct PipelineResult {
  std::vector<CameraModel> cameras_aligned;
  ScaleReport scale_report;
  Topology topology;
  std::vector<std::vector<PooledIdentity>> pooled;  // per camera
  std::vector<CorrespondenceSet> stage1;
  std::vector<CorrespondenceSet> final_dist;
  std::vector<CorrespondenceSet> final_time;
  EvalReport report;                        // filled when truth is given
  std::map<std::string, double> timings_ms;
};

/// Full inference chain: broad-window appearance re-id, scale alignment,
/// topology inference, and topology-restricted re-id. Stage failures are
/// re-thrown with the stage name prefixed. `truth` is only used to fill the
/// evaluation report.
PipelineResult run_pipeline(const TrackletSet& tracklets,
                            std::vector<CameraModel> cameras,
                            const PipelineConfig& config,
                            const GroundTruth* truth = nullptr);

/// Pools features and computes speeds for every tracklet (stage-0 helper,
/// also used by the stage CLIs).
std::vector<std::vector<PooledIdentity>> pool_all(
    const TrackletSet& tracklets, const std::vector<CameraModel>& cameras,
    int threads);

/// Stage 1: appearance-only matching of every camera pair inside a broad
/// symmetric window.
std::vector<CorrespondenceSet> initial_reid(
    const std::vector<std::vector<PooledIdentity>>& pooled,
    const PipelineConfig& config);

/// Stage 2: reliable pairs -> pairwise ratio estimates -> propagated scales,
/// applied to the returned cameras.
struct ScaleStageResult {
  std::vector<CameraModel> cameras;
  ScaleReport report;
};
ScaleStageResult align_scales(const TrackletSet& tracklets,
                              const std::vector<CameraModel>& cameras,
                              const std::vector<CorrespondenceSet>& stage1,
                              const PipelineConfig& config);

/// Stage 3: reliable pair samples -> distance + time topology.
Topology infer_topology(const std::vector<std::vector<PooledIdentity>>& pooled,
                        const std::vector<CorrespondenceSet>& stage1,
                        const PipelineConfig& config);

/// Stage 4: topology-restricted matching for one kind at the configured
/// coverage.
std::vector<CorrespondenceSet> restricted_matching(
    const std::vector<std::vector<PooledIdentity>>& pooled,
    const Topology& topology, DistributionKind kind,
    const PipelineConfig& config);

}  // namespace camtopo
