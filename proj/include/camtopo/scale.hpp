#pragma once

#include <vector>

#include "camtopo/types.hpp"

namespace camtopo {

/// Relative translation-scale ratio between two cameras, estimated from
/// matched person heights (ratio multiplies camera l's scale to agree with
/// camera k).
struct ScaleEstimate {
  int cam_k = -1;
  int cam_l = -1;
  double ratio = 1.0;  // > 0
  long support = 0;    // matched pairs used, >= 1
};

struct ScaleReport {
  struct CameraScale {
    int id = -1;
    double scale = 1.0;
    bool flagged = false;  // unreachable from the reference camera
  };
  struct CycleResidual {
    int cam_k = -1;
    int cam_l = -1;
    double abs_log_residual = 0.0;
  };
  int reference_camera = -1;
  std::vector<CameraScale> cameras;
  std::vector<ScaleEstimate> links;
  std::vector<CycleResidual> cycle_residuals;
};

/// Mean measured height of a tracklet along its path, in meters. Frames with
/// raw heights outside [0.5, 2.5] x (1.72 m x cam.scale) are discarded as
/// detection outliers; throws NoValidFrames when nothing survives.
double mean_height(const Tracklet& tracklet, const CameraModel& cam);

/// L1-optimal scale ratio: the (lower) median of H_k / H_l over matched
/// pairs. heights_k / heights_l are indexed by tracklet index within each
/// camera; non-finite or non-positive heights invalidate a pair. Throws
/// NoValidPairs when no pair survives.
ScaleEstimate estimate_scale_ratio(const CorrespondenceSet& corrs,
                                   const std::vector<double>& heights_k,
                                   const std::vector<double>& heights_l);

/// Propagates pairwise ratios into per-camera scales over the
/// maximum-support spanning tree rooted at the reference camera. The
/// reference keeps scale 1; unreachable cameras keep scale 1 and are
/// flagged. Non-tree estimates are reported as cycle residuals
/// |log(ratio / implied_ratio)|. Throws EmptyEstimates.
ScaleReport propagate_scales(const std::vector<ScaleEstimate>& estimates,
                             int n_cameras, int reference_camera);

}  // namespace camtopo
