#pragma once

#include <optional>
#include <vector>

#include "camtopo/reid.hpp"
#include "camtopo/sim.hpp"
#include "camtopo/topology.hpp"

namespace camtopo {

/// Ground-truth transition resolved to concrete tracklets: src left its
/// camera and the same person next appeared as dst.
struct ResolvedTransition {
  int cam_src = -1;
  int idx_src = -1;  // tracklet index within cam_src
  int cam_dst = -1;
  int idx_dst = -1;
  double dt_s = 0.0;  // ground-truth value (exact boundary times)
  bool resolved = false;
};

/// Maps pid-level truth pairs onto tracklet indices by matching the observed
/// transition time against the recorded one. Pairs whose tracklets were
/// dropped stay unresolved (they still count in T_gt).
std::vector<ResolvedTransition> resolve_transitions(
    const GroundTruth& truth, const TrackletSet& tracklets,
    double frame_rate_hint = 2.0);

struct Rank1Result {
  long tp = 0;
  long t_gt = 0;
  double percent = 0.0;  // 100 * tp / t_gt (0 when t_gt == 0)
};

/// Rank-1 accuracy: matched pairs that coincide with a ground-truth
/// transition, over the total number of ground-truth pairs.
Rank1Result rank1(const std::vector<CorrespondenceSet>& matches,
                  const std::vector<ResolvedTransition>& truth);

struct LinkStats {
  int cam_k = -1;
  int cam_l = -1;
  double time_mean = 0.0, time_std = 0.0;
  double dist_mean = 0.0, dist_std = 0.0;
  long n_samples = 0;
};

/// Histogram moments per link for both edge kinds.
std::vector<LinkStats> distribution_stats(const Topology& topology);

struct RetrievalPoint {
  double target_range_s = 0.0;
  double achieved_range_time_s = 0.0;
  double achieved_range_dist_s = 0.0;
  double rate_time_percent = 0.0;
  double rate_dist_percent = 0.0;
  double rate_time_weighted_percent = 0.0;  // weighted by per-link queries
  double rate_dist_weighted_percent = 0.0;
  double coverage_time = 0.0;  // coverage reaching the target range
  double coverage_dist = 0.0;
};

struct EvalInputs {
  const Topology* topology = nullptr;
  const TrackletSet* tracklets = nullptr;
  const std::vector<std::vector<PooledIdentity>>* pooled = nullptr;  // per cam
  const std::vector<ResolvedTransition>* truth = nullptr;
};

/// Retrieval rate vs average search range for both topology kinds. For each
/// target range the coverage parameter is bisected until the mean window
/// width over all queries matches the target; a query succeeds when its true
/// correspondent's first appearance falls inside its window. Per-link rates
/// are averaged unweighted; a query-weighted variant is reported alongside.
std::vector<RetrievalPoint> retrieval_curve(const EvalInputs& in,
                                            const std::vector<double>& ranges);

/// Retrieval rate of a constant window [lo, hi] seconds applied to every
/// query (the fixed time-based baseline).
double fixed_window_retrieval_percent(const EvalInputs& in, double lo_s,
                                      double hi_s);

/// Indices of truth transitions recovered by per-person adaptive windows at
/// the given coverage but missed by the fixed [lo, hi] window.
std::vector<int> adaptive_recovers_fixed_misses(const EvalInputs& in,
                                                double lo_s, double hi_s,
                                                double coverage);

struct RestrictedReidResult {
  std::vector<CorrespondenceSet> matches;  // one per topology edge
  Rank1Result rank1;
  double mean_range_s = 0.0;
  double coverage = 0.0;
};

/// Final re-identification with windows scaled to a target average search
/// range (used to compare the two topology kinds at equal range, and by the
/// pipeline with an explicit coverage when target_range_s is nullopt).
RestrictedReidResult restricted_reid(const EvalInputs& in,
                                     DistributionKind kind,
                                     std::optional<double> target_range_s,
                                     double coverage, double threshold);

struct EvalReport {
  Rank1Result stage1;
  Rank1Result final_dist;
  Rank1Result final_time;
  std::vector<RetrievalPoint> retrieval;
  struct Rank1Point {
    double range_s = 0.0;
    double rank1_time_percent = 0.0;
    double rank1_dist_percent = 0.0;
  };
  std::vector<Rank1Point> rank1_curve;
  std::vector<LinkStats> per_link_stats;
};

}  // namespace camtopo
