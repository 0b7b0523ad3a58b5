#pragma once

#include <string>
#include <vector>

#include "camtopo/evaluation.hpp"
#include "camtopo/scale.hpp"
#include "camtopo/sim.hpp"
#include "camtopo/topology.hpp"
#include "camtopo/types.hpp"

namespace camtopo {

// Line-delimited JSON, one camera per line: {id, K, R, t, scale} with K and
// R row-major.
void save_cameras(const std::string& path,
                  const std::vector<CameraModel>& cams);
std::vector<CameraModel> load_cameras(const std::string& path);

// {cam, pid, frames: [[t, fu, fv, hu, hv, feat...]]} per line.
void save_tracklets(const std::string& path, const TrackletSet& tracklets);

// {pairs: [[cam_a, pid, cam_b, pid, dt]], link_distances: [[a, b, m]]}.
void save_ground_truth(const std::string& path, const GroundTruth& truth);
GroundTruth load_ground_truth(const std::string& path);

// {k, l, pairs: [[i, j, score]]} per line.
void save_correspondences(const std::string& path,
                          const std::vector<CorrespondenceSet>& sets);
std::vector<CorrespondenceSet> load_correspondences(const std::string& path);

// {k, l, kind, bin_width, support, mass, n_samples} per line; invalid links
// are carried as {invalid: true, k, l, reliable_pairs} records.
void save_topology(const std::string& path, const Topology& topology);
Topology load_topology(const std::string& path);

void save_scale_report(const std::string& path, const ScaleReport& report);
ScaleReport load_scale_report(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);  // MissingArtifact

// CSV emitters (plot-ready).
void write_retrieval_curve_csv(const std::string& path,
                               const std::vector<RetrievalPoint>& curve);
void write_rank1_csv(const std::string& path, const EvalReport& report);
void write_link_stats_csv(const std::string& path,
                          const std::vector<LinkStats>& stats);

}  // namespace camtopo
