#include "camtopo/scale.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "camtopo/util.hpp"

namespace camtopo {

namespace {
constexpr double kNominalHeight = 1.72;  // m, outlier gate anchor
}

double mean_height(const Tracklet& tracklet, const CameraModel& cam) {
  const double h0 = kNominalHeight * cam.scale;
  const double lo = 0.5 * h0;
  const double hi = 2.5 * h0;

  double sum = 0.0;
  long n = 0;
  for (const auto& frame : tracklet.frames) {
    double h = 0.0;
    try {
      h = measure_height(cam, frame.foot, frame.head);
    } catch (const Error&) {
      continue;  // degenerate frame, treat like an outlier
    }
    if (h < lo || h > hi) continue;
    sum += h;
    ++n;
  }
  if (n == 0) {
    raise(ErrorKind::NoValidFrames,
          strf("camera %d: no usable height measurements", cam.camera_id));
  }
  return sum / static_cast<double>(n);
}

ScaleEstimate estimate_scale_ratio(const CorrespondenceSet& corrs,
                                   const std::vector<double>& heights_k,
                                   const std::vector<double>& heights_l) {
  std::vector<double> ratios;
  ratios.reserve(corrs.pairs.size());
  for (const auto& pair : corrs.pairs) {
    if (pair.index_k < 0 ||
        pair.index_k >= static_cast<int>(heights_k.size()) ||
        pair.index_l < 0 || pair.index_l >= static_cast<int>(heights_l.size())) {
      continue;
    }
    const double hk = heights_k[static_cast<std::size_t>(pair.index_k)];
    const double hl = heights_l[static_cast<std::size_t>(pair.index_l)];
    if (!std::isfinite(hk) || !std::isfinite(hl) || hk <= 0.0 || hl <= 0.0) {
      continue;
    }
    ratios.push_back(hk / hl);
  }
  if (ratios.empty()) {
    raise(ErrorKind::NoValidPairs,
          strf("pair %d-%d: no valid height pairs", corrs.cam_k, corrs.cam_l));
  }

  // Lower median: exact minimizer of sum_i |S - r_i| (any point between the
  // two middle ratios is optimal for even counts).
  const std::size_t mid = (ratios.size() - 1) / 2;
  std::nth_element(ratios.begin(), ratios.begin() + static_cast<long>(mid),
                   ratios.end());
  ScaleEstimate est;
  est.cam_k = corrs.cam_k;
  est.cam_l = corrs.cam_l;
  est.ratio = ratios[mid];
  est.support = static_cast<long>(ratios.size());
  return est;
}

ScaleReport propagate_scales(const std::vector<ScaleEstimate>& estimates,
                             int n_cameras, int reference_camera) {
  if (estimates.empty()) {
    raise(ErrorKind::EmptyEstimates, "no pairwise scale estimates");
  }

  // Maximum-support spanning forest via Kruskal; ties resolve toward lower
  // camera ids so the tree is deterministic.
  std::vector<std::size_t> order(estimates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = estimates[a];
    const auto& eb = estimates[b];
    if (ea.support != eb.support) return ea.support > eb.support;
    if (ea.cam_k != eb.cam_k) return ea.cam_k < eb.cam_k;
    return ea.cam_l < eb.cam_l;
  });

  std::vector<int> parent(static_cast<std::size_t>(n_cameras));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };

  std::vector<std::vector<std::pair<int, double>>> tree(
      static_cast<std::size_t>(n_cameras));
  std::vector<const ScaleEstimate*> non_tree;
  for (std::size_t idx : order) {
    const auto& e = estimates[idx];
    const int ra = find(e.cam_k);
    const int rb = find(e.cam_l);
    if (ra == rb) {
      non_tree.push_back(&e);
      continue;
    }
    parent[static_cast<std::size_t>(ra)] = rb;
    // Walking k -> l multiplies the accumulated scale by the ratio.
    tree[static_cast<std::size_t>(e.cam_k)].push_back({e.cam_l, e.ratio});
    tree[static_cast<std::size_t>(e.cam_l)].push_back({e.cam_k, 1.0 / e.ratio});
  }

  ScaleReport report;
  report.reference_camera = reference_camera;
  std::vector<double> scale(static_cast<std::size_t>(n_cameras), 1.0);
  std::vector<bool> reached(static_cast<std::size_t>(n_cameras), false);

  std::vector<int> stack = {reference_camera};
  reached[static_cast<std::size_t>(reference_camera)] = true;
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    for (const auto& [l, ratio] : tree[static_cast<std::size_t>(k)]) {
      if (reached[static_cast<std::size_t>(l)]) continue;
      reached[static_cast<std::size_t>(l)] = true;
      scale[static_cast<std::size_t>(l)] =
          scale[static_cast<std::size_t>(k)] * ratio;
      stack.push_back(l);
    }
  }

  for (int i = 0; i < n_cameras; ++i) {
    report.cameras.push_back(
        {i, scale[static_cast<std::size_t>(i)],
         !reached[static_cast<std::size_t>(i)]});
  }
  report.links.assign(estimates.begin(), estimates.end());
  for (const ScaleEstimate* e : non_tree) {
    if (!reached[static_cast<std::size_t>(e->cam_k)] ||
        !reached[static_cast<std::size_t>(e->cam_l)]) {
      continue;  // cycle within an unreachable component
    }
    const double implied = scale[static_cast<std::size_t>(e->cam_l)] /
                           scale[static_cast<std::size_t>(e->cam_k)];
    report.cycle_residuals.push_back(
        {e->cam_k, e->cam_l, std::abs(std::log(e->ratio / implied))});
  }
  return report;
}

}  // namespace camtopo
