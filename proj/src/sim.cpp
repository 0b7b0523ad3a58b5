#include "camtopo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>

#include "camtopo/util.hpp"

namespace camtopo {

namespace {

constexpr double kTimeEps = 1e-9;

double rect_gap_x(const Footprint& a, const Footprint& b) {
  // Signed gap along x between a's right edge and b's left edge, oriented
  // left-to-right.
  if (a.x0 <= b.x0) return b.x0 - a.x1;
  return a.x0 - b.x1;
}

bool rects_overlap(const Footprint& a, const Footprint& b) {
  return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

}  // namespace

void WorldConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& detail) {
    raise(ErrorKind::InvalidConfig, field + ": " + detail);
  };
  if (n_cameras <= 0) fail("n_cameras", "must be positive");
  if (footprints.size() != static_cast<std::size_t>(n_cameras)) {
    fail("fov_footprint", strf("expected %d rectangles, got %zu", n_cameras,
                               footprints.size()));
  }
  for (int i = 0; i < n_cameras; ++i) {
    const auto& fp = footprints[static_cast<std::size_t>(i)];
    if (!(fp.width() > 0.0) || !(fp.height() > 0.0)) {
      fail("fov_footprint", strf("camera %d rectangle is empty", i));
    }
  }
  if (!(frame_rate > 0.0)) fail("frame_rate", "must be positive");
  if (n_persons < 0) fail("n_persons", "must be non-negative");
  if (!(speed_min > 0.0)) fail("speed_range", "min must be positive");
  if (speed_max < speed_min) fail("speed_range", "max below min");
  if (!(height_mean > 0.0)) fail("height_mean_std", "mean must be positive");
  if (height_std < 0.0) fail("height_mean_std", "std must be non-negative");
  if (feature_dim < 1) fail("feature_dim", "must be at least 1");
  if (feature_noise_std < 0.0) fail("feature_noise_std", "must be >= 0");
  if (height_noise_std < 0.0) fail("height_noise_std", "must be >= 0");
  if (!camera_scale_errors.empty()) {
    if (camera_scale_errors.size() != static_cast<std::size_t>(n_cameras)) {
      fail("camera_scale_errors",
           strf("expected %d values, got %zu", n_cameras,
                camera_scale_errors.size()));
    }
    for (double e : camera_scale_errors) {
      if (!(e > 0.0)) fail("camera_scale_errors", "entries must be positive");
    }
  }
  if (n_transitions < 0) fail("n_transitions", "must be non-negative");
  if (start_window_s < 0.0) fail("start_window_s", "must be non-negative");
  if (image_width <= 0 || image_height <= 0) {
    fail("image_size", "must be positive");
  }
  for (const auto& link : links) {
    if (link.cam_a < 0 || link.cam_a >= n_cameras || link.cam_b < 0 ||
        link.cam_b >= n_cameras || link.cam_a == link.cam_b) {
      fail("links", strf("bad camera pair %d-%d", link.cam_a, link.cam_b));
    }
    const auto& fa = footprints[static_cast<std::size_t>(link.cam_a)];
    const auto& fb = footprints[static_cast<std::size_t>(link.cam_b)];
    if (link.path_length_m <= 0.0) {
      // Overlapped views: the footprints must actually overlap by the stated
      // amount along the walking axis and share the lane band.
      if (!rects_overlap(fa, fb)) {
        fail("links", strf("link %d-%d has non-positive length but disjoint "
                           "footprints",
                           link.cam_a, link.cam_b));
      }
      if (std::abs(rect_gap_x(fa, fb) - link.path_length_m) > 1e-6) {
        fail("links", strf("link %d-%d overlap does not match its length",
                           link.cam_a, link.cam_b));
      }
      if (std::abs(fa.y0 - fb.y0) > 1e-9 || std::abs(fa.y1 - fb.y1) > 1e-9) {
        fail("links", strf("overlapping link %d-%d needs identical lane bands",
                           link.cam_a, link.cam_b));
      }
    } else if (rects_overlap(fa, fb)) {
      fail("links", strf("link %d-%d has positive length but overlapping "
                         "footprints",
                         link.cam_a, link.cam_b));
    }
  }
}

void layout_footprints(WorldConfig& cfg, double fov_w, double fov_h) {
  cfg.footprints.assign(static_cast<std::size_t>(cfg.n_cameras), Footprint{});
  std::vector<double> pos(static_cast<std::size_t>(cfg.n_cameras), 0.0);
  std::vector<bool> placed(static_cast<std::size_t>(cfg.n_cameras), false);

  std::vector<std::vector<std::pair<int, double>>> adj(
      static_cast<std::size_t>(cfg.n_cameras));
  for (const auto& link : cfg.links) {
    adj[static_cast<std::size_t>(link.cam_a)].push_back(
        {link.cam_b, link.path_length_m});
    adj[static_cast<std::size_t>(link.cam_b)].push_back(
        {link.cam_a, link.path_length_m});
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());

  double component_base = 0.0;
  for (int root = 0; root < cfg.n_cameras; ++root) {
    if (placed[static_cast<std::size_t>(root)]) continue;
    pos[static_cast<std::size_t>(root)] = component_base;
    placed[static_cast<std::size_t>(root)] = true;
    std::queue<int> frontier;
    frontier.push(root);
    double component_max = component_base + fov_w;
    while (!frontier.empty()) {
      const int k = frontier.front();
      frontier.pop();
      for (const auto& [l, length] : adj[static_cast<std::size_t>(k)]) {
        if (placed[static_cast<std::size_t>(l)]) continue;
        pos[static_cast<std::size_t>(l)] =
            pos[static_cast<std::size_t>(k)] + fov_w + length;
        placed[static_cast<std::size_t>(l)] = true;
        component_max =
            std::max(component_max, pos[static_cast<std::size_t>(l)] + fov_w);
        frontier.push(l);
      }
    }
    component_base = component_max + 1000.0;  // keep components far apart
  }

  for (int i = 0; i < cfg.n_cameras; ++i) {
    auto& fp = cfg.footprints[static_cast<std::size_t>(i)];
    fp.x0 = pos[static_cast<std::size_t>(i)];
    fp.x1 = fp.x0 + fov_w;
    fp.y0 = -fov_h / 2.0;
    fp.y1 = fov_h / 2.0;
  }
}

WorldConfig default_world_config() {
  WorldConfig cfg;
  cfg.links = {{0, 1, 46.0}, {1, 2, 52.0}, {2, 3, 35.0}, {3, 4, 60.0}};
  layout_footprints(cfg);
  cfg.camera_scale_errors.assign(static_cast<std::size_t>(cfg.n_cameras), 1.0);
  return cfg;
}

namespace {

// Camera 8 m up behind the long edge of its footprint, focal length fitted
// so every corner of the rectangle projects at least 40 px inside the image.
CameraModel fit_camera_to_footprint(int id, const Footprint& fp, int width,
                                    int height) {
  const Eigen::Vector3d target((fp.x0 + fp.x1) / 2.0, (fp.y0 + fp.y1) / 2.0,
                               0.0);
  const Eigen::Vector3d position(target.x(), fp.y0 - 6.0, 8.0);
  CameraModel unit =
      make_lookat_camera(id, position, target, 1.0, 0.0, 0.0);

  const double margin = 40.0;
  double focal = 1e12;
  for (const double x : {fp.x0, fp.x1}) {
    for (const double y : {fp.y0, fp.y1}) {
      const Pixel n = project(unit, {x, y, 0.0});
      if (std::abs(n.u) > 1e-9) {
        focal = std::min(focal, (width / 2.0 - margin) / std::abs(n.u));
      }
      if (std::abs(n.v) > 1e-9) {
        focal = std::min(focal, (height / 2.0 - margin) / std::abs(n.v));
      }
    }
  }
  return make_lookat_camera(id, position, target, focal, width / 2.0,
                            height / 2.0);
}

struct Segment {
  double t0 = 0.0, t1 = 0.0;
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double x_at(double t) const {
    if (t1 - t0 < kTimeEps) return x0;
    const double a = (t - t0) / (t1 - t0);
    return x0 + a * (x1 - x0);
  }
  double y_at(double t) const {
    if (t1 - t0 < kTimeEps) return y0;
    const double a = (t - t0) / (t1 - t0);
    return y0 + a * (y1 - y0);
  }
};

struct Visit {
  int camera = -1;
  double entry = 0.0;
  double exit = 0.0;
  std::vector<FrameObs> frames;
};

std::vector<double> random_unit_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(dim));
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& x : v) {
      x = n(rng);
      norm += x * x;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

}  // namespace

World generate_world(const WorldConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.rng_seed);

  World world;
  std::vector<CameraModel> true_cams;
  true_cams.reserve(static_cast<std::size_t>(config.n_cameras));
  for (int i = 0; i < config.n_cameras; ++i) {
    true_cams.push_back(fit_camera_to_footprint(
        i, config.footprints[static_cast<std::size_t>(i)], config.image_width,
        config.image_height));
    CameraModel reported = true_cams.back();
    if (!config.camera_scale_errors.empty()) {
      reported.translation *=
          config.camera_scale_errors[static_cast<std::size_t>(i)];
    }
    world.cameras.push_back(reported);
  }

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(config.n_cameras));
  std::map<std::pair<int, int>, double> link_length;
  for (const auto& link : config.links) {
    adj[static_cast<std::size_t>(link.cam_a)].push_back(link.cam_b);
    adj[static_cast<std::size_t>(link.cam_b)].push_back(link.cam_a);
    link_length[{std::min(link.cam_a, link.cam_b),
                 std::max(link.cam_a, link.cam_b)}] = link.path_length_m;
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> u_speed(config.speed_min,
                                                 config.speed_max);
  std::normal_distribution<double> n_height(config.height_mean,
                                            config.height_std);
  std::normal_distribution<double> n01(0.0, 1.0);

  world.tracklets.by_camera.assign(static_cast<std::size_t>(config.n_cameras),
                                   {});

  for (int pid = 0; pid < config.n_persons; ++pid) {
    const double base_speed = u_speed(rng);
    double height = n_height(rng);
    height = std::max(height, 0.4 * config.height_mean);
    const std::vector<double> base_feature =
        random_unit_vector(rng, config.feature_dim);
    const double start_time = u01(rng) * config.start_window_s;

    // Non-backtracking walk over the link graph; the person leaves the
    // network at a dead end rather than turning around, so each link is
    // crossed at most once per person and direction.
    std::vector<int> route;
    route.push_back(static_cast<int>(u01(rng) * config.n_cameras) %
                    config.n_cameras);
    for (int step = 0; step < config.n_transitions; ++step) {
      const int prev = route.size() >= 2 ? route[route.size() - 2] : -1;
      std::vector<int> nbrs;
      for (int n : adj[static_cast<std::size_t>(route.back())]) {
        if (n != prev) nbrs.push_back(n);
      }
      if (nbrs.empty()) break;
      const int pick =
          static_cast<int>(u01(rng) * static_cast<double>(nbrs.size())) %
          static_cast<int>(nbrs.size());
      route.push_back(nbrs[static_cast<std::size_t>(pick)]);
    }

    auto segment_speed = [&](double v) {
      if (!config.speed_jitter) return v;
      return v * (0.9 + 0.2 * u01(rng));
    };

    // Build the trajectory: visible segments plus hidden corridor gaps.
    std::vector<Segment> segments;
    std::vector<Visit> visits(route.size());
    double cur_time = start_time;
    double cur_x = 0.0, cur_y = 0.0;
    bool continuous_entry = false;

    for (std::size_t i = 0; i < route.size(); ++i) {
      const int cam = route[static_cast<std::size_t>(i)];
      const auto& fp = config.footprints[static_cast<std::size_t>(cam)];
      visits[i].camera = cam;

      const int prev = i > 0 ? route[i - 1] : -1;
      const int next = i + 1 < route.size() ? route[i + 1] : -1;
      const double fp_cx = (fp.x0 + fp.x1) / 2.0;

      if (!continuous_entry) {
        cur_y = fp.y0 + (0.12 + 0.76 * u01(rng)) * fp.height();
        double entry_x = fp.x0;
        if (prev >= 0) {
          const auto& pf = config.footprints[static_cast<std::size_t>(prev)];
          entry_x = (pf.x0 + pf.x1) / 2.0 < fp_cx ? fp.x0 : fp.x1;
        } else if (next >= 0) {
          const auto& nf = config.footprints[static_cast<std::size_t>(next)];
          entry_x = (nf.x0 + nf.x1) / 2.0 < fp_cx ? fp.x1 : fp.x0;
        }
        cur_x = entry_x;
        visits[i].entry = cur_time;
      }
      // else: entry time was recorded while crossing the previous footprint.

      double exit_x = cur_x < fp_cx ? fp.x1 : fp.x0;  // cross the view
      if (next >= 0) {
        const auto& nf = config.footprints[static_cast<std::size_t>(next)];
        exit_x = (nf.x0 + nf.x1) / 2.0 < fp_cx ? fp.x0 : fp.x1;
      }

      const double v_visit = segment_speed(base_speed);
      if (std::abs(exit_x - cur_x) < 1e-9) {
        // Entered and must leave through the same side: walk in and back.
        const double dir = cur_x <= fp_cx ? 1.0 : -1.0;
        const double mid_x = cur_x + dir * 0.55 * fp.width();
        const double leg = std::abs(mid_x - cur_x) / v_visit;
        segments.push_back(
            {cur_time, cur_time + leg, cur_x, cur_y, mid_x, cur_y});
        cur_time += leg;
        segments.push_back(
            {cur_time, cur_time + leg, mid_x, cur_y, cur_x, cur_y});
        cur_time += leg;
      } else {
        const double leg = std::abs(exit_x - cur_x) / v_visit;
        segments.push_back(
            {cur_time, cur_time + leg, cur_x, cur_y, exit_x, cur_y});
        cur_time += leg;
        cur_x = exit_x;
      }
      visits[i].exit = cur_time;

      continuous_entry = false;
      if (next >= 0) {
        const double length = link_length[{std::min(cam, next),
                                           std::max(cam, next)}];
        if (length > 0.0) {
          cur_time += length / segment_speed(base_speed);
        } else {
          // Overlapping views: the walk continues; the next visit began when
          // the last segment crossed the neighbour's boundary.
          const auto& nf = config.footprints[static_cast<std::size_t>(next)];
          const Segment& seg = segments.back();
          const double vx = (seg.x1 - seg.x0) / (seg.t1 - seg.t0);
          const double enter_x = vx >= 0.0 ? nf.x0 : nf.x1;
          double t_enter = seg.t0 + (enter_x - seg.x0) / vx;
          t_enter = std::clamp(t_enter, seg.t0, seg.t1);
          visits[i + 1].entry = t_enter;
          continuous_entry = true;
        }
      }
    }

    // Emit frames on the person's tick grid.
    const double dt_tick = 1.0 / config.frame_rate;
    const double end_time = segments.empty() ? start_time : segments.back().t1;
    std::size_t seg_idx = 0;
    for (long n = 0;; ++n) {
      const double t = start_time + static_cast<double>(n) * dt_tick;
      if (t > end_time + kTimeEps) break;
      while (seg_idx < segments.size() &&
             t > segments[seg_idx].t1 + kTimeEps) {
        ++seg_idx;
      }
      if (seg_idx >= segments.size()) break;
      const Segment& seg = segments[seg_idx];
      if (t < seg.t0 - kTimeEps) continue;  // hidden corridor gap

      const double x = seg.x_at(t);
      const double y = seg.y_at(t);
      double frame_height = height;
      if (config.height_noise_std > 0.0) {
        frame_height += config.height_noise_std * n01(rng);
      }

      for (auto& visit : visits) {
        if (t < visit.entry - kTimeEps || t > visit.exit + kTimeEps) continue;
        const auto& fp =
            config.footprints[static_cast<std::size_t>(visit.camera)];
        if (!fp.contains(x, y)) continue;

        FrameObs obs;
        obs.time_s = t;
        const CameraModel& cam =
            true_cams[static_cast<std::size_t>(visit.camera)];
        obs.foot = project(cam, {x, y, 0.0});
        obs.head = project(cam, {x, y, frame_height});
        obs.feature = base_feature;
        if (config.feature_noise_std > 0.0) {
          double norm = 0.0;
          for (auto& c : obs.feature) {
            c += config.feature_noise_std * n01(rng);
            norm += c * c;
          }
          norm = std::sqrt(std::max(norm, 1e-300));
          for (auto& c : obs.feature) c /= norm;
        }
        visit.frames.push_back(std::move(obs));
      }
    }

    // Keep visits observed at least twice; record transitions between
    // consecutive surviving visits.
    std::vector<bool> kept(visits.size(), false);
    for (std::size_t i = 0; i < visits.size(); ++i) {
      kept[i] = visits[i].frames.size() >= 2;
      if (!kept[i]) continue;
      Tracklet tracklet;
      tracklet.camera_id = visits[i].camera;
      tracklet.person_id = pid;
      tracklet.frames = std::move(visits[i].frames);
      world.tracklets.by_camera[static_cast<std::size_t>(visits[i].camera)]
          .push_back(std::move(tracklet));
    }
    for (std::size_t i = 0; i + 1 < visits.size(); ++i) {
      if (!kept[i] || !kept[i + 1]) continue;
      TransitionPair pair;
      pair.cam_a = visits[i].camera;
      pair.person_a = pid;
      pair.cam_b = visits[i + 1].camera;
      pair.person_b = pid;
      pair.dt_s = visits[i + 1].entry - visits[i].exit;
      world.truth.pairs.push_back(pair);
    }
  }

  for (auto& tracklets : world.tracklets.by_camera) {
    std::stable_sort(tracklets.begin(), tracklets.end(),
                     [](const Tracklet& a, const Tracklet& b) {
                       if (a.first_time() != b.first_time()) {
                         return a.first_time() < b.first_time();
                       }
                       return a.person_id < b.person_id;
                     });
  }
  world.truth.link_distances = config.links;
  return world;
}

}  // namespace camtopo
