#include "camtopo/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "camtopo/util.hpp"
#include "json.hpp"

namespace camtopo {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorKind::IoError, "cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path, ErrorKind kind) {
  std::ifstream in(path);
  if (!in) raise(kind, "cannot read " + path);
  return in;
}

json parse_line(const std::string& line, const std::string& path,
                long lineno) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    raise(ErrorKind::ParseError, strf("%s:%ld: malformed record",
                                      path.c_str(), lineno));
  }
  return j;
}

}  // namespace

void save_cameras(const std::string& path,
                  const std::vector<CameraModel>& cams) {
  auto out = open_out(path);
  for (const auto& cam : cams) {
    json j;
    j["id"] = cam.camera_id;
    std::vector<double> k(9), r(9);
    for (int i = 0; i < 3; ++i) {
      for (int c = 0; c < 3; ++c) {
        k[static_cast<std::size_t>(3 * i + c)] = cam.intrinsics(i, c);
        r[static_cast<std::size_t>(3 * i + c)] = cam.rotation(i, c);
      }
    }
    j["K"] = k;
    j["R"] = r;
    j["t"] = std::vector<double>{cam.translation.x(), cam.translation.y(),
                                 cam.translation.z()};
    j["scale"] = cam.scale;
    out << j.dump() << "\n";
  }
}

std::vector<CameraModel> load_cameras(const std::string& path) {
  auto in = open_in(path, ErrorKind::IoError);
  std::vector<CameraModel> cams;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const json j = parse_line(line, path, lineno);
    try {
      CameraModel cam;
      cam.camera_id = j.at("id").get<int>();
      const auto k = j.at("K").get<std::vector<double>>();
      const auto r = j.at("R").get<std::vector<double>>();
      const auto t = j.at("t").get<std::vector<double>>();
      if (k.size() != 9 || r.size() != 9 || t.size() != 3) {
        raise(ErrorKind::ParseError,
              strf("%s:%ld: bad matrix sizes", path.c_str(), lineno));
      }
      for (int i = 0; i < 3; ++i) {
        for (int c = 0; c < 3; ++c) {
          cam.intrinsics(i, c) = k[static_cast<std::size_t>(3 * i + c)];
          cam.rotation(i, c) = r[static_cast<std::size_t>(3 * i + c)];
        }
      }
      cam.translation = {t[0], t[1], t[2]};
      cam.scale = j.at("scale").get<double>();
      cam.validate();
      cams.push_back(cam);
    } catch (const json::exception&) {
      raise(ErrorKind::ParseError,
            strf("%s:%ld: missing camera field", path.c_str(), lineno));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidConfig) {
        raise(ErrorKind::ParseError,
              strf("%s:%ld: %s", path.c_str(), lineno, e.what()));
      }
      throw;
    }
  }
  std::sort(cams.begin(), cams.end(),
            [](const CameraModel& a, const CameraModel& b) {
              return a.camera_id < b.camera_id;
            });
  return cams;
}

void save_tracklets(const std::string& path, const TrackletSet& tracklets) {
  auto out = open_out(path);
  for (const auto& cam : tracklets.by_camera) {
    for (const auto& t : cam) {
      json j;
      j["cam"] = t.camera_id;
      j["pid"] = t.person_id;
      json frames = json::array();
      for (const auto& f : t.frames) {
        json row = json::array();
        row.push_back(f.time_s);
        row.push_back(f.foot.u);
        row.push_back(f.foot.v);
        row.push_back(f.head.u);
        row.push_back(f.head.v);
        for (double c : f.feature) row.push_back(c);
        frames.push_back(std::move(row));
      }
      j["frames"] = std::move(frames);
      out << j.dump() << "\n";
    }
  }
}

IngestResult ingest_tracklets(const std::string& path) {
  auto in = open_in(path, ErrorKind::IoError);
  std::vector<Tracklet> all;
  int dropped = 0;
  std::string line;
  long lineno = 0;
  int max_cam = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const json j = parse_line(line, path, lineno);
    Tracklet t;
    try {
      t.camera_id = j.at("cam").get<int>();
      t.person_id = j.at("pid").get<int>();
      for (const auto& row : j.at("frames")) {
        if (!row.is_array() || row.size() < 5) {
          raise(ErrorKind::ParseError,
                strf("%s:%ld: frame row too short", path.c_str(), lineno));
        }
        FrameObs f;
        f.time_s = row[0].get<double>();
        f.foot = {row[1].get<double>(), row[2].get<double>()};
        f.head = {row[3].get<double>(), row[4].get<double>()};
        for (std::size_t i = 5; i < row.size(); ++i) {
          f.feature.push_back(row[i].get<double>());
        }
        t.frames.push_back(std::move(f));
      }
    } catch (const json::exception&) {
      raise(ErrorKind::ParseError,
            strf("%s:%ld: missing tracklet field", path.c_str(), lineno));
    }
    if (t.camera_id < 0) {
      raise(ErrorKind::ParseError,
            strf("%s:%ld: negative camera id", path.c_str(), lineno));
    }
    for (std::size_t i = 1; i < t.frames.size(); ++i) {
      if (t.frames[i].time_s <= t.frames[i - 1].time_s) {
        raise(ErrorKind::NonMonotonicTimestamps,
              strf("camera %d person %d (%s:%ld)", t.camera_id, t.person_id,
                   path.c_str(), lineno));
      }
    }
    if (t.frames.size() < 2) {
      ++dropped;
      continue;
    }
    max_cam = std::max(max_cam, t.camera_id);
    all.push_back(std::move(t));
  }

  IngestResult result;
  result.dropped_single_frame = dropped;
  result.tracklets.by_camera.assign(static_cast<std::size_t>(max_cam + 1), {});
  std::stable_sort(all.begin(), all.end(),
                   [](const Tracklet& a, const Tracklet& b) {
                     if (a.camera_id != b.camera_id) {
                       return a.camera_id < b.camera_id;
                     }
                     if (a.first_time() != b.first_time()) {
                       return a.first_time() < b.first_time();
                     }
                     return a.person_id < b.person_id;
                   });
  for (auto& t : all) {
    result.tracklets.by_camera[static_cast<std::size_t>(t.camera_id)]
        .push_back(std::move(t));
  }
  return result;
}

void save_ground_truth(const std::string& path, const GroundTruth& truth) {
  json j;
  json pairs = json::array();
  for (const auto& p : truth.pairs) {
    pairs.push_back({p.cam_a, p.person_a, p.cam_b, p.person_b, p.dt_s});
  }
  json links = json::array();
  for (const auto& l : truth.link_distances) {
    links.push_back({l.cam_a, l.cam_b, l.path_length_m});
  }
  j["pairs"] = std::move(pairs);
  j["link_distances"] = std::move(links);
  auto out = open_out(path);
  out << j.dump() << "\n";
}

GroundTruth load_ground_truth(const std::string& path) {
  auto in = open_in(path, ErrorKind::MissingArtifact);
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j = json::parse(buffer.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    raise(ErrorKind::ParseError, path + ": malformed ground truth");
  }
  GroundTruth truth;
  try {
    for (const auto& row : j.at("pairs")) {
      truth.pairs.push_back({row[0].get<int>(), row[1].get<int>(),
                             row[2].get<int>(), row[3].get<int>(),
                             row[4].get<double>()});
    }
    for (const auto& row : j.at("link_distances")) {
      truth.link_distances.push_back(
          {row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
    }
  } catch (const json::exception&) {
    raise(ErrorKind::ParseError, path + ": missing ground-truth field");
  }
  return truth;
}

void save_correspondences(const std::string& path,
                          const std::vector<CorrespondenceSet>& sets) {
  auto out = open_out(path);
  for (const auto& set : sets) {
    json j;
    j["k"] = set.cam_k;
    j["l"] = set.cam_l;
    json pairs = json::array();
    for (const auto& p : set.pairs) {
      pairs.push_back({p.index_k, p.index_l, p.score});
    }
    j["pairs"] = std::move(pairs);
    out << j.dump() << "\n";
  }
}

std::vector<CorrespondenceSet> load_correspondences(const std::string& path) {
  auto in = open_in(path, ErrorKind::MissingArtifact);
  std::vector<CorrespondenceSet> sets;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const json j = parse_line(line, path, lineno);
    CorrespondenceSet set;
    try {
      set.cam_k = j.at("k").get<int>();
      set.cam_l = j.at("l").get<int>();
      for (const auto& row : j.at("pairs")) {
        set.pairs.push_back(
            {row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
      }
    } catch (const json::exception&) {
      raise(ErrorKind::ParseError,
            strf("%s:%ld: missing correspondence field", path.c_str(),
                 lineno));
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

namespace {

json distribution_to_json(const DistanceDistribution& d) {
  json j;
  j["k"] = d.cam_k;
  j["l"] = d.cam_l;
  j["kind"] = d.kind == DistributionKind::Distance ? "dist" : "time";
  j["bin_width"] = d.bin_width;
  j["support"] = {d.support_min, d.support_max};
  j["mass"] = d.mass;
  j["n_samples"] = d.n_samples;
  return j;
}

DistanceDistribution distribution_from_json(const json& j) {
  DistanceDistribution d;
  d.cam_k = j.at("k").get<int>();
  d.cam_l = j.at("l").get<int>();
  d.kind = j.at("kind").get<std::string>() == "dist"
               ? DistributionKind::Distance
               : DistributionKind::Time;
  d.bin_width = j.at("bin_width").get<double>();
  const auto support = j.at("support").get<std::vector<double>>();
  d.support_min = support.at(0);
  d.support_max = support.at(1);
  d.mass = j.at("mass").get<std::vector<double>>();
  d.n_samples = j.at("n_samples").get<long>();
  return d;
}

}  // namespace

void save_topology(const std::string& path, const Topology& topology) {
  auto out = open_out(path);
  json header;
  header["n_cameras"] = topology.n_cameras;
  out << header.dump() << "\n";
  for (const auto& [key, edge] : topology.edges) {
    json jd = distribution_to_json(edge.distance);
    jd["reliable_pairs"] = edge.reliable_pairs;
    out << jd.dump() << "\n";
    out << distribution_to_json(edge.time).dump() << "\n";
  }
  for (const auto& invalid : topology.invalid_links) {
    json j;
    j["invalid"] = true;
    j["k"] = invalid.cam_k;
    j["l"] = invalid.cam_l;
    j["reliable_pairs"] = invalid.reliable_pairs;
    out << j.dump() << "\n";
  }
}

Topology load_topology(const std::string& path) {
  auto in = open_in(path, ErrorKind::MissingArtifact);
  Topology topo;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const json j = parse_line(line, path, lineno);
    try {
      if (j.contains("n_cameras")) {
        topo.n_cameras = j.at("n_cameras").get<int>();
        continue;
      }
      if (j.contains("invalid")) {
        topo.invalid_links.push_back({j.at("k").get<int>(),
                                      j.at("l").get<int>(),
                                      j.at("reliable_pairs").get<long>()});
        continue;
      }
      DistanceDistribution d = distribution_from_json(j);
      auto& edge = topo.edges[{d.cam_k, d.cam_l}];
      if (d.kind == DistributionKind::Distance) {
        if (j.contains("reliable_pairs")) {
          edge.reliable_pairs = j.at("reliable_pairs").get<long>();
        }
        edge.distance = std::move(d);
      } else {
        edge.time = std::move(d);
      }
    } catch (const json::exception&) {
      raise(ErrorKind::ParseError,
            strf("%s:%ld: missing topology field", path.c_str(), lineno));
    }
  }
  return topo;
}

void save_scale_report(const std::string& path, const ScaleReport& report) {
  json j;
  j["reference_camera"] = report.reference_camera;
  json cams = json::array();
  for (const auto& c : report.cameras) {
    cams.push_back({{"id", c.id}, {"scale", c.scale}, {"flagged", c.flagged}});
  }
  json links = json::array();
  for (const auto& l : report.links) {
    links.push_back({{"k", l.cam_k},
                     {"l", l.cam_l},
                     {"ratio", l.ratio},
                     {"support", l.support}});
  }
  json cycles = json::array();
  for (const auto& c : report.cycle_residuals) {
    cycles.push_back(
        {{"k", c.cam_k}, {"l", c.cam_l}, {"residual", c.abs_log_residual}});
  }
  j["cameras"] = std::move(cams);
  j["links"] = std::move(links);
  j["cycle_residuals"] = std::move(cycles);
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

ScaleReport load_scale_report(const std::string& path) {
  auto in = open_in(path, ErrorKind::MissingArtifact);
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j = json::parse(buffer.str(), nullptr, false);
  if (j.is_discarded()) {
    raise(ErrorKind::ParseError, path + ": malformed scale report");
  }
  ScaleReport report;
  try {
    report.reference_camera = j.at("reference_camera").get<int>();
    for (const auto& c : j.at("cameras")) {
      report.cameras.push_back({c.at("id").get<int>(),
                                c.at("scale").get<double>(),
                                c.at("flagged").get<bool>()});
    }
    for (const auto& l : j.at("links")) {
      report.links.push_back({l.at("k").get<int>(), l.at("l").get<int>(),
                              l.at("ratio").get<double>(),
                              l.at("support").get<long>()});
    }
    for (const auto& c : j.at("cycle_residuals")) {
      report.cycle_residuals.push_back({c.at("k").get<int>(),
                                        c.at("l").get<int>(),
                                        c.at("residual").get<double>()});
    }
  } catch (const json::exception&) {
    raise(ErrorKind::ParseError, path + ": missing scale-report field");
  }
  return report;
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  auto in = open_in(path, ErrorKind::MissingArtifact);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_retrieval_curve_csv(const std::string& path,
                               const std::vector<RetrievalPoint>& curve) {
  std::string text =
      "range_s,achieved_range_time_s,achieved_range_dist_s,rate_time,"
      "rate_dist,rate_time_weighted,rate_dist_weighted\n";
  for (const auto& p : curve) {
    text += strf("%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                 p.target_range_s, p.achieved_range_time_s,
                 p.achieved_range_dist_s, p.rate_time_percent,
                 p.rate_dist_percent, p.rate_time_weighted_percent,
                 p.rate_dist_weighted_percent);
  }
  write_text_file(path, text);
}

void write_rank1_csv(const std::string& path, const EvalReport& report) {
  std::string text = "stage,range_s,rank1_percent,tp,t_gt\n";
  text += strf("stage1,,%.10g,%ld,%ld\n", report.stage1.percent,
               report.stage1.tp, report.stage1.t_gt);
  text += strf("final_time,,%.10g,%ld,%ld\n", report.final_time.percent,
               report.final_time.tp, report.final_time.t_gt);
  text += strf("final_dist,,%.10g,%ld,%ld\n", report.final_dist.percent,
               report.final_dist.tp, report.final_dist.t_gt);
  for (const auto& p : report.rank1_curve) {
    text += strf("curve_time,%.10g,%.10g,,\n", p.range_s,
                 p.rank1_time_percent);
    text += strf("curve_dist,%.10g,%.10g,,\n", p.range_s,
                 p.rank1_dist_percent);
  }
  write_text_file(path, text);
}

void write_link_stats_csv(const std::string& path,
                          const std::vector<LinkStats>& stats) {
  std::string text =
      "k,l,time_mean_s,time_std_s,dist_mean_m,dist_std_m,n_samples\n";
  for (const auto& s : stats) {
    text += strf("%d,%d,%.10g,%.10g,%.10g,%.10g,%ld\n", s.cam_k, s.cam_l,
                 s.time_mean, s.time_std, s.dist_mean, s.dist_std,
                 s.n_samples);
  }
  write_text_file(path, text);
}

}  // namespace camtopo
