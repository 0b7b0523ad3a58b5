#include "camtopo/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "camtopo/config.hpp"
#include "camtopo/io.hpp"
#include "camtopo/pipeline.hpp"
#include "camtopo/util.hpp"
#include "json.hpp"

namespace camtopo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig:
      return kExitConfigError;
    case ErrorKind::ParseError:
    case ErrorKind::NonMonotonicTimestamps:
    case ErrorKind::IoError:
    case ErrorKind::MissingArtifact:
      return kExitDataError;
    default:
      return kExitInternalError;
  }
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

KeyValueConfig load_config(const CommonOptions& opt) {
  KeyValueConfig cfg = opt.config_path.empty()
                           ? KeyValueConfig::from_string("")
                           : KeyValueConfig::from_file(opt.config_path);
  if (opt.seed) cfg.set("rng_seed", strf("%llu", (unsigned long long)*opt.seed));
  if (opt.coverage) cfg.set("coverage", strf("%.17g", *opt.coverage));
  if (opt.min_support) cfg.set("min_support", strf("%ld", *opt.min_support));
  if (opt.sim_threshold) {
    cfg.set("sim_threshold", strf("%.17g", *opt.sim_threshold));
  }
  if (opt.bin_width_m) cfg.set("bin_width_m", strf("%.17g", *opt.bin_width_m));
  if (opt.bin_width_s) cfg.set("bin_width_s", strf("%.17g", *opt.bin_width_s));
  if (opt.threads) cfg.set("threads", strf("%d", *opt.threads));
  if (opt.topology_kind) cfg.set("topology", *opt.topology_kind);
  if (opt.ranges) cfg.set("ranges", *opt.ranges);
  return cfg;
}

void ensure_out_dir(const std::string& out_dir) {
  if (out_dir.empty()) {
    raise(ErrorKind::InvalidConfig, "--out directory is required");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) raise(ErrorKind::IoError, "cannot create " + out_dir);
}

void require_in_dir(const CommonOptions& opt) {
  if (opt.in_dir.empty()) {
    raise(ErrorKind::InvalidConfig, "--in directory is required");
  }
}

std::string artifact(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const KeyValueConfig& cfg,
                    const std::map<std::string, double>& timings,
                    const std::vector<std::string>& artifact_names) {
  json j;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  const std::string resolved = cfg.resolved_text();
  j["config_hash"] = to_hex(fnv1a64(resolved));
  j["seed"] = cfg.get_long("rng_seed", 7);
  json t;  // informational; wall-clock, not part of the reproducible output
  for (const auto& [stage, ms] : timings) t[stage] = ms;
  j["timings_ms"] = std::move(t);
  json arts = json::array();
  for (const auto& name : artifact_names) {
    const std::string path = artifact(out_dir, name);
    if (!fs::exists(path)) {
      raise(ErrorKind::Internal, "manifest references missing " + path);
    }
    arts.push_back(name);
  }
  j["artifacts"] = std::move(arts);
  write_text_file(artifact(out_dir, "manifest.json"), j.dump(2) + "\n");
}

struct LoadedInputs {
  std::vector<CameraModel> cameras;
  TrackletSet tracklets;
  GroundTruth truth;
  bool has_truth = false;
};

LoadedInputs load_inputs(const std::string& in_dir, bool aligned_cameras) {
  LoadedInputs in;
  const std::string aligned = artifact(in_dir, "cameras_aligned.jsonl");
  const std::string raw = artifact(in_dir, "cameras.jsonl");
  const std::string cam_path =
      aligned_cameras && fs::exists(aligned) ? aligned : raw;
  if (!fs::exists(cam_path)) {
    raise(ErrorKind::MissingArtifact, "camera file not found in " + in_dir);
  }
  in.cameras = load_cameras(cam_path);
  for (int i = 0; i < static_cast<int>(in.cameras.size()); ++i) {
    if (in.cameras[static_cast<std::size_t>(i)].camera_id != i) {
      raise(ErrorKind::ParseError,
            cam_path + ": camera ids must be dense 0..n-1");
    }
  }

  const std::string tracklet_path = artifact(in_dir, "tracklets.jsonl");
  if (!fs::exists(tracklet_path)) {
    raise(ErrorKind::MissingArtifact, "tracklets.jsonl not found in " + in_dir);
  }
  IngestResult ingest = ingest_tracklets(tracklet_path);
  in.tracklets = std::move(ingest.tracklets);
  if (in.tracklets.n_cameras() < static_cast<int>(in.cameras.size())) {
    in.tracklets.by_camera.resize(in.cameras.size());
  }
  if (in.tracklets.n_cameras() > static_cast<int>(in.cameras.size())) {
    raise(ErrorKind::ParseError,
          tracklet_path + ": tracklet camera id outside camera file range");
  }

  const std::string truth_path = artifact(in_dir, "truth.json");
  if (fs::exists(truth_path)) {
    in.truth = load_ground_truth(truth_path);
    in.has_truth = true;
  }
  return in;
}

void write_eval_report(const std::string& out_dir, const EvalReport& report) {
  json j;
  auto rank = [](const Rank1Result& r) {
    return json{{"tp", r.tp}, {"t_gt", r.t_gt}, {"percent", r.percent}};
  };
  j["stage1"] = rank(report.stage1);
  j["final_dist"] = rank(report.final_dist);
  j["final_time"] = rank(report.final_time);
  json retrieval = json::array();
  for (const auto& p : report.retrieval) {
    retrieval.push_back({{"range_s", p.target_range_s},
                         {"achieved_time_s", p.achieved_range_time_s},
                         {"achieved_dist_s", p.achieved_range_dist_s},
                         {"rate_time", p.rate_time_percent},
                         {"rate_dist", p.rate_dist_percent}});
  }
  j["retrieval"] = std::move(retrieval);
  json curve = json::array();
  for (const auto& p : report.rank1_curve) {
    curve.push_back({{"range_s", p.range_s},
                     {"rank1_time", p.rank1_time_percent},
                     {"rank1_dist", p.rank1_dist_percent}});
  }
  j["rank1_curve"] = std::move(curve);
  json stats = json::array();
  for (const auto& s : report.per_link_stats) {
    stats.push_back({{"k", s.cam_k},
                     {"l", s.cam_l},
                     {"time_mean", s.time_mean},
                     {"time_std", s.time_std},
                     {"dist_mean", s.dist_mean},
                     {"dist_std", s.dist_std},
                     {"n_samples", s.n_samples}});
  }
  j["per_link_stats"] = std::move(stats);
  write_text_file(artifact(out_dir, "eval_report.json"), j.dump(2) + "\n");
}

}  // namespace

int cmd_simulate(const CommonOptions& opt) {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    KeyValueConfig cfg = load_config(opt);
    ensure_out_dir(opt.out_dir);
    const WorldConfig world_cfg = cfg.world_config();
    const World world = generate_world(world_cfg);

    save_cameras(artifact(opt.out_dir, "cameras.jsonl"), world.cameras);
    save_tracklets(artifact(opt.out_dir, "tracklets.jsonl"), world.tracklets);
    save_ground_truth(artifact(opt.out_dir, "truth.json"), world.truth);
    write_text_file(artifact(opt.out_dir, "config.resolved.cfg"),
                    cfg.resolved_text());

    std::map<std::string, double> timings;
    timings["simulate"] = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    write_manifest(opt.out_dir, "simulate", cfg, timings,
                   {"cameras.jsonl", "tracklets.jsonl", "truth.json",
                    "config.resolved.cfg"});
    std::cout << strf("simulate: %d cameras, %zu tracklets, %zu truth pairs\n",
                      world_cfg.n_cameras, world.tracklets.total(),
                      world.truth.pairs.size());
    return kExitOk;
  });
}

int cmd_align(const CommonOptions& opt) {
  return guarded([&] {
    KeyValueConfig cfg = load_config(opt);
    require_in_dir(opt);
    ensure_out_dir(opt.out_dir);
    const PipelineConfig pipe = cfg.pipeline_config();
    LoadedInputs in = load_inputs(opt.in_dir, false);

    auto pooled = pool_all(in.tracklets, in.cameras, pipe.threads);
    auto stage1 = initial_reid(pooled, pipe);
    auto aligned = align_scales(in.tracklets, in.cameras, stage1, pipe);

    save_correspondences(artifact(opt.out_dir, "stage1_correspondences.jsonl"),
                         stage1);
    save_scale_report(artifact(opt.out_dir, "scale_report.json"),
                      aligned.report);
    save_cameras(artifact(opt.out_dir, "cameras_aligned.jsonl"),
                 aligned.cameras);
    write_manifest(opt.out_dir, "align", cfg, {},
                   {"stage1_correspondences.jsonl", "scale_report.json",
                    "cameras_aligned.jsonl"});
    return kExitOk;
  });
}

int cmd_topology(const CommonOptions& opt) {
  return guarded([&] {
    KeyValueConfig cfg = load_config(opt);
    require_in_dir(opt);
    ensure_out_dir(opt.out_dir);
    const PipelineConfig pipe = cfg.pipeline_config();
    LoadedInputs in = load_inputs(opt.in_dir, true);
    auto stage1 = load_correspondences(
        artifact(opt.in_dir, "stage1_correspondences.jsonl"));

    auto pooled = pool_all(in.tracklets, in.cameras, pipe.threads);
    const Topology topo = infer_topology(pooled, stage1, pipe);
    save_topology(artifact(opt.out_dir, "topology.jsonl"), topo);
    write_manifest(opt.out_dir, "topology", cfg, {}, {"topology.jsonl"});
    std::cout << strf("topology: %zu valid links, %zu below support\n",
                      topo.edges.size(), topo.invalid_links.size());
    return kExitOk;
  });
}

int cmd_reid(const CommonOptions& opt) {
  return guarded([&] {
    KeyValueConfig cfg = load_config(opt);
    require_in_dir(opt);
    ensure_out_dir(opt.out_dir);
    const PipelineConfig pipe = cfg.pipeline_config();
    LoadedInputs in = load_inputs(opt.in_dir, true);
    const Topology topo =
        load_topology(artifact(opt.in_dir, "topology.jsonl"));

    auto pooled = pool_all(in.tracklets, in.cameras, pipe.threads);
    std::vector<std::string> artifacts;
    if (pipe.topology_kind != "time") {
      save_correspondences(
          artifact(opt.out_dir, "final_dist.jsonl"),
          restricted_matching(pooled, topo, DistributionKind::Distance, pipe));
      artifacts.push_back("final_dist.jsonl");
    }
    if (pipe.topology_kind != "dist") {
      save_correspondences(
          artifact(opt.out_dir, "final_time.jsonl"),
          restricted_matching(pooled, topo, DistributionKind::Time, pipe));
      artifacts.push_back("final_time.jsonl");
    }
    write_manifest(opt.out_dir, "reid", cfg, {}, artifacts);
    return kExitOk;
  });
}

int cmd_evaluate(const CommonOptions& opt) {
  return guarded([&] {
    KeyValueConfig cfg = load_config(opt);
    require_in_dir(opt);
    ensure_out_dir(opt.out_dir);
    const PipelineConfig pipe = cfg.pipeline_config();
    LoadedInputs in = load_inputs(opt.in_dir, true);
    if (!in.has_truth) {
      raise(ErrorKind::MissingArtifact, "truth.json required for evaluation");
    }
    const Topology topo =
        load_topology(artifact(opt.in_dir, "topology.jsonl"));

    auto pooled = pool_all(in.tracklets, in.cameras, pipe.threads);
    const auto resolved = resolve_transitions(in.truth, in.tracklets);

    EvalReport report;
    const std::string stage1_path =
        artifact(opt.in_dir, "stage1_correspondences.jsonl");
    if (fs::exists(stage1_path)) {
      report.stage1 = rank1(load_correspondences(stage1_path), resolved);
    }
    const std::string dist_path = artifact(opt.in_dir, "final_dist.jsonl");
    if (fs::exists(dist_path)) {
      report.final_dist = rank1(load_correspondences(dist_path), resolved);
    }
    const std::string time_path = artifact(opt.in_dir, "final_time.jsonl");
    if (fs::exists(time_path)) {
      report.final_time = rank1(load_correspondences(time_path), resolved);
    }

    EvalInputs inputs;
    inputs.topology = &topo;
    inputs.tracklets = &in.tracklets;
    inputs.pooled = &pooled;
    inputs.truth = &resolved;
    report.retrieval = retrieval_curve(inputs, pipe.eval_ranges_s);
    for (double range : pipe.eval_ranges_s) {
      EvalReport::Rank1Point point;
      point.range_s = range;
      point.rank1_time_percent =
          restricted_reid(inputs, DistributionKind::Time, range, pipe.coverage,
                          pipe.initial_threshold)
              .rank1.percent;
      point.rank1_dist_percent =
          restricted_reid(inputs, DistributionKind::Distance, range,
                          pipe.coverage, pipe.initial_threshold)
              .rank1.percent;
      report.rank1_curve.push_back(point);
    }
    report.per_link_stats = distribution_stats(topo);

    write_eval_report(opt.out_dir, report);
    write_retrieval_curve_csv(artifact(opt.out_dir, "retrieval_curve.csv"),
                              report.retrieval);
    write_rank1_csv(artifact(opt.out_dir, "rank1.csv"), report);
    write_link_stats_csv(artifact(opt.out_dir, "link_stats.csv"),
                         report.per_link_stats);
    write_manifest(opt.out_dir, "evaluate", cfg, {},
                   {"eval_report.json", "retrieval_curve.csv", "rank1.csv",
                    "link_stats.csv"});
    return kExitOk;
  });
}

int cmd_pipeline(const CommonOptions& opt) {
  return guarded([&] {
    KeyValueConfig cfg = load_config(opt);
    if (opt.in_dir.empty()) {
      raise(ErrorKind::InvalidConfig, "--in directory is required");
    }
    ensure_out_dir(opt.out_dir);
    const PipelineConfig pipe = cfg.pipeline_config();
    LoadedInputs in = load_inputs(opt.in_dir, false);

    PipelineResult result = run_pipeline(
        in.tracklets, in.cameras, pipe, in.has_truth ? &in.truth : nullptr);

    save_cameras(artifact(opt.out_dir, "cameras_aligned.jsonl"),
                 result.cameras_aligned);
    save_scale_report(artifact(opt.out_dir, "scale_report.json"),
                      result.scale_report);
    save_correspondences(artifact(opt.out_dir, "stage1_correspondences.jsonl"),
                         result.stage1);
    save_topology(artifact(opt.out_dir, "topology.jsonl"), result.topology);
    write_text_file(artifact(opt.out_dir, "config.resolved.cfg"),
                    cfg.resolved_text());

    std::vector<std::string> artifacts = {
        "cameras_aligned.jsonl", "scale_report.json",
        "stage1_correspondences.jsonl", "topology.jsonl",
        "config.resolved.cfg"};
    if (pipe.topology_kind != "time") {
      save_correspondences(artifact(opt.out_dir, "final_dist.jsonl"),
                           result.final_dist);
      artifacts.push_back("final_dist.jsonl");
    }
    if (pipe.topology_kind != "dist") {
      save_correspondences(artifact(opt.out_dir, "final_time.jsonl"),
                           result.final_time);
      artifacts.push_back("final_time.jsonl");
    }
    if (in.has_truth) {
      write_eval_report(opt.out_dir, result.report);
      write_retrieval_curve_csv(artifact(opt.out_dir, "retrieval_curve.csv"),
                                result.report.retrieval);
      write_rank1_csv(artifact(opt.out_dir, "rank1.csv"), result.report);
      write_link_stats_csv(artifact(opt.out_dir, "link_stats.csv"),
                           result.report.per_link_stats);
      artifacts.insert(artifacts.end(),
                       {"eval_report.json", "retrieval_curve.csv", "rank1.csv",
                        "link_stats.csv"});
      std::cout << strf(
          "pipeline: stage1 rank-1 %.1f%%, final dist %.1f%%, final time "
          "%.1f%%\n",
          result.report.stage1.percent, result.report.final_dist.percent,
          result.report.final_time.percent);
    }
    write_manifest(opt.out_dir, "pipeline", cfg, result.timings_ms, artifacts);
    return kExitOk;
  });
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Distance-based camera network topology inference for person "
               "re-identification"};
  app.require_subcommand(1);

  CommonOptions opt;
  auto add_common = [&](CLI::App* sub, bool needs_in, bool needs_out) {
    sub->add_option("--config", opt.config_path, "key = value config file");
    if (needs_in) sub->add_option("--in", opt.in_dir, "input artifact dir");
    if (needs_out) sub->add_option("--out", opt.out_dir, "output dir");
    sub->add_option("--seed", opt.seed, "override rng_seed");
    sub->add_option("--threads", opt.threads, "worker threads (0 = cores)");
    sub->add_option("--coverage", opt.coverage, "window coverage fraction");
    sub->add_option("--min-support", opt.min_support,
                    "reliable pairs needed per link");
    sub->add_option("--sim-threshold", opt.sim_threshold,
                    "reliable-correspondence similarity threshold");
    sub->add_option("--bin-width-m", opt.bin_width_m,
                    "distance histogram bin width");
    sub->add_option("--bin-width-s", opt.bin_width_s,
                    "time histogram bin width");
    sub->add_option("--topology", opt.topology_kind,
                    "final re-id kind: dist, time, or both");
    sub->add_option("--ranges", opt.ranges,
                    "evaluation search ranges, seconds (comma separated)");
  };

  auto* sim = app.add_subcommand("simulate", "generate a synthetic world");
  add_common(sim, false, true);
  auto* align = app.add_subcommand("align", "initial re-id + scale alignment");
  add_common(align, true, true);
  auto* topo = app.add_subcommand("topology", "build the topology graphs");
  add_common(topo, true, true);
  auto* reid = app.add_subcommand("reid", "topology-restricted re-id");
  add_common(reid, true, true);
  auto* eval = app.add_subcommand("evaluate", "metrics and plot data");
  add_common(eval, true, true);
  auto* pipe = app.add_subcommand("pipeline", "run every stage end to end");
  add_common(pipe, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  if (sim->parsed()) return cmd_simulate(opt);
  if (align->parsed()) return cmd_align(opt);
  if (topo->parsed()) return cmd_topology(opt);
  if (reid->parsed()) return cmd_reid(opt);
  if (eval->parsed()) return cmd_evaluate(opt);
  if (pipe->parsed()) return cmd_pipeline(opt);
  return kExitConfigError;
}

}  // namespace camtopo::cli
