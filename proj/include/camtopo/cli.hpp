#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace camtopo::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitInternalError = 4;

struct CommonOptions {
  std::string config_path;              // optional key=value file
  std::string out_dir;
  std::string in_dir;
  std::optional<std::uint64_t> seed;    // overrides rng_seed
  std::optional<double> coverage;
  std::optional<long> min_support;
  std::optional<double> sim_threshold;
  std::optional<double> bin_width_m;
  std::optional<double> bin_width_s;
  std::optional<int> threads;
  std::optional<std::string> topology_kind;  // dist | time | both
  std::optional<std::string> ranges;         // "5,10,20" seconds
};

int cmd_simulate(const CommonOptions& opt);
int cmd_align(const CommonOptions& opt);
int cmd_topology(const CommonOptions& opt);
int cmd_reid(const CommonOptions& opt);
int cmd_evaluate(const CommonOptions& opt);
int cmd_pipeline(const CommonOptions& opt);

/// CLI11 front end; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace camtopo::cli
