#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "camtopo/sim.hpp"
#include "camtopo/topology.hpp"

namespace camtopo {

struct PipelineConfig {
  double sim_threshold = 0.7;        // reliable-pair and final-match gate
  double initial_threshold = 0.3;    // stage-1 acceptance
  double initial_half_window_s = 120.0;
  double coverage = 0.95;
  long min_support = 20;
  double bin_width_m = 2.0;
  double dist_support_min = -50.0;
  double dist_support_max = 200.0;
  double bin_width_s = 2.0;
  double time_support_min = -60.0;
  double time_support_max = 300.0;
  int reference_camera = -1;  // -1: lowest camera id
  std::vector<double> eval_ranges_s = {5, 10, 20, 40, 60};
  std::string topology_kind = "both";  // dist | time | both
  int threads = 0;                     // 0: hardware concurrency

  TopologyParams topology_params() const;
  void validate() const;
};

/// Flat key = value configuration file. Unknown keys are rejected so typos
/// fail loudly.
class KeyValueConfig {
 public:
  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  long get_long(const std::string& key, long dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& dflt) const;

  WorldConfig world_config() const;
  PipelineConfig pipeline_config() const;

  /// Canonical sorted key=value dump of every effective setting (explicit
  /// and defaulted); hashed into the run manifest.
  std::string resolved_text() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  void check_known_keys() const;
  std::map<std::string, std::string> values_;
};

}  // namespace camtopo
