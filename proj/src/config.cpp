#include "camtopo/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "camtopo/util.hpp"

namespace camtopo {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      // world
      "n_cameras", "links", "fov_w", "fov_h", "frame_rate", "n_persons",
      "speed_min", "speed_max", "height_mean", "height_std", "feature_dim",
      "feature_noise_std", "height_noise_std", "scale_errors", "speed_jitter",
      "n_transitions", "start_window_s", "image_width", "image_height",
      "rng_seed",
      // pipeline
      "sim_threshold", "initial_threshold", "initial_half_window_s",
      "coverage", "min_support", "bin_width_m", "bin_width_s", "dist_support",
      "time_support", "reference_camera", "ranges", "topology", "threads"};
  return keys;
}

std::vector<LinkSpec> parse_links(const std::string& text) {
  // "0-1:46, 1-2:52" -> {{0,1,46},{1,2,52}}
  std::vector<LinkSpec> links;
  for (const auto& token : split_tokens(text, ",; ")) {
    const auto dash = token.find('-');
    const auto colon = token.find(':');
    if (dash == std::string::npos || colon == std::string::npos ||
        colon < dash) {
      raise(ErrorKind::InvalidConfig, "links: expected a-b:length, got " +
                                          token);
    }
    try {
      LinkSpec link;
      link.cam_a = std::stoi(token.substr(0, dash));
      link.cam_b = std::stoi(token.substr(dash + 1, colon - dash - 1));
      link.path_length_m = std::stod(token.substr(colon + 1));
      links.push_back(link);
    } catch (const std::exception&) {
      raise(ErrorKind::InvalidConfig, "links: cannot parse " + token);
    }
  }
  return links;
}

}  // namespace

TopologyParams PipelineConfig::topology_params() const {
  TopologyParams p;
  p.sim_threshold = sim_threshold;
  p.min_support = min_support;
  p.bin_width_m = bin_width_m;
  p.dist_support_min = dist_support_min;
  p.dist_support_max = dist_support_max;
  p.bin_width_s = bin_width_s;
  p.time_support_min = time_support_min;
  p.time_support_max = time_support_max;
  return p;
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& detail) {
    raise(ErrorKind::InvalidConfig, field + ": " + detail);
  };
  if (sim_threshold < 0.0 || sim_threshold > 1.0) {
    fail("sim_threshold", "must be in [0, 1]");
  }
  if (initial_threshold < 0.0 || initial_threshold > 1.0) {
    fail("initial_threshold", "must be in [0, 1]");
  }
  if (!(initial_half_window_s > 0.0)) {
    fail("initial_half_window_s", "must be positive");
  }
  if (!(coverage > 0.0) || coverage > 1.0) {
    fail("coverage", "must be in (0, 1]");
  }
  if (min_support < 1) fail("min_support", "must be at least 1");
  if (!(bin_width_m > 0.0)) fail("bin_width_m", "must be positive");
  if (!(bin_width_s > 0.0)) fail("bin_width_s", "must be positive");
  if (dist_support_max <= dist_support_min) {
    fail("dist_support", "max must exceed min");
  }
  if (time_support_max <= time_support_min) {
    fail("time_support", "max must exceed min");
  }
  if (topology_kind != "dist" && topology_kind != "time" &&
      topology_kind != "both") {
    fail("topology", "must be dist, time, or both");
  }
  for (double r : eval_ranges_s) {
    if (!(r > 0.0)) fail("ranges", "entries must be positive");
  }
  if (threads < 0) fail("threads", "must be non-negative");
}

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot read config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      raise(ErrorKind::InvalidConfig,
            strf("config line %ld: expected key = value", lineno));
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      raise(ErrorKind::InvalidConfig, strf("config line %ld: empty key",
                                           lineno));
    }
    cfg.values_[key] = value;
  }
  cfg.check_known_keys();
  return cfg;
}

void KeyValueConfig::check_known_keys() const {
  for (const auto& [key, value] : values_) {
    if (!known_keys().count(key)) {
      raise(ErrorKind::InvalidConfig, "unknown config key: " + key);
    }
  }
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) > 0;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  if (!known_keys().count(key)) {
    raise(ErrorKind::InvalidConfig, "unknown config key: " + key);
  }
  values_[key] = value;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& dflt) const {
  const auto it = values_.find(key);
  return it == values_.end() ? dflt : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double dflt) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    raise(ErrorKind::InvalidConfig, key + ": not a number: " + it->second);
  }
}

long KeyValueConfig::get_long(const std::string& key, long dflt) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  try {
    return std::stol(it->second);
  } catch (const std::exception&) {
    raise(ErrorKind::InvalidConfig, key + ": not an integer: " + it->second);
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool dflt) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  raise(ErrorKind::InvalidConfig, key + ": not a boolean: " + v);
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key, const std::vector<double>& dflt) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  std::vector<double> out;
  for (const auto& token : split_tokens(it->second, ", ")) {
    try {
      out.push_back(std::stod(token));
    } catch (const std::exception&) {
      raise(ErrorKind::InvalidConfig, key + ": not a number: " + token);
    }
  }
  return out;
}

WorldConfig KeyValueConfig::world_config() const {
  const WorldConfig defaults = default_world_config();
  WorldConfig cfg;
  cfg.n_cameras = static_cast<int>(get_long("n_cameras", defaults.n_cameras));
  if (has("links")) {
    cfg.links = parse_links(values_.at("links"));
  } else if (cfg.n_cameras == defaults.n_cameras) {
    cfg.links = defaults.links;
  } else {
    // chain the cameras with the default 46 m corridor
    for (int i = 0; i + 1 < cfg.n_cameras; ++i) {
      cfg.links.push_back({i, i + 1, 46.0});
    }
  }
  cfg.frame_rate = get_double("frame_rate", defaults.frame_rate);
  cfg.n_persons = static_cast<int>(get_long("n_persons", defaults.n_persons));
  cfg.speed_min = get_double("speed_min", defaults.speed_min);
  cfg.speed_max = get_double("speed_max", defaults.speed_max);
  cfg.height_mean = get_double("height_mean", defaults.height_mean);
  cfg.height_std = get_double("height_std", defaults.height_std);
  cfg.feature_dim =
      static_cast<int>(get_long("feature_dim", defaults.feature_dim));
  cfg.feature_noise_std =
      get_double("feature_noise_std", defaults.feature_noise_std);
  cfg.height_noise_std =
      get_double("height_noise_std", defaults.height_noise_std);
  cfg.camera_scale_errors = get_double_list("scale_errors", {});
  cfg.speed_jitter = get_bool("speed_jitter", defaults.speed_jitter);
  cfg.n_transitions =
      static_cast<int>(get_long("n_transitions", defaults.n_transitions));
  cfg.start_window_s = get_double("start_window_s", defaults.start_window_s);
  cfg.image_width =
      static_cast<int>(get_long("image_width", defaults.image_width));
  cfg.image_height =
      static_cast<int>(get_long("image_height", defaults.image_height));
  cfg.rng_seed = static_cast<std::uint64_t>(
      get_long("rng_seed", static_cast<long>(defaults.rng_seed)));

  layout_footprints(cfg, get_double("fov_w", 12.0), get_double("fov_h", 6.0));
  if (cfg.camera_scale_errors.empty()) {
    cfg.camera_scale_errors.assign(static_cast<std::size_t>(cfg.n_cameras),
                                   1.0);
  }
  cfg.validate();
  return cfg;
}

PipelineConfig KeyValueConfig::pipeline_config() const {
  PipelineConfig cfg;
  cfg.sim_threshold = get_double("sim_threshold", cfg.sim_threshold);
  cfg.initial_threshold = get_double("initial_threshold", cfg.initial_threshold);
  cfg.initial_half_window_s =
      get_double("initial_half_window_s", cfg.initial_half_window_s);
  cfg.coverage = get_double("coverage", cfg.coverage);
  cfg.min_support = get_long("min_support", cfg.min_support);
  cfg.bin_width_m = get_double("bin_width_m", cfg.bin_width_m);
  cfg.bin_width_s = get_double("bin_width_s", cfg.bin_width_s);
  const auto dist_support = get_double_list(
      "dist_support", {cfg.dist_support_min, cfg.dist_support_max});
  const auto time_support = get_double_list(
      "time_support", {cfg.time_support_min, cfg.time_support_max});
  if (dist_support.size() != 2 || time_support.size() != 2) {
    raise(ErrorKind::InvalidConfig, "supports need exactly two values");
  }
  cfg.dist_support_min = dist_support[0];
  cfg.dist_support_max = dist_support[1];
  cfg.time_support_min = time_support[0];
  cfg.time_support_max = time_support[1];
  cfg.reference_camera = static_cast<int>(
      get_long("reference_camera", cfg.reference_camera));
  cfg.eval_ranges_s = get_double_list("ranges", cfg.eval_ranges_s);
  cfg.topology_kind = get_string("topology", cfg.topology_kind);
  cfg.threads = static_cast<int>(get_long("threads", cfg.threads));
  cfg.validate();
  return cfg;
}

std::string KeyValueConfig::resolved_text() const {
  // Every effective setting, explicit or defaulted, one key per line.
  const WorldConfig world = world_config();
  const PipelineConfig pipe = pipeline_config();

  std::string links;
  for (const auto& link : world.links) {
    if (!links.empty()) links += ",";
    links += strf("%d-%d:%.10g", link.cam_a, link.cam_b, link.path_length_m);
  }
  std::string errors;
  for (double e : world.camera_scale_errors) {
    if (!errors.empty()) errors += ",";
    errors += strf("%.10g", e);
  }
  std::string ranges;
  for (double r : pipe.eval_ranges_s) {
    if (!ranges.empty()) ranges += ",";
    ranges += strf("%.10g", r);
  }

  std::string out;
  out += strf("bin_width_m = %.10g\n", pipe.bin_width_m);
  out += strf("bin_width_s = %.10g\n", pipe.bin_width_s);
  out += strf("coverage = %.10g\n", pipe.coverage);
  out += strf("dist_support = %.10g %.10g\n", pipe.dist_support_min,
              pipe.dist_support_max);
  out += strf("feature_dim = %d\n", world.feature_dim);
  out += strf("feature_noise_std = %.10g\n", world.feature_noise_std);
  out += strf("fov_h = %.10g\n", get_double("fov_h", 6.0));
  out += strf("fov_w = %.10g\n", get_double("fov_w", 12.0));
  out += strf("frame_rate = %.10g\n", world.frame_rate);
  out += strf("height_mean = %.10g\n", world.height_mean);
  out += strf("height_noise_std = %.10g\n", world.height_noise_std);
  out += strf("height_std = %.10g\n", world.height_std);
  out += strf("image_height = %d\n", world.image_height);
  out += strf("image_width = %d\n", world.image_width);
  out += strf("initial_half_window_s = %.10g\n", pipe.initial_half_window_s);
  out += strf("initial_threshold = %.10g\n", pipe.initial_threshold);
  out += strf("links = %s\n", links.c_str());
  out += strf("min_support = %ld\n", pipe.min_support);
  out += strf("n_cameras = %d\n", world.n_cameras);
  out += strf("n_persons = %d\n", world.n_persons);
  out += strf("n_transitions = %d\n", world.n_transitions);
  out += strf("ranges = %s\n", ranges.c_str());
  out += strf("reference_camera = %d\n", pipe.reference_camera);
  out += strf("rng_seed = %llu\n",
              static_cast<unsigned long long>(world.rng_seed));
  out += strf("scale_errors = %s\n", errors.c_str());
  out += strf("sim_threshold = %.10g\n", pipe.sim_threshold);
  out += strf("speed_jitter = %d\n", world.speed_jitter ? 1 : 0);
  out += strf("speed_max = %.10g\n", world.speed_max);
  out += strf("speed_min = %.10g\n", world.speed_min);
  out += strf("start_window_s = %.10g\n", world.start_window_s);
  out += strf("threads = %d\n", pipe.threads);
  out += strf("time_support = %.10g %.10g\n", pipe.time_support_min,
              pipe.time_support_max);
  out += strf("topology = %s\n", pipe.topology_kind.c_str());
  return out;
}

}  // namespace camtopo
