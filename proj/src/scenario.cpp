#include "advsim/scenario.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "advsim/errors.hpp"
#include "advsim/units.hpp"

namespace advsim {

void ScenarioConfig::validate() const {
  object.validate();
  camera.validate();
  plant.validate();
  tracker.validate();
  if (std::abs(plant.oos_distance_m - camera.oos_distance_m) > 1e-9)
    throw ParseError("scenario '" + id + "': plant and camera oos_distance_m must agree");
  if (speed_limit_mps <= 0.0) throw ParseError("scenario '" + id + "': speed limit must be > 0");
  if (trials < 1) throw ParseError("scenario '" + id + "': trials must be >= 1");
  if (init_band_lo_m < 0.0 || init_band_hi_m < init_band_lo_m)
    throw ParseError("scenario '" + id + "': bad init band");
  if (road_length_m <= camera.oos_distance_m)
    throw ParseError("scenario '" + id + "': road length must exceed oos distance");
  if (detection_noise_std_m < 0.0)
    throw ParseError("scenario '" + id + "': detection noise must be >= 0");
  if (stop_speed_threshold_mps < 0.0)
    throw ParseError("scenario '" + id + "': stop speed threshold must be >= 0");
}

void ScenarioConfig::validate_with_profile() const {
  validate();
  profile.validate();
  if (!profile.ranges.empty() && road_length_m < profile.ranges.back().hi_m - 1e-9)
    throw ParseError("scenario '" + id + "': road_length_m shorter than the profile horizon");
}

PlannerParams ScenarioConfig::planner_params() const {
  PlannerParams p;
  p.speed_limit_mps = speed_limit_mps;
  p.plan_decel_mps2 = plant.comfort_decel_mps2;
  p.oos_distance_m = camera.oos_distance_m;
  p.oos_latch_margin_m = oos_latch_margin_m;
  p.stop_line_offset_m = stop_line_offset_m;
  p.stop_standoff_m = stop_standoff_m;
  p.latch_stop = latch_stop;
  return p;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("scenario key '" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace

ScenarioConfig parse_scenario(std::istream& in, const std::string& id) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "scenario line " << line_no << ": expected key = value";
      throw ParseError(msg.str());
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty() || value.empty()) {
      std::ostringstream msg;
      msg << "scenario line " << line_no << ": empty key or value";
      throw ParseError(msg.str());
    }
    if (!kv.emplace(key, value).second)
      throw ParseError("scenario: duplicate key '" + key + "'");
  }

  ScenarioConfig cfg;
  cfg.id = id;

  const auto number = [&](const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      kv.erase(it);
      return v;
    } catch (const std::exception&) {
      throw ParseError("scenario key '" + key + "': bad number '" + it->second + "'");
    }
  };
  const auto text = [&](const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const std::string v = it->second;
    kv.erase(it);
    return v;
  };

  cfg.object.kind = object_kind_from_string(text("object_kind", "stop_sign"));
  cfg.object.physical_size_m = number("object_size_m", cfg.object.physical_size_m);
  cfg.object.lateral_offset_m = number("lateral_offset_m", cfg.object.lateral_offset_m);

  cfg.camera.focal_length_px = number("focal_length_px", cfg.camera.focal_length_px);
  cfg.camera.capture_rate_hz = number("capture_rate_hz", cfg.camera.capture_rate_hz);
  cfg.camera.oos_distance_m = number("oos_distance_m", cfg.camera.oos_distance_m);

  cfg.plant.max_decel_mps2 = number("max_decel_mps2", cfg.plant.max_decel_mps2);
  cfg.plant.comfort_decel_mps2 = number("comfort_decel_mps2", cfg.plant.comfort_decel_mps2);
  cfg.plant.max_accel_mps2 = number("max_accel_mps2", cfg.plant.max_accel_mps2);
  cfg.plant.wheelbase_m = number("wheelbase_m", cfg.plant.wheelbase_m);
  cfg.plant.max_steer_rad = number("max_steer_rad", cfg.plant.max_steer_rad);
  cfg.plant.oos_distance_m = cfg.camera.oos_distance_m;

  cfg.tracker.hits_to_confirm = static_cast<int>(number("hits_to_confirm", 4));
  cfg.tracker.misses_to_delete = static_cast<int>(number("misses_to_delete", 6));
  cfg.tracker.process_noise_std = number("process_noise_std", cfg.tracker.process_noise_std);
  cfg.tracker.measurement_noise_std_m =
      number("measurement_noise_std_m", cfg.tracker.measurement_noise_std_m);
  cfg.tracker.gate_sigma = number("gate_sigma", cfg.tracker.gate_sigma);

  if (kv.count("speed_limit_mph") && kv.count("speed_limit_mps"))
    throw ParseError("scenario: give speed_limit_mph or speed_limit_mps, not both");
  if (kv.count("speed_limit_mph"))
    cfg.speed_limit_mps = mph_to_mps(number("speed_limit_mph", 0.0));
  else
    cfg.speed_limit_mps = number("speed_limit_mps", cfg.speed_limit_mps);

  cfg.road_length_m = number("road_length_m", cfg.road_length_m);
  cfg.init_band_lo_m = number("init_band_lo_m", cfg.init_band_lo_m);
  cfg.init_band_hi_m = number("init_band_hi_m", cfg.init_band_hi_m);
  cfg.goal = goal_from_string(text("goal", "stop_line_violation"));
  cfg.trials = static_cast<int>(number("trials", cfg.trials));
  cfg.base_seed = static_cast<std::uint64_t>(number("base_seed", 1));

  cfg.detection_noise_std_m = number("detection_noise_std_m", cfg.detection_noise_std_m);
  cfg.stop_line_offset_m = number("stop_line_offset_m", cfg.stop_line_offset_m);
  cfg.stop_standoff_m = number("stop_standoff_m", cfg.stop_standoff_m);
  cfg.stop_speed_threshold_mps =
      number("stop_speed_threshold_mps", cfg.stop_speed_threshold_mps);
  cfg.oos_latch_margin_m = number("oos_latch_margin_m", cfg.oos_latch_margin_m);
  if (kv.count("latch_stop")) cfg.latch_stop = parse_bool(text("latch_stop", "false"), "latch_stop");

  cfg.pid.kp = number("pid_kp", cfg.pid.kp);
  cfg.pid.ki = number("pid_ki", cfg.pid.ki);
  cfg.pid.kd = number("pid_kd", cfg.pid.kd);
  cfg.pid.integral_limit = number("pid_integral_limit", cfg.pid.integral_limit);
  cfg.stanley_gain = number("stanley_gain", cfg.stanley_gain);
  cfg.d_max_threshold = number("d_max_threshold", cfg.d_max_threshold);

  if (!kv.empty()) throw ParseError("scenario: unknown key '" + kv.begin()->first + "'");

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::string stem = path;
  const auto slash = stem.find_last_of("/\\");
  if (slash != std::string::npos) stem = stem.substr(slash + 1);
  const auto dot = stem.find_last_of('.');
  if (dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_scenario(in, stem);
}

const char* to_string(Goal goal) {
  return goal == Goal::stop_line_violation ? "stop_line_violation" : "pedestrian_collision";
}

Goal goal_from_string(const std::string& name) {
  if (name == "stop_line_violation") return Goal::stop_line_violation;
  if (name == "pedestrian_collision") return Goal::pedestrian_collision;
  throw ParseError("unknown goal: " + name);
}

}  // namespace advsim
