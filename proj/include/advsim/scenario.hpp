#pragma once

#include <cstdint>
#include <string>

#include "advsim/camera.hpp"
#include "advsim/perception.hpp"
#include "advsim/planning.hpp"
#include "advsim/tracking.hpp"
#include "advsim/units.hpp"
#include "advsim/vehicle.hpp"

namespace advsim {

enum class Goal { stop_line_violation, pedestrian_collision };

/// One reproducible experiment definition: geometry, plant, tracker,
/// perception profile and trial bookkeeping.
struct ScenarioConfig {
  std::string id = "scenario";
  ObjectSpec object;
  CameraModel camera;
  VehiclePlant plant;
  TrackerParams tracker;
  DetectionProfile profile;

  double speed_limit_mps = mph_to_mps(35.0);
  double road_length_m = 45.0;        // D0: nominal sensing horizon
  double init_band_lo_m = 46.0;       // random start distance from the stop line
  double init_band_hi_m = 55.0;
  Goal goal = Goal::stop_line_violation;
  int trials = 100;
  std::uint64_t base_seed = 1;

  double detection_noise_std_m = 0.5;
  double stop_line_offset_m = 0.0;
  double stop_standoff_m = 0.25;
  double stop_speed_threshold_mps = 0.5;  // crossing slower than this is a stop
  double oos_latch_margin_m = 1.0;
  bool latch_stop = false;

  PidGains pid;
  double stanley_gain = 2.5;
  double d_max_threshold = 0.05;

  /// Consistency checks that do not need the profile (pre-run).
  void validate() const;
  /// Checks involving the loaded profile (sensing horizon vs road length).
  void validate_with_profile() const;

  PlannerParams planner_params() const;
};

/// Flat key = value scenario file ('#' comments). Unknown keys are errors so
/// fixtures cannot silently drift. The detection profile is loaded separately.
ScenarioConfig load_scenario_file(const std::string& path);
ScenarioConfig parse_scenario(std::istream& in, const std::string& id);

const char* to_string(Goal goal);
Goal goal_from_string(const std::string& name);

}  // namespace advsim
