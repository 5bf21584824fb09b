#pragma once

#include <optional>

#include "advsim/planning.hpp"

namespace advsim {

enum class PlannerMode { cruise, stopping, stopped };

struct PlannerState {
  PlannerMode mode = PlannerMode::cruise;
  double stop_target_m = 0.0;     // along-road position of the stop point
  double target_speed_mps = 0.0;
  bool latched = false;  // stop obligation retained after track loss
};

struct EgoState {
  double position_m = 0.0;  // along-road
  double speed_mps = 0.0;
  double accel_mps2 = 0.0;
  double lateral_offset_m = 0.0;
  double heading_error_rad = 0.0;
};

struct PidGains {
  double kp = 1.5;
  double ki = 0.2;
  double kd = 0.0;
  double integral_limit = 2.0;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool has_prev = false;
};

/// Everything the stop/cruise decision needs besides the track itself.
struct PlannerParams {
  double speed_limit_mps = 15.6464;
  double plan_decel_mps2 = 3.4;    // comfort deceleration for the stop profile
  double oos_distance_m = 4.0;
  double oos_latch_margin_m = 1.0;
  double stop_line_offset_m = 0.0;  // stop line relative to the object
  double stop_standoff_m = 0.25;    // aim this far before the line
  bool latch_stop = false;          // keep the obligation forever once seen
};

/// Cruise/stop decision. A confirmed track opens (and keeps refreshing) a stop
/// target at the line; losing the track reverts to cruise unless the
/// obligation is latched -- either by the latch_stop flag or because the
/// object already left the image near the line (distance <= d_oos + margin),
/// where track deletion is expected and not evidence the object vanished.
PlannerState plan(bool tracked, std::optional<double> track_distance_m, const EgoState& ego,
                  const PlannerParams& params, const PlannerState& prev);

/// Planner feedforward: comfort deceleration while the stop profile is the
/// binding constraint, zero while cruising.
double plan_feedforward_accel(const PlannerState& state, const EgoState& ego,
                              const PlannerParams& params);

/// PID on speed error with anti-windup, output clamped to [out_min, out_max].
double pid_step(const PidGains& gains, double target_mps, double current_mps, double dt,
                PidState& state, double out_min, double out_max);

/// Stanley steering: delta = heading error + atan(k * e / v), speed floored at
/// 0.1 m/s, clamped to |max_steer|.
double stanley_step(double heading_error_rad, double cross_track_error_m, double speed_mps,
                    double gain_k, double max_steer_rad);

/// Longitudinal + lateral kinematic integration over one step. Acceleration is
/// clamped to plant limits and integrated exactly (trapezoidal in v, with the
/// stop instant resolved inside the step), so full-brake travel matches the
/// closed-form brake distance. Stopped vehicles stay stopped under negative
/// commands.
EgoState plant_step(const EgoState& ego, double accel_command_mps2, double steer_rad, double dt,
                    const VehiclePlant& plant);

}  // namespace advsim
