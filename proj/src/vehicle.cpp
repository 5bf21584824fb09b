#include "advsim/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace advsim {

PlannerState plan(bool tracked, std::optional<double> track_distance_m, const EgoState& ego,
                  const PlannerParams& params, const PlannerState& prev) {
  PlannerState next = prev;

  if (prev.mode == PlannerMode::stopped) {
    next.target_speed_mps = 0.0;
    return next;
  }

  if (tracked && track_distance_m) {
    next.mode = PlannerMode::stopping;
    next.stop_target_m = ego.position_m + *track_distance_m + params.stop_line_offset_m;
    if (params.latch_stop) next.latched = true;
  } else if (prev.mode == PlannerMode::stopping) {
    const double remaining = prev.stop_target_m - ego.position_m;
    // The object drops out of the image near the line; losing the track there
    // is expected, so the obligation is kept. Farther out a deleted track
    // means the object is gone and the planner reverts to cruise.
    if (remaining <= params.oos_distance_m + params.oos_latch_margin_m) next.latched = true;
    if (!next.latched) {
      next.mode = PlannerMode::cruise;
      next.stop_target_m = 0.0;
    }
  }

  if (next.mode == PlannerMode::stopping) {
    const double to_line = next.stop_target_m - ego.position_m;
    if (to_line <= 0.5 && ego.speed_mps < 0.1) {
      next.mode = PlannerMode::stopped;
      next.target_speed_mps = 0.0;
      return next;
    }
    const double remaining = to_line - params.stop_standoff_m;
    const double profile =
        std::sqrt(std::max(0.0, 2.0 * params.plan_decel_mps2 * remaining));
    next.target_speed_mps = std::min(params.speed_limit_mps, profile);
  } else {
    next.target_speed_mps = params.speed_limit_mps;
  }
  return next;
}

double plan_feedforward_accel(const PlannerState& state, const EgoState& /*ego*/,
                              const PlannerParams& params) {
  if (state.mode == PlannerMode::stopping &&
      state.target_speed_mps < params.speed_limit_mps - 1e-9)
    return -params.plan_decel_mps2;
  return 0.0;
}

double pid_step(const PidGains& gains, double target_mps, double current_mps, double dt,
                PidState& state, double out_min, double out_max) {
  const double error = target_mps - current_mps;
  double derivative = 0.0;
  if (state.has_prev && dt > 0.0) derivative = (error - state.prev_error) / dt;
  state.prev_error = error;
  state.has_prev = true;

  // Anti-windup: freeze the integrator while the output is pinned at a limit
  // in the direction of the error, and clamp its magnitude.
  const double provisional =
      gains.kp * error + gains.ki * state.integral + gains.kd * derivative;
  const bool pinned = (provisional >= out_max && error > 0.0) ||
                      (provisional <= out_min && error < 0.0);
  if (!pinned) {
    state.integral += error * dt;
    state.integral = std::clamp(state.integral, -gains.integral_limit, gains.integral_limit);
  }
  const double out = gains.kp * error + gains.ki * state.integral + gains.kd * derivative;
  return std::clamp(out, out_min, out_max);
}

double stanley_step(double heading_error_rad, double cross_track_error_m, double speed_mps,
                    double gain_k, double max_steer_rad) {
  const double v = std::max(speed_mps, 0.1);
  const double steer = heading_error_rad + std::atan(gain_k * cross_track_error_m / v);
  return std::clamp(steer, -max_steer_rad, max_steer_rad);
}

EgoState plant_step(const EgoState& ego, double accel_command_mps2, double steer_rad, double dt,
                    const VehiclePlant& plant) {
  EgoState next = ego;
  double a = std::clamp(accel_command_mps2, -plant.max_decel_mps2, plant.max_accel_mps2);

  const double v0 = ego.speed_mps;
  double v1 = v0 + a * dt;
  double travel;
  if (v1 <= 0.0) {
    // Comes to rest inside the step; integrate only up to the stop instant.
    const double t_stop = (a < 0.0) ? v0 / -a : 0.0;
    travel = v0 * t_stop + 0.5 * a * t_stop * t_stop;
    v1 = 0.0;
    a = 0.0;
  } else {
    travel = 0.5 * (v0 + v1) * dt;
  }
  next.speed_mps = v1;
  next.position_m = ego.position_m + travel;
  next.accel_mps2 = a;

  // Kinematic bicycle for the lateral axis; straight road, lane center at 0.
  const double steer = std::clamp(steer_rad, -plant.max_steer_rad, plant.max_steer_rad);
  const double v_mid = 0.5 * (v0 + v1);
  next.heading_error_rad = ego.heading_error_rad + v_mid / plant.wheelbase_m * std::tan(steer) * dt;
  next.lateral_offset_m = ego.lateral_offset_m + v_mid * std::sin(next.heading_error_rad) * dt;
  return next;
}

}  // namespace advsim
