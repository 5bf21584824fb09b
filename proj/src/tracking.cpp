#include "advsim/tracking.hpp"

#include <cmath>

#include "advsim/errors.hpp"

namespace advsim {

void TrackerParams::validate() const {
  if (hits_to_confirm < 1) throw ParseError("tracker: hits_to_confirm must be >= 1");
  if (misses_to_delete < 1) throw ParseError("tracker: misses_to_delete must be >= 1");
  if (process_noise_std <= 0.0) throw ParseError("tracker: process_noise_std must be > 0");
  if (measurement_noise_std_m <= 0.0)
    throw ParseError("tracker: measurement_noise_std_m must be > 0");
  if (gate_sigma <= 0.0) throw ParseError("tracker: gate_sigma must be > 0");
}

TrackState predict(const TrackState& state, double dt, double /*ego_speed_mps*/,
                   const TrackerParams& params) {
  if (state.status == TrackStatus::empty || dt <= 0.0) return state;

  // x = [d, r]: d' = d - r*dt, r' = r.  F = [[1, -dt], [0, 1]].
  TrackState s = state;
  s.mean[0] -= s.mean[1] * dt;

  const double p00 = s.covariance[0], p01 = s.covariance[1];
  const double p10 = s.covariance[2], p11 = s.covariance[3];
  double n00 = p00 - dt * (p01 + p10) + dt * dt * p11;
  double n01 = p01 - dt * p11;
  double n10 = p10 - dt * p11;
  double n11 = p11;
  // Piecewise-constant acceleration noise, G = [-dt^2/2, dt]^T.
  const double q = params.process_noise_std * params.process_noise_std;
  n00 += q * dt * dt * dt * dt / 4.0;
  n01 -= q * dt * dt * dt / 2.0;
  n10 -= q * dt * dt * dt / 2.0;
  n11 += q * dt * dt;
  const double off = 0.5 * (n01 + n10);
  s.covariance = {n00, off, off, n11};
  return s;
}

namespace {

void kalman_range_update(TrackState& s, double measured_distance, const TrackerParams& params) {
  const double r = params.measurement_noise_std_m * params.measurement_noise_std_m;
  const double p00 = s.covariance[0], p01 = s.covariance[1];
  const double p10 = s.covariance[2], p11 = s.covariance[3];
  const double svar = p00 + r;
  const double k0 = p00 / svar;
  const double k1 = p10 / svar;
  const double innovation = measured_distance - s.mean[0];

  s.mean[0] += k0 * innovation;
  s.mean[1] += k1 * innovation;

  // Joseph form with H = [1, 0]: P+ = (I-KH) P (I-KH)^T + K R K^T.
  const double a = 1.0 - k0;
  const double n00 = a * a * p00 + r * k0 * k0;
  const double n01 = a * (p01 - k1 * p00) + r * k0 * k1;
  const double n11 = p11 - k1 * (p01 + p10) + k1 * k1 * p00 + r * k1 * k1;
  s.covariance = {n00, n01, n01, n11};
}

void create_track(TrackState& s, double measured_distance, double ego_speed,
                  const TrackerParams& params) {
  s.mean = {measured_distance, ego_speed};
  const double r = params.measurement_noise_std_m * params.measurement_noise_std_m;
  // Closing rate seeds from the ego speed (static-object assumption) with
  // enough variance to absorb slow object motion.
  s.covariance = {r, 0.0, 0.0, 4.0};
}

}  // namespace

TrackStatus Tracker::step_lifecycle(TrackState& s, bool hit, const TrackerParams& p) {
  if (hit) {
    if (s.status == TrackStatus::empty) {
      s.status = TrackStatus::tentative;
      s.consecutive_hits = 1;
    } else {
      ++s.consecutive_hits;
    }
    s.consecutive_misses = 0;
    if (s.status == TrackStatus::tentative && s.consecutive_hits >= p.hits_to_confirm)
      s.status = TrackStatus::confirmed;
  } else if (s.status != TrackStatus::empty) {
    ++s.consecutive_misses;
    s.consecutive_hits = 0;
    if (s.consecutive_misses >= p.misses_to_delete) s = TrackState{};
  }
  return s.status;
}

TrackState update(const TrackState& state, const Detection& detection,
                  const TrackerParams& params, double ego_speed_hint) {
  TrackState s = state;
  bool hit = detection.detected;

  if (hit && s.status != TrackStatus::empty) {
    // Mahalanobis gate on the range innovation; gated-out counts as a miss.
    const double r = params.measurement_noise_std_m * params.measurement_noise_std_m;
    const double svar = s.covariance[0] + r;
    const double innovation = detection.measured_distance_m - s.mean[0];
    if (innovation * innovation > params.gate_sigma * params.gate_sigma * svar) hit = false;
  }

  if (hit) {
    if (s.status == TrackStatus::empty)
      create_track(s, detection.measured_distance_m, ego_speed_hint, params);
    else
      kalman_range_update(s, detection.measured_distance_m, params);
  }
  Tracker::step_lifecycle(s, hit, params);
  return s;
}

bool is_tracked(const TrackState& state) { return state.status == TrackStatus::confirmed; }

void Tracker::predict(double dt, double ego_speed_mps) {
  last_ego_speed_ = ego_speed_mps;
  state_ = advsim::predict(state_, dt, ego_speed_mps, params_);
}

void Tracker::update(const Detection& detection) {
  state_ = advsim::update(state_, detection, params_, last_ego_speed_);
}

}  // namespace advsim
