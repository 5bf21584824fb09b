#pragma once

#include <array>

#include "advsim/perception.hpp"

namespace advsim {

enum class TrackStatus { empty, tentative, confirmed };

struct TrackerParams {
  int hits_to_confirm = 4;    // H: consecutive detections to create/confirm
  int misses_to_delete = 6;   // R: consecutive misses to delete
  double process_noise_std = 0.5;        // accel noise, m/s^2
  double measurement_noise_std_m = 0.5;  // range measurement noise
  double gate_sigma = 3.0;               // Mahalanobis acceptance gate

  void validate() const;
};

/// Kalman state over [relative distance, closing rate] plus the (H, R)
/// lifecycle counters. Counters reset on the opposite event, so confirmation
/// needs H consecutive hits and deletion R consecutive misses.
struct TrackState {
  TrackStatus status = TrackStatus::empty;
  std::array<double, 2> mean = {0.0, 0.0};          // [distance m, closing rate m/s]
  std::array<double, 4> covariance = {0, 0, 0, 0};  // row-major 2x2
  int consecutive_hits = 0;
  int consecutive_misses = 0;
};

/// Single-object range tracker. One instance per trial; the state is a value
/// and nothing is shared.
class Tracker {
public:
  explicit Tracker(const TrackerParams& params) : params_(params) { params_.validate(); }

  /// Constant-closing-rate prediction over dt. Ego speed seeds the closing
  /// rate of tracks created later this frame (static-object assumption).
  void predict(double dt, double ego_speed_mps);

  /// Detection/miss bookkeeping plus gated Kalman range update. Call after
  /// predict for the same frame.
  void update(const Detection& detection);

  /// Confirmed tracks only; tentative tracks are invisible to planning.
  bool is_tracked() const { return state_.status == TrackStatus::confirmed; }

  double distance() const { return state_.mean[0]; }
  double closing_rate() const { return state_.mean[1]; }
  const TrackState& state() const { return state_; }
  const TrackerParams& params() const { return params_; }

  /// Status transition on a hit/miss for states driven externally (shared by
  /// update and the lifecycle tests).
  static TrackStatus step_lifecycle(TrackState& s, bool hit, const TrackerParams& p);

private:
  TrackerParams params_;
  TrackState state_;
  double last_ego_speed_ = 0.0;
};

/// Free-function forms matching the rest of the library's style.
TrackState predict(const TrackState& state, double dt, double ego_speed_mps,
                   const TrackerParams& params);
TrackState update(const TrackState& state, const Detection& detection,
                  const TrackerParams& params, double ego_speed_hint = 0.0);
bool is_tracked(const TrackState& state);

}  // namespace advsim
