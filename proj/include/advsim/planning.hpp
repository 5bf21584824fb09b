#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "advsim/camera.hpp"
#include "advsim/perception.hpp"

namespace advsim {

/// Longitudinal physical limits of the vehicle under control.
struct VehiclePlant {
  double max_decel_mps2 = 6.0;      // magnitude; physics clamp
  double comfort_decel_mps2 = 3.4;  // magnitude; planner braking target
  double oos_distance_m = 4.0;      // must agree with CameraModel.oos_distance_m
  double max_accel_mps2 = 2.5;      // magnitude; throttle clamp
  double wheelbase_m = 2.7;
  double max_steer_rad = 0.5;

  void validate() const;
};

/// Distance window where per-frame detection failures can still become a
/// system-level outcome, with the matching pixel-size window.
struct SystemCriticalRange {
  double d_min_m = 0.0;   // minimum brake distance
  double d_max_m = 0.0;   // farthest usefully-detected distance
  double s_min_px = 0.0;  // pixel size at d_max
  double s_max_px = 0.0;  // pixel size at d_min
};

/// Discrete pixel-size sampling plan: sizes with inverse-square weights over
/// the critical range, exportable to patch-optimization pipelines.
struct SamplingPlan {
  struct Entry {
    double pixel_size_px = 0.0;
    double probability = 0.0;
  };
  std::vector<Entry> entries;  // ascending pixel size, probabilities sum to 1
  SystemCriticalRange critical_range;
  std::string provenance;  // scenario id / parameters, free-form

  void validate() const;
};

/// Stopping distance v^2 / (2 a).
double brake_distance(double speed_mps, double decel_mps2);

/// Far edge of the farthest band whose benign detection rate is at least
/// `threshold`. Errors when no band qualifies.
double compute_d_max(const DetectionProfile& benign_profile, double threshold);

/// d_min from maximum deceleration, d_max from the benign profile, pixel
/// bounds via the pinhole model. Throws InfeasibleError when d_min >= d_max.
SystemCriticalRange compute_critical_range(const VehiclePlant& plant, double speed_mps,
                                           const DetectionProfile& benign_profile,
                                           const ObjectSpec& obj, const CameraModel& cam,
                                           double d_max_threshold = 0.05);

/// Normalized inverse-square weights p(s_i) = (1/s_i^2) / sum_k (1/s_k^2).
/// Sizes must be positive and strictly increasing.
std::vector<double> s1_weights(const std::vector<double>& pixel_sizes);

/// n_sizes pixel sizes uniformly spaced over [s_min, s_max], weighted by
/// s1_weights. A degenerate range collapses to a single unit-probability entry.
SamplingPlan build_sampling_plan(const SystemCriticalRange& range, int n_sizes,
                                 const std::string& provenance = "");

/// Plan file emission/ingestion: '#' header with range and provenance, then
/// one `pixel_size,probability` row per entry.
void write_sampling_plan(std::ostream& out, const SamplingPlan& plan);
void write_sampling_plan_file(const std::string& path, const SamplingPlan& plan);

}  // namespace advsim
