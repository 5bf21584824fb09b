#pragma once

#include <cstdint>
#include <vector>

#include "advsim/camera.hpp"

namespace advsim {

/// Empirical per-frame pixel-size histogram from uniform-motion runs next to
/// the analytic density on the same bins.
struct SizeDistResult {
  std::vector<double> bin_lo_px;
  std::vector<double> bin_hi_px;
  std::vector<double> empirical;  // normalized frequencies
  std::vector<double> analytic;   // bin probabilities from the CDF
  double l1_distance = 0.0;
  std::uint64_t samples = 0;
};

/// Simulates `runs` passes from road_length down to the out-of-sight distance
/// at constant speed (seeded random phase per run), bins the observed sizes
/// and evaluates the analytic distribution on the same grid.
SizeDistResult size_distribution(const ObjectSpec& obj, const CameraModel& cam,
                                 double speed_mps, double road_length_m, int runs, int bins,
                                 std::uint64_t seed);

}  // namespace advsim
