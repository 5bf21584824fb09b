#include "advsim/size_dist.hpp"

#include <cmath>
#include <stdexcept>

#include "advsim/errors.hpp"
#include "advsim/rng.hpp"
#include "advsim/stats.hpp"

namespace advsim {

SizeDistResult size_distribution(const ObjectSpec& obj, const CameraModel& cam,
                                 double speed_mps, double road_length_m, int runs, int bins,
                                 std::uint64_t seed) {
  if (runs < 1) throw ParseError("size_distribution: need at least one run");
  if (bins < 1) throw ParseError("size_distribution: need at least one bin");
  if (speed_mps <= 0.0) throw std::domain_error("size_distribution: speed must be > 0");
  if (road_length_m <= cam.oos_distance_m)
    throw std::domain_error("size_distribution: road length must exceed the oos distance");

  const double s_min = size_at_distance(obj, cam, road_length_m);
  const double s_max = size_at_distance(obj, cam, cam.oos_distance_m);
  Histogram hist(s_min, s_max, bins);

  const double dt = 1.0 / cam.capture_rate_hz;
  const double step_m = speed_mps * dt;
  RngStream rng(seed);
  for (int run = 0; run < runs; ++run) {
    const double phase = rng.uniform_at(static_cast<std::uint64_t>(run)) * step_m;
    for (double d = road_length_m - phase; d > cam.oos_distance_m; d -= step_m)
      hist.add(size_at_distance(obj, cam, d));
  }

  SizeDistResult result;
  result.samples = hist.total();
  result.empirical = hist.normalized();
  const double f_total = frame_count_cdf(obj, cam, road_length_m, speed_mps, s_max) -
                         frame_count_cdf(obj, cam, road_length_m, speed_mps, s_min);
  for (int i = 0; i < bins; ++i) {
    result.bin_lo_px.push_back(hist.bin_lo(i));
    result.bin_hi_px.push_back(hist.bin_hi(i));
    const double p = (frame_count_cdf(obj, cam, road_length_m, speed_mps, hist.bin_hi(i)) -
                      frame_count_cdf(obj, cam, road_length_m, speed_mps, hist.bin_lo(i))) /
                     f_total;
    result.analytic.push_back(p);
  }
  for (int i = 0; i < bins; ++i)
    result.l1_distance += std::abs(result.empirical[static_cast<std::size_t>(i)] -
                                   result.analytic[static_cast<std::size_t>(i)]);
  return result;
}

}  // namespace advsim
