#include "advsim/planning.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "advsim/errors.hpp"

namespace advsim {

void VehiclePlant::validate() const {
  if (comfort_decel_mps2 <= 0.0 || comfort_decel_mps2 > max_decel_mps2)
    throw ParseError("plant: need 0 < comfort_decel <= max_decel");
  if (oos_distance_m < 0.0) throw ParseError("plant: oos_distance_m must be >= 0");
  if (max_accel_mps2 <= 0.0) throw ParseError("plant: max_accel_mps2 must be > 0");
  if (wheelbase_m <= 0.0) throw ParseError("plant: wheelbase_m must be > 0");
}

void SamplingPlan::validate() const {
  if (entries.empty()) throw std::domain_error("sampling plan: no entries");
  double sum = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    sum += e.probability;
    if (e.pixel_size_px < critical_range.s_min_px - 1e-9 ||
        e.pixel_size_px > critical_range.s_max_px + 1e-9)
      throw std::domain_error("sampling plan: entry outside the critical pixel range");
    if (i > 0) {
      if (entries[i - 1].pixel_size_px >= e.pixel_size_px)
        throw std::domain_error("sampling plan: sizes must be strictly increasing");
      if (entries[i - 1].probability <= e.probability)
        throw std::domain_error("sampling plan: probabilities must decrease with size");
    }
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::domain_error("sampling plan: probabilities must sum to 1");
}

double brake_distance(double speed_mps, double decel_mps2) {
  if (decel_mps2 <= 0.0) throw std::domain_error("brake_distance: deceleration must be > 0");
  if (speed_mps < 0.0) throw std::domain_error("brake_distance: speed must be >= 0");
  return speed_mps * speed_mps / (2.0 * decel_mps2);
}

double compute_d_max(const DetectionProfile& benign_profile, double threshold) {
  benign_profile.validate();
  if (threshold <= 0.0 || threshold > 1.0)
    throw std::domain_error("compute_d_max: threshold must be in (0, 1]");
  for (auto it = benign_profile.ranges.rbegin(); it != benign_profile.ranges.rend(); ++it) {
    if (it->rate >= threshold) return it->hi_m;
  }
  throw ParseError("compute_d_max: no range of '" + benign_profile.label +
                   "' meets the detection threshold");
}

SystemCriticalRange compute_critical_range(const VehiclePlant& plant, double speed_mps,
                                           const DetectionProfile& benign_profile,
                                           const ObjectSpec& obj, const CameraModel& cam,
                                           double d_max_threshold) {
  if (std::abs(plant.oos_distance_m - cam.oos_distance_m) > 1e-9)
    throw ParseError("plant and camera disagree on oos_distance_m");
  SystemCriticalRange range;
  range.d_min_m = brake_distance(speed_mps, plant.max_decel_mps2);
  range.d_max_m = compute_d_max(benign_profile, d_max_threshold);
  if (range.d_min_m >= range.d_max_m) {
    std::ostringstream msg;
    msg << "attack infeasible at this speed: brake distance " << range.d_min_m
        << " m reaches the detection horizon " << range.d_max_m << " m";
    throw InfeasibleError(msg.str());
  }
  range.s_min_px = size_at_distance(obj, cam, range.d_max_m);
  range.s_max_px = size_at_distance(obj, cam, range.d_min_m);
  return range;
}

std::vector<double> s1_weights(const std::vector<double>& pixel_sizes) {
  if (pixel_sizes.empty()) throw std::domain_error("s1_weights: empty size list");
  double sum = 0.0;
  std::vector<double> weights;
  weights.reserve(pixel_sizes.size());
  for (std::size_t i = 0; i < pixel_sizes.size(); ++i) {
    const double s = pixel_sizes[i];
    if (s <= 0.0) throw std::domain_error("s1_weights: sizes must be > 0");
    if (i > 0 && s <= pixel_sizes[i - 1])
      throw std::domain_error("s1_weights: sizes must be strictly increasing");
    const double w = 1.0 / (s * s);
    weights.push_back(w);
    sum += w;
  }
  for (double& w : weights) w /= sum;
  return weights;
}

SamplingPlan build_sampling_plan(const SystemCriticalRange& range, int n_sizes,
                                 const std::string& provenance) {
  if (n_sizes < 1) throw std::domain_error("build_sampling_plan: n_sizes must be >= 1");
  SamplingPlan plan;
  plan.critical_range = range;
  plan.provenance = provenance;

  const double span = range.s_max_px - range.s_min_px;
  if (n_sizes == 1 || span <= 0.0) {
    plan.entries.push_back({range.s_min_px, 1.0});
    return plan;
  }

  std::vector<double> sizes;
  sizes.reserve(static_cast<std::size_t>(n_sizes));
  for (int i = 0; i < n_sizes; ++i)
    sizes.push_back(range.s_min_px + span * i / (n_sizes - 1));
  const std::vector<double> weights = s1_weights(sizes);
  for (int i = 0; i < n_sizes; ++i)
    plan.entries.push_back({sizes[static_cast<std::size_t>(i)],
                            weights[static_cast<std::size_t>(i)]});
  plan.validate();
  return plan;
}

void write_sampling_plan(std::ostream& out, const SamplingPlan& plan) {
  out << std::setprecision(12);
  out << "# sampling plan\n";
  if (!plan.provenance.empty()) out << "# provenance: " << plan.provenance << "\n";
  out << "# d_min_m: " << plan.critical_range.d_min_m << "\n"
      << "# d_max_m: " << plan.critical_range.d_max_m << "\n"
      << "# s_min_px: " << plan.critical_range.s_min_px << "\n"
      << "# s_max_px: " << plan.critical_range.s_max_px << "\n"
      << "# entries: " << plan.entries.size() << "\n"
      << "pixel_size,probability\n";
  for (const SamplingPlan::Entry& e : plan.entries)
    out << e.pixel_size_px << "," << e.probability << "\n";
}

void write_sampling_plan_file(const std::string& path, const SamplingPlan& plan) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write sampling plan: " + path);
  write_sampling_plan(out, plan);
}

}  // namespace advsim
