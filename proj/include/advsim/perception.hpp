#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "advsim/camera.hpp"
#include "advsim/rng.hpp"

namespace advsim {

/// One distance band with its per-frame detection rate. Intervals are
/// half-open [lo, hi) so adjacent bands can share endpoints.
struct RateRange {
  double lo_m = 0.0;
  double hi_m = 0.0;
  double rate = 0.0;
};

/// Per-distance detection rates for one (detector, attack) pair; the source
/// for stochastic perception injection.
struct DetectionProfile {
  std::string label;
  std::vector<RateRange> ranges;  // contiguous, sorted ascending, rates in [0,1]

  void validate() const;
};

struct Detection {
  bool detected = false;
  double measured_distance_m = 0.0;  // meaningful only when detected
  std::uint64_t frame_index = 0;
};

/// Parse `lo_m,hi_m,rate` rows ('#' comments allowed). Rejects gaps, overlaps
/// and out-of-range rates with the offending line number.
DetectionProfile load_profile(std::istream& source, const std::string& label = "");

/// Load from file. A `# kind: asr` directive marks rows as attack success
/// rates to be complemented into detection rates.
DetectionProfile load_profile_file(const std::string& path, const std::string& label = "");

/// Detection rate of the enclosing band; 0 outside all bands.
double rate_at(const DetectionProfile& profile, double distance_m);

/// Build a detection profile from attack-success-rate rows (rate = 1 - ASR).
DetectionProfile asr_to_profile(const std::vector<RateRange>& asr_rows,
                                const std::string& label = "");

/// Per-trial randomness, split so that the detection decision for frame t is
/// a pure function of (seed, t). Measurement noise draws live on their own
/// stream so they never perturb the detection coupling.
struct TrialStreams {
  RngStream init;
  RngStream detection;
  RngStream noise;

  explicit TrialStreams(std::uint64_t trial_seed)
      : init(RngStream(trial_seed).substream(0)),
        detection(RngStream(trial_seed).substream(1)),
        noise(RngStream(trial_seed).substream(2)) {}
};

/// Bernoulli detection injection for one frame: detected iff the object is in
/// view (distance >= d_oos) and u < rate at the true distance. Measured
/// distance carries Gaussian noise of the given std.
Detection sample_detection(const DetectionProfile& profile, double true_distance_m,
                           const CameraModel& cam, const TrialStreams& streams,
                           std::uint64_t frame_index, double noise_std_m);

}  // namespace advsim
