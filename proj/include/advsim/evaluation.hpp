#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "advsim/scenario.hpp"

namespace advsim {

/// Outcome of one closed-loop trial.
struct TrialResult {
  bool violated = false;
  double min_distance_to_line_m = 0.0;  // negative once the line is crossed
  std::optional<double> final_speed_at_line_mps;  // present when the line was crossed
  std::optional<std::uint64_t> track_confirm_frame;
  std::vector<std::uint64_t> track_delete_frames;  // confirmed-track deletions
  double init_distance_m = 0.0;
  double final_speed_mps = 0.0;
  std::uint64_t frames = 0;

  struct Sample {
    double t = 0.0;
    double x = 0.0;
    double v = 0.0;
    bool tracked = false;
  };
  std::vector<Sample> trajectory;  // filled only when requested
};

struct SpeedRow {
  double speed_mph = 0.0;
  int violations = 0;
  int trials = 0;
  double rate = 0.0;
  std::optional<double> p_value;  // vs a baseline, when one was given
};

struct EvaluationReport {
  std::string scenario_id;
  std::string profile_label;
  std::vector<SpeedRow> rows;
};

/// One trial of the per-frame loop: true distance -> detection injection ->
/// tracker predict/update -> plan -> PID (+ Stanley) -> plant. Deterministic
/// in (cfg, seed).
TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed,
                      bool record_trajectory = false);

/// cfg.trials trials with seeds base_seed + i and start positions drawn from
/// the init band; returns the violation (or collision) count for the single
/// configured speed. Trials may run on `workers` threads; aggregation is
/// order-independent.
SpeedRow run_eval(const ScenarioConfig& cfg, int workers = 1);

/// Per-trial outcomes alongside the aggregate, for coupling checks.
std::vector<TrialResult> run_trials(const ScenarioConfig& cfg, int workers = 1);

/// Pooled two-proportion z-test, two-tailed. Equal proportions (including the
/// degenerate all-zero / all-one tables) give p = 1.
double two_proportion_z(int violations_a, int trials_a, int violations_b, int trials_b);

struct AblationCell {
  std::string label;
  double speed_mph = 0.0;
  int violations = 0;
  int trials = 0;
  double rate = 0.0;
  std::optional<double> p_value_vs_original;
  std::vector<bool> per_trial;  // violation flag per trial index (CRN-aligned)
};

struct AblationTable {
  std::vector<AblationCell> cells;
};

/// Runs every labeled profile at every speed with common random numbers (the
/// same trial seeds and per-frame uniforms), so differences between cells are
/// attributable to the profiles alone. p-values compare against the profile
/// labeled `original` when present.
AblationTable ablation_matrix(const ScenarioConfig& base,
                              const std::vector<std::pair<std::string, DetectionProfile>>& profiles,
                              const std::vector<double>& speeds_mph, int trials, int workers = 1);

void write_report(std::ostream& out, const EvaluationReport& report);
void write_report_file(const std::string& path, const EvaluationReport& report);
EvaluationReport read_report_file(const std::string& path);

void write_ablation(std::ostream& out, const AblationTable& table);
void write_trajectory(std::ostream& out, const TrialResult& result);

}  // namespace advsim
