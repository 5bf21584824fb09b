#include "advsim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "advsim/errors.hpp"
#include "advsim/stats.hpp"
#include "advsim/units.hpp"

namespace advsim {

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed, bool record_trajectory) {
  cfg.validate_with_profile();

  const TrialStreams streams(seed);
  const double dt = 1.0 / cfg.camera.capture_rate_hz;

  TrialResult result;
  result.init_distance_m =
      cfg.init_band_lo_m + streams.init.uniform_at(0) * (cfg.init_band_hi_m - cfg.init_band_lo_m);

  // Ego starts at 0; the stop line sits init_distance ahead, the object at the
  // line minus the configured offset.
  const double line_x = result.init_distance_m;
  const double object_x = line_x - cfg.stop_line_offset_m;
  const double crossing_threshold =
      cfg.goal == Goal::stop_line_violation ? cfg.stop_speed_threshold_mps : 0.0;

  EgoState ego;
  ego.speed_mps = cfg.speed_limit_mps;
  Tracker tracker(cfg.tracker);
  PlannerState planner;
  planner.target_speed_mps = cfg.speed_limit_mps;
  PidState pid;
  const PlannerParams pparams = cfg.planner_params();

  result.min_distance_to_line_m = line_x;
  int zero_speed_frames = 0;
  const std::uint64_t max_frames =
      static_cast<std::uint64_t>(240.0 * cfg.camera.capture_rate_hz);

  for (std::uint64_t t = 0; t < max_frames; ++t) {
    const double true_distance = object_x - ego.position_m;
    const Detection det = sample_detection(cfg.profile, true_distance, cfg.camera, streams, t,
                                           cfg.detection_noise_std_m);

    const bool was_tracked = tracker.is_tracked();
    tracker.predict(dt, ego.speed_mps);
    tracker.update(det);
    const bool tracked = tracker.is_tracked();
    if (tracked && !result.track_confirm_frame) result.track_confirm_frame = t;
    if (was_tracked && !tracked) result.track_delete_frames.push_back(t);

    planner = plan(tracked,
                   tracked ? std::optional<double>(tracker.distance()) : std::nullopt, ego,
                   pparams, planner);

    const double feedback =
        pid_step(cfg.pid, planner.target_speed_mps, ego.speed_mps, dt, pid,
                 -cfg.plant.max_decel_mps2, cfg.plant.max_accel_mps2);
    const double accel_cmd = feedback + plan_feedforward_accel(planner, ego, pparams);
    // Stanley wants path-relative errors: path heading minus vehicle heading,
    // cross-track measured toward the path.
    const double steer = stanley_step(-ego.heading_error_rad, -ego.lateral_offset_m,
                                      ego.speed_mps, cfg.stanley_gain, cfg.plant.max_steer_rad);

    const EgoState prev = ego;
    ego = plant_step(ego, accel_cmd, steer, dt, cfg.plant);
    result.frames = t + 1;

    if (record_trajectory)
      result.trajectory.push_back({t * dt, ego.position_m, ego.speed_mps, tracked});

    result.min_distance_to_line_m =
        std::min(result.min_distance_to_line_m, line_x - ego.position_m);

    if (prev.position_m < line_x && ego.position_m >= line_x) {
      // Crossing speed from the constant-acceleration segment of this step.
      const double v2 =
          prev.speed_mps * prev.speed_mps + 2.0 * ego.accel_mps2 * (line_x - prev.position_m);
      const double crossing_speed = std::sqrt(std::max(0.0, v2));
      result.final_speed_at_line_mps = crossing_speed;
      result.final_speed_mps = ego.speed_mps;
      result.violated = crossing_speed > crossing_threshold;
      return result;
    }

    zero_speed_frames = ego.speed_mps <= 0.0 ? zero_speed_frames + 1 : 0;
    if (zero_speed_frames >= 10) {
      result.final_speed_mps = 0.0;
      result.violated = false;
      return result;
    }
  }

  result.final_speed_mps = ego.speed_mps;
  result.violated = false;
  return result;
}

std::vector<TrialResult> run_trials(const ScenarioConfig& cfg, int workers) {
  cfg.validate_with_profile();
  std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
  const auto run_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i)
      results[static_cast<std::size_t>(i)] =
          run_trial(cfg, cfg.base_seed + static_cast<std::uint64_t>(i));
  };
  workers = std::max(1, std::min(workers, cfg.trials));
  if (workers == 1) {
    run_range(0, cfg.trials);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (cfg.trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(cfg.trials, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }
  return results;
}

SpeedRow run_eval(const ScenarioConfig& cfg, int workers) {
  const std::vector<TrialResult> results = run_trials(cfg, workers);
  SpeedRow row;
  row.speed_mph = mps_to_mph(cfg.speed_limit_mps);
  row.trials = cfg.trials;
  for (const TrialResult& r : results) row.violations += r.violated ? 1 : 0;
  row.rate = static_cast<double>(row.violations) / static_cast<double>(row.trials);
  return row;
}

double two_proportion_z(int violations_a, int trials_a, int violations_b, int trials_b) {
  if (trials_a < 1 || trials_b < 1)
    throw std::domain_error("two_proportion_z: trials must be >= 1");
  if (violations_a < 0 || violations_a > trials_a || violations_b < 0 ||
      violations_b > trials_b)
    throw std::domain_error("two_proportion_z: counts out of range");

  const double p1 = static_cast<double>(violations_a) / trials_a;
  const double p2 = static_cast<double>(violations_b) / trials_b;
  const double pooled =
      static_cast<double>(violations_a + violations_b) / (trials_a + trials_b);
  const double var = pooled * (1.0 - pooled) * (1.0 / trials_a + 1.0 / trials_b);
  if (var <= 0.0) return 1.0;  // only possible when the proportions are equal
  const double z = (p1 - p2) / std::sqrt(var);
  return 2.0 * (1.0 - normal_cdf(std::abs(z)));
}

AblationTable ablation_matrix(
    const ScenarioConfig& base,
    const std::vector<std::pair<std::string, DetectionProfile>>& profiles,
    const std::vector<double>& speeds_mph, int trials, int workers) {
  if (profiles.empty()) throw ParseError("ablation: no profiles given");
  if (speeds_mph.empty()) throw ParseError("ablation: no speeds given");

  AblationTable table;
  for (double speed : speeds_mph) {
    const AblationCell* original = nullptr;
    std::size_t first_of_speed = table.cells.size();
    for (const auto& [label, profile] : profiles) {
      ScenarioConfig cfg = base;
      cfg.profile = profile;
      cfg.speed_limit_mps = mph_to_mps(speed);
      cfg.trials = trials;
      const std::vector<TrialResult> results = run_trials(cfg, workers);

      AblationCell cell;
      cell.label = label;
      cell.speed_mph = speed;
      cell.trials = trials;
      cell.per_trial.reserve(results.size());
      for (const TrialResult& r : results) {
        cell.per_trial.push_back(r.violated);
        cell.violations += r.violated ? 1 : 0;
      }
      cell.rate = static_cast<double>(cell.violations) / trials;
      table.cells.push_back(std::move(cell));
    }
    for (std::size_t i = first_of_speed; i < table.cells.size(); ++i)
      if (table.cells[i].label == "original") original = &table.cells[i];
    if (original) {
      for (std::size_t i = first_of_speed; i < table.cells.size(); ++i) {
        AblationCell& cell = table.cells[i];
        if (&cell == original) continue;
        cell.p_value_vs_original = two_proportion_z(original->violations, original->trials,
                                                    cell.violations, cell.trials);
      }
    }
  }
  return table;
}

void write_report(std::ostream& out, const EvaluationReport& report) {
  out << "# scenario: " << report.scenario_id << "\n";
  out << "# profile: " << report.profile_label << "\n";
  out << "speed_mph,violations,trials,rate,p_value\n";
  out << std::setprecision(10);
  for (const SpeedRow& row : report.rows) {
    out << row.speed_mph << "," << row.violations << "," << row.trials << "," << row.rate << ",";
    if (row.p_value) out << *row.p_value;
    out << "\n";
  }
}

void write_report_file(const std::string& path, const EvaluationReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report: " + path);
  write_report(out, report);
}

EvaluationReport read_report_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report: " + path);
  EvaluationReport report;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      if (line.rfind("# scenario: ", 0) == 0) report.scenario_id = line.substr(12);
      if (line.rfind("# profile: ", 0) == 0) report.profile_label = line.substr(11);
      continue;
    }
    if (line.rfind("speed_mph", 0) == 0) continue;
    std::istringstream row(line);
    std::string speed_s, viol_s, trials_s, rate_s, p_s;
    if (!std::getline(row, speed_s, ',') || !std::getline(row, viol_s, ',') ||
        !std::getline(row, trials_s, ',') || !std::getline(row, rate_s, ',')) {
      std::ostringstream msg;
      msg << path << " line " << line_no << ": malformed report row";
      throw ParseError(msg.str());
    }
    std::getline(row, p_s, ',');
    SpeedRow r;
    try {
      r.speed_mph = std::stod(speed_s);
      r.violations = std::stoi(viol_s);
      r.trials = std::stoi(trials_s);
      r.rate = std::stod(rate_s);
      if (!p_s.empty()) r.p_value = std::stod(p_s);
    } catch (const std::exception&) {
      std::ostringstream msg;
      msg << path << " line " << line_no << ": malformed report row";
      throw ParseError(msg.str());
    }
    report.rows.push_back(r);
  }
  if (report.rows.empty()) throw ParseError(path + ": empty report");
  return report;
}

void write_ablation(std::ostream& out, const AblationTable& table) {
  out << "label,speed_mph,violations,trials,rate,p_value_vs_original\n";
  out << std::setprecision(10);
  for (const AblationCell& cell : table.cells) {
    out << cell.label << "," << cell.speed_mph << "," << cell.violations << "," << cell.trials
        << "," << cell.rate << ",";
    if (cell.p_value_vs_original) out << *cell.p_value_vs_original;
    out << "\n";
  }
}

void write_trajectory(std::ostream& out, const TrialResult& result) {
  out << "t,x,v,tracked\n";
  out << std::setprecision(10);
  for (const TrialResult::Sample& s : result.trajectory)
    out << s.t << "," << s.x << "," << s.v << "," << (s.tracked ? 1 : 0) << "\n";
}

}  // namespace advsim
