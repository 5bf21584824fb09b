// Command-line front end: closed-loop simulation runs, ablation matrices,
// attack-plan export, size-distribution analysis and report statistics.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "advsim/errors.hpp"
#include "advsim/evaluation.hpp"
#include "advsim/size_dist.hpp"
#include "advsim/stats.hpp"
#include "advsim/units.hpp"

namespace fs = std::filesystem;
using namespace advsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

struct LabeledProfile {
  std::string label;
  DetectionProfile profile;
};

LabeledProfile parse_profile_arg(const std::string& arg) {
  std::string label, path = arg;
  const auto eq = arg.find('=');
  if (eq != std::string::npos) {
    label = arg.substr(0, eq);
    path = arg.substr(eq + 1);
  }
  return {label, load_profile_file(path, label)};
}

void ensure_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory: " + out);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write: " + path.string());
  return out;
}

std::vector<double> effective_speeds(const std::vector<double>& flag_speeds,
                                     const ScenarioConfig& cfg) {
  if (!flag_speeds.empty()) return flag_speeds;
  return {mps_to_mph(cfg.speed_limit_mps)};
}

void apply_overrides(ScenarioConfig& cfg, std::optional<int> trials,
                     std::optional<std::uint64_t> seed, bool latch_stop) {
  if (trials) cfg.trials = *trials;
  if (seed) cfg.base_seed = *seed;
  if (latch_stop) cfg.latch_stop = true;
}

int cmd_simulate(const std::string& scenario_path, const std::string& profile_arg,
                 const std::vector<double>& speeds_flag, std::optional<int> trials,
                 std::optional<std::uint64_t> seed, bool latch_stop, int workers,
                 int dump_trajectories, const std::string& out_dir) {
  ScenarioConfig cfg = load_scenario_file(scenario_path);
  const LabeledProfile lp = parse_profile_arg(profile_arg);
  cfg.profile = lp.profile;
  apply_overrides(cfg, trials, seed, latch_stop);
  ensure_out_dir(out_dir);

  EvaluationReport report;
  report.scenario_id = cfg.id;
  report.profile_label = cfg.profile.label;
  for (double speed : effective_speeds(speeds_flag, cfg)) {
    ScenarioConfig run_cfg = cfg;
    run_cfg.speed_limit_mps = mph_to_mps(speed);
    SpeedRow row = run_eval(run_cfg, workers);
    row.speed_mph = speed;
    report.rows.push_back(row);
    std::cout << "speed " << speed << " mph: " << row.violations << "/" << row.trials
              << " violations (rate " << row.rate << ")\n";

    for (int i = 0; i < dump_trajectories && i < run_cfg.trials; ++i) {
      const TrialResult tr =
          run_trial(run_cfg, run_cfg.base_seed + static_cast<std::uint64_t>(i), true);
      std::ostringstream name;
      name << "trajectory_" << speed << "mph_trial" << i << ".csv";
      auto out = open_out(fs::path(out_dir) / name.str());
      write_trajectory(out, tr);
    }
  }
  write_report_file((fs::path(out_dir) / "report.csv").string(), report);
  return kExitOk;
}

int cmd_ablate(const std::string& scenario_path, const std::vector<std::string>& profile_args,
               const std::vector<double>& speeds_flag, std::optional<int> trials,
               std::optional<std::uint64_t> seed, bool latch_stop, int workers,
               const std::string& out_dir) {
  ScenarioConfig cfg = load_scenario_file(scenario_path);
  apply_overrides(cfg, trials, seed, latch_stop);
  if (profile_args.size() < 2)
    throw ParseError("ablate: need at least two --profile arguments");
  std::vector<std::pair<std::string, DetectionProfile>> profiles;
  for (const std::string& arg : profile_args) {
    LabeledProfile lp = parse_profile_arg(arg);
    profiles.emplace_back(lp.profile.label, std::move(lp.profile));
  }
  ensure_out_dir(out_dir);

  const AblationTable table =
      ablation_matrix(cfg, profiles, effective_speeds(speeds_flag, cfg), cfg.trials, workers);
  for (const AblationCell& cell : table.cells) {
    std::cout << cell.label << " @ " << cell.speed_mph << " mph: " << cell.violations << "/"
              << cell.trials << " (rate " << cell.rate << ")";
    if (cell.p_value_vs_original) std::cout << " p=" << *cell.p_value_vs_original;
    std::cout << "\n";
  }
  auto out = open_out(fs::path(out_dir) / "ablation.csv");
  write_ablation(out, table);
  return kExitOk;
}

int cmd_attack_plan(const std::string& scenario_path, const std::string& profile_arg,
                    const std::vector<double>& speeds_flag, int n_sizes,
                    std::optional<double> threshold, const std::string& out_dir) {
  ScenarioConfig cfg = load_scenario_file(scenario_path);
  const LabeledProfile lp = parse_profile_arg(profile_arg);
  const std::vector<double> speeds = effective_speeds(speeds_flag, cfg);
  if (speeds.size() != 1) throw ParseError("attack-plan: exactly one --speed expected");
  const double speed_mph = speeds.front();
  const double thr = threshold.value_or(cfg.d_max_threshold);

  const SystemCriticalRange range = compute_critical_range(
      cfg.plant, mph_to_mps(speed_mph), lp.profile, cfg.object, cfg.camera, thr);
  std::ostringstream provenance;
  provenance << "scenario=" << cfg.id << " profile=" << lp.profile.label
             << " speed_mph=" << speed_mph << " d_max_threshold=" << thr
             << " n_sizes=" << n_sizes;
  const SamplingPlan plan = build_sampling_plan(range, n_sizes, provenance.str());

  ensure_out_dir(out_dir);
  write_sampling_plan_file((fs::path(out_dir) / "plan.csv").string(), plan);
  std::cout << "critical range: [" << range.d_min_m << ", " << range.d_max_m << "] m, ["
            << range.s_min_px << ", " << range.s_max_px << "] px, " << plan.entries.size()
            << " entries\n";
  return kExitOk;
}

int cmd_size_dist(const std::string& scenario_path, const std::vector<double>& speeds_flag,
                  int runs, int bins, std::optional<std::uint64_t> seed,
                  const std::string& out_dir) {
  ScenarioConfig cfg = load_scenario_file(scenario_path);
  const std::vector<double> speeds = effective_speeds(speeds_flag, cfg);
  if (speeds.size() != 1) throw ParseError("size-dist: exactly one --speed expected");

  const SizeDistResult result =
      size_distribution(cfg.object, cfg.camera, mph_to_mps(speeds.front()), cfg.road_length_m,
                        runs, bins, seed.value_or(cfg.base_seed));

  ensure_out_dir(out_dir);
  auto out = open_out(fs::path(out_dir) / "size_dist.csv");
  out << "bin_lo_px,bin_hi_px,empirical,analytic\n" << std::setprecision(10);
  for (std::size_t i = 0; i < result.empirical.size(); ++i)
    out << result.bin_lo_px[i] << "," << result.bin_hi_px[i] << "," << result.empirical[i]
        << "," << result.analytic[i] << "\n";
  std::cout << "samples: " << result.samples << ", L1 distance: " << result.l1_distance
            << "\n";
  return kExitOk;
}

int cmd_stats(const std::string& baseline_path, const std::string& treatment_path, bool fisher,
              const std::string& out_path) {
  const EvaluationReport baseline = read_report_file(baseline_path);
  const EvaluationReport treatment = read_report_file(treatment_path);
  if (baseline.rows.size() != treatment.rows.size())
    throw ParseError("stats: reports have different numbers of speeds");

  std::ostringstream body;
  body << "speed_mph,baseline_violations,baseline_trials,treatment_violations,"
          "treatment_trials,p_value\n"
       << std::setprecision(10);
  int bv = 0, bt = 0, tv = 0, tt = 0;
  for (std::size_t i = 0; i < baseline.rows.size(); ++i) {
    const SpeedRow& b = baseline.rows[i];
    const SpeedRow& t = treatment.rows[i];
    if (std::abs(b.speed_mph - t.speed_mph) > 1e-9)
      throw ParseError("stats: speed mismatch between reports");
    const double p = fisher
                         ? fisher_exact_two_sided(b.violations, b.trials, t.violations, t.trials)
                         : two_proportion_z(b.violations, b.trials, t.violations, t.trials);
    body << b.speed_mph << "," << b.violations << "," << b.trials << "," << t.violations << ","
         << t.trials << "," << p << "\n";
    bv += b.violations;
    bt += b.trials;
    tv += t.violations;
    tt += t.trials;
  }
  const double pooled = fisher ? fisher_exact_two_sided(bv, bt, tv, tt)
                               : two_proportion_z(bv, bt, tv, tt);
  body << "pooled," << bv << "," << bt << "," << tv << "," << tt << "," << pooled << "\n";

  std::cout << body.str();
  if (!out_path.empty()) {
    auto out = open_out(out_path);
    out << body.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop perception-failure simulator and attack-planning toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", baseline_path, treatment_path, stats_out;
  std::string profile_arg;
  std::vector<std::string> profile_args;
  std::vector<double> speeds;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  bool latch_stop = false, fisher = false;
  int workers = 1, dump_trajectories = 0, n_sizes = 8, runs = 30, bins = 16;
  std::optional<double> threshold;

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo violation-rate evaluation");
  simulate->add_option("--scenario", scenario_path)->required();
  simulate->add_option("--profile", profile_arg, "detection profile, label=path or path")
      ->required();
  simulate->add_option("--speed", speeds, "speed in mph (repeatable)");
  simulate->add_option("--trials", trials);
  simulate->add_option("--seed", seed);
  simulate->add_flag("--latch-stop", latch_stop, "keep the stop obligation after track loss");
  simulate->add_option("--workers", workers);
  simulate->add_option("--dump-trajectories", dump_trajectories,
                       "write t,x,v,tracked dumps for the first N trials");
  simulate->add_option("--out", out_dir);

  auto* ablate = app.add_subcommand("ablate", "common-random-number profile comparison");
  ablate->add_option("--scenario", scenario_path)->required();
  ablate->add_option("--profile", profile_args, "label=path (repeat per profile)")->required();
  ablate->add_option("--speed", speeds);
  ablate->add_option("--trials", trials);
  ablate->add_option("--seed", seed);
  ablate->add_flag("--latch-stop", latch_stop);
  ablate->add_option("--workers", workers);
  ablate->add_option("--out", out_dir);

  auto* attack_plan = app.add_subcommand("attack-plan", "export the pixel-size sampling plan");
  attack_plan->add_option("--scenario", scenario_path)->required();
  attack_plan->add_option("--profile", profile_arg, "benign profile, label=path or path")
      ->required();
  attack_plan->add_option("--speed", speeds);
  attack_plan->add_option("--n-sizes", n_sizes);
  attack_plan->add_option("--threshold", threshold, "d_max detection-rate threshold");
  attack_plan->add_option("--out", out_dir);

  auto* size_dist = app.add_subcommand("size-dist", "empirical vs analytic size distribution");
  size_dist->add_option("--scenario", scenario_path)->required();
  size_dist->add_option("--speed", speeds);
  size_dist->add_option("--runs", runs);
  size_dist->add_option("--bins", bins);
  size_dist->add_option("--seed", seed);
  size_dist->add_option("--out", out_dir);

  auto* stats = app.add_subcommand("stats", "two-proportion significance test on reports");
  stats->add_option("--baseline", baseline_path)->required();
  stats->add_option("--treatment", treatment_path)->required();
  stats->add_flag("--fisher", fisher, "Fisher exact test instead of the pooled z-test");
  stats->add_option("--out", stats_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(scenario_path, profile_arg, speeds, trials, seed, latch_stop, workers,
                          dump_trajectories, out_dir);
    if (ablate->parsed())
      return cmd_ablate(scenario_path, profile_args, speeds, trials, seed, latch_stop, workers,
                        out_dir);
    if (attack_plan->parsed())
      return cmd_attack_plan(scenario_path, profile_arg, speeds, n_sizes, threshold, out_dir);
    if (size_dist->parsed())
      return cmd_size_dist(scenario_path, speeds, runs, bins, seed, out_dir);
    if (stats->parsed()) return cmd_stats(baseline_path, treatment_path, fisher, stats_out);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
