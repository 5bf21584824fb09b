#include "advsim/evaluation.hpp"

#include <cmath>
#include <sstream>

#include "advsim/errors.hpp"
#include "advsim/size_dist.hpp"
#include "advsim/units.hpp"
#include "doctest.h"

using namespace advsim;

namespace {

const std::string kData = ADVSIM_DATA_DIR;

ScenarioConfig stop_sign_config() {
  return load_scenario_file(kData + "/scenarios/stop_sign.cfg");
}

DetectionProfile perfect_profile() {
  return DetectionProfile{"perfect", {{4.0, 45.0, 1.0}}};
}

DetectionProfile blind_profile() {
  return DetectionProfile{"blind", {{4.0, 45.0, 0.0}}};
}

bool same_result(const TrialResult& a, const TrialResult& b) {
  return a.violated == b.violated && a.min_distance_to_line_m == b.min_distance_to_line_m &&
         a.final_speed_at_line_mps == b.final_speed_at_line_mps &&
         a.track_confirm_frame == b.track_confirm_frame &&
         a.track_delete_frames == b.track_delete_frames &&
         a.init_distance_m == b.init_distance_m && a.final_speed_mps == b.final_speed_mps &&
         a.frames == b.frames;
}

}  // namespace

TEST_CASE("trials are bit-deterministic in (cfg, seed)") {
  ScenarioConfig cfg = stop_sign_config();
  cfg.profile = load_profile_file(kData + "/profiles/y5_fte.csv");
  const TrialResult a = run_trial(cfg, 12345);
  const TrialResult b = run_trial(cfg, 12345);
  CHECK(same_result(a, b));
  const TrialResult c = run_trial(cfg, 12346);
  CHECK(a.init_distance_m != c.init_distance_m);

  cfg.trials = 40;
  const SpeedRow r1 = run_eval(cfg);
  const SpeedRow r2 = run_eval(cfg, 4);  // worker count cannot change results
  CHECK(r1.violations == r2.violations);
}

TEST_CASE("a blind pipeline cruises through the line") {
  ScenarioConfig cfg = stop_sign_config();
  cfg.profile = blind_profile();
  const TrialResult r = run_trial(cfg, 7);
  CHECK(r.violated);
  REQUIRE(r.final_speed_at_line_mps.has_value());
  CHECK(*r.final_speed_at_line_mps == doctest::Approx(cfg.speed_limit_mps).epsilon(0.01));
  CHECK(r.min_distance_to_line_m < 0.0);
  CHECK_FALSE(r.track_confirm_frame.has_value());
}

TEST_CASE("benign detection stops the vehicle") {
  ScenarioConfig cfg = stop_sign_config();
  cfg.profile = load_profile_file(kData + "/profiles/y5_benign.csv");
  const TrialResult r = run_trial(cfg, 41);
  CHECK_FALSE(r.violated);
  CHECK(r.track_confirm_frame.has_value());
}

TEST_CASE("perfect perception stops before the line at every speed") {
  for (double mph : {25.0, 30.0, 35.0}) {
    ScenarioConfig cfg = stop_sign_config();
    cfg.profile = perfect_profile();
    cfg.speed_limit_mps = mph_to_mps(mph);
    cfg.trials = 20;
    const auto results = run_trials(cfg);
    for (const TrialResult& r : results) {
      CHECK_FALSE(r.violated);
      // Stops short of the line, not merely slowly across it.
      CHECK(r.min_distance_to_line_m >= 0.0);
      CHECK(r.final_speed_mps == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("stopping profile leaves no overshoot worth a frame") {
  ScenarioConfig cfg = stop_sign_config();
  cfg.profile = perfect_profile();
  cfg.speed_limit_mps = mph_to_mps(35.0);
  cfg.trials = 10;
  for (const TrialResult& r : run_trials(cfg)) {
    CHECK(r.min_distance_to_line_m >= 0.0);
    CHECK(r.min_distance_to_line_m < 1.5);  // actually stops near the line
  }
}

TEST_CASE("pedestrian goal with perfect perception never collides") {
  ScenarioConfig cfg = load_scenario_file(kData + "/scenarios/pedestrian.cfg");
  cfg.profile = perfect_profile();
  cfg.trials = 20;
  const SpeedRow row = run_eval(cfg);
  CHECK(row.violations == 0);
}

TEST_CASE("pedestrian goal counts any moving crossing") {
  ScenarioConfig cfg = load_scenario_file(kData + "/scenarios/pedestrian.cfg");
  cfg.profile = blind_profile();
  const TrialResult r = run_trial(cfg, 3);
  CHECK(r.violated);
}

TEST_CASE("two-proportion z-test reference points") {
  CHECK(two_proportion_z(0, 30, 3, 30) == doctest::Approx(0.0755).epsilon(2e-3));
  CHECK(two_proportion_z(0, 30, 3, 30) == doctest::Approx(0.07556056752594142).epsilon(1e-9));
  CHECK(two_proportion_z(0, 30, 4, 30) == doctest::Approx(0.038433930236781766).epsilon(1e-9));
  CHECK(two_proportion_z(5, 30, 5, 30) == doctest::Approx(1.0));
  CHECK(two_proportion_z(0, 30, 0, 30) == doctest::Approx(1.0));
  CHECK(two_proportion_z(30, 30, 30, 30) == doctest::Approx(1.0));
  CHECK(two_proportion_z(0, 30, 30, 30) < 1e-9);
  CHECK(two_proportion_z(0, 30, 3, 30) ==
        doctest::Approx(two_proportion_z(3, 30, 0, 30)).epsilon(1e-12));
  CHECK_THROWS_AS(two_proportion_z(1, 0, 0, 10), std::domain_error);
}

TEST_CASE("p-value decreases as proportions separate") {
  double prev = 1.1;
  for (int k = 0; k <= 20; ++k) {
    const double p = two_proportion_z(0, 50, k, 50);
    CHECK(p <= prev + 1e-12);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }
}

TEST_CASE("ablation: identical profiles give identical cells") {
  ScenarioConfig cfg = stop_sign_config();
  const DetectionProfile p = load_profile_file(kData + "/profiles/y5_fte.csv");
  const AblationTable table =
      ablation_matrix(cfg, {{"original", p}, {"copy", p}}, {30.0}, 30);
  REQUIRE(table.cells.size() == 2);
  CHECK(table.cells[0].violations == table.cells[1].violations);
  CHECK(table.cells[0].per_trial == table.cells[1].per_trial);
  CHECK(table.cells[1].p_value_vs_original.has_value());
  CHECK(*table.cells[1].p_value_vs_original == doctest::Approx(1.0));
}

TEST_CASE("ablation: pointwise-dominated profile violates on a per-trial superset") {
  ScenarioConfig cfg = stop_sign_config();
  cfg.speed_limit_mps = mph_to_mps(30.0);
  // Mid detection rates leave both outcomes common; `low` is pointwise lower.
  const DetectionProfile mid{"mid", {{4.0, 20.0, 0.75}, {20.0, 45.0, 0.0}}};
  const DetectionProfile low{"low", {{4.0, 20.0, 0.45}, {20.0, 45.0, 0.0}}};
  const AblationTable table =
      ablation_matrix(cfg, {{"original", mid}, {"low", low}}, {30.0}, 60);
  REQUIRE(table.cells.size() == 2);
  const auto& mid_cell = table.cells[0];
  const auto& low_cell = table.cells[1];
  CHECK(low_cell.violations >= mid_cell.violations);
  for (std::size_t i = 0; i < mid_cell.per_trial.size(); ++i)
    if (mid_cell.per_trial[i]) CHECK(low_cell.per_trial[i]);
}

TEST_CASE("ablation argument validation") {
  ScenarioConfig cfg = stop_sign_config();
  CHECK_THROWS_AS(ablation_matrix(cfg, {}, {30.0}, 10), ParseError);
  CHECK_THROWS_AS(ablation_matrix(cfg, {{"a", perfect_profile()}}, {}, 10), ParseError);
}

TEST_CASE("report files round-trip") {
  EvaluationReport report;
  report.scenario_id = "stop_sign";
  report.profile_label = "y5_fte";
  report.rows.push_back({25.0, 3, 100, 0.03, std::nullopt});
  report.rows.push_back({35.0, 97, 100, 0.97, 0.0123});
  const std::string path = "report_roundtrip_test.csv";
  write_report_file(path, report);
  const EvaluationReport back = read_report_file(path);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.scenario_id == "stop_sign");
  CHECK(back.profile_label == "y5_fte");
  CHECK(back.rows[0].speed_mph == doctest::Approx(25.0));
  CHECK(back.rows[0].violations == 3);
  CHECK_FALSE(back.rows[0].p_value.has_value());
  CHECK(back.rows[1].p_value.has_value());
  CHECK(*back.rows[1].p_value == doctest::Approx(0.0123));
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_report_file("does_not_exist.csv"), IoError);
}

TEST_CASE("trajectory recording") {
  ScenarioConfig cfg = stop_sign_config();
  cfg.profile = perfect_profile();
  const TrialResult r = run_trial(cfg, 5, true);
  REQUIRE(!r.trajectory.empty());
  CHECK(r.trajectory.size() == r.frames);
  std::ostringstream out;
  write_trajectory(out, r);
  CHECK(out.str().rfind("t,x,v,tracked", 0) == 0);
}

TEST_CASE("empirical size histogram matches the analytic density") {
  const ObjectSpec sign{ObjectKind::stop_sign, 1.5, 3.0};
  const CameraModel cam{1000.0, 20.0, 4.0};
  const SizeDistResult r =
      size_distribution(sign, cam, mph_to_mps(25.0), 45.0, 30, 16, 99);
  CHECK(r.samples > 2000);
  CHECK(r.l1_distance < 0.05);
}

TEST_CASE("doubling the capture rate doubles frames but keeps the shape") {
  const ObjectSpec sign{ObjectKind::stop_sign, 1.5, 3.0};
  const CameraModel cam20{1000.0, 20.0, 4.0};
  const CameraModel cam40{1000.0, 40.0, 4.0};
  const SizeDistResult a = size_distribution(sign, cam20, mph_to_mps(25.0), 45.0, 30, 16, 99);
  const SizeDistResult b = size_distribution(sign, cam40, mph_to_mps(25.0), 45.0, 30, 16, 99);
  CHECK(static_cast<double>(b.samples) / static_cast<double>(a.samples) ==
        doctest::Approx(2.0).epsilon(0.02));
  double shape_l1 = 0.0;
  for (std::size_t i = 0; i < a.empirical.size(); ++i)
    shape_l1 += std::abs(a.empirical[i] - b.empirical[i]);
  CHECK(shape_l1 < 0.05);
  CHECK(b.l1_distance < 0.05);
}

TEST_CASE("size distribution input validation") {
  const ObjectSpec sign{ObjectKind::stop_sign, 1.5, 3.0};
  const CameraModel cam{1000.0, 20.0, 4.0};
  CHECK_THROWS_AS(size_distribution(sign, cam, 11.0, 45.0, 0, 16, 1), ParseError);
  CHECK_THROWS_AS(size_distribution(sign, cam, 0.0, 45.0, 30, 16, 1), std::domain_error);
}

TEST_CASE("scenario parsing catches mistakes") {
  std::istringstream unknown("object_kind = stop_sign\nbogus_key = 3\n");
  CHECK_THROWS_WITH_AS(parse_scenario(unknown, "x"), doctest::Contains("bogus_key"),
                       ParseError);
  std::istringstream missing_eq("object_kind stop_sign\n");
  CHECK_THROWS_AS(parse_scenario(missing_eq, "x"), ParseError);
  std::istringstream dup("trials = 3\ntrials = 4\n");
  CHECK_THROWS_AS(parse_scenario(dup, "x"), ParseError);
  std::istringstream both_speeds("speed_limit_mph = 30\nspeed_limit_mps = 13\n");
  CHECK_THROWS_AS(parse_scenario(both_speeds, "x"), ParseError);
  CHECK_THROWS_AS(load_scenario_file("no_such_scenario.cfg"), IoError);

  ScenarioConfig cfg = stop_sign_config();
  cfg.profile = DetectionProfile{"long", {{4.0, 60.0, 1.0}}};
  CHECK_THROWS_AS(cfg.validate_with_profile(), ParseError);  // horizon past road length
}
