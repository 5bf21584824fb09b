#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "advsim/errors.hpp"
#include "advsim/evaluation.hpp"
#include "advsim/size_dist.hpp"
#include "advsim/stats.hpp"
#include "advsim/units.hpp"

namespace py = pybind11;
using namespace advsim;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed-loop perception-failure simulator and attack-planning toolkit";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<InfeasibleError>(m, "InfeasibleError");
  py::register_exception<IoError>(m, "IoError");

  py::enum_<ObjectKind>(m, "ObjectKind")
      .value("stop_sign", ObjectKind::stop_sign)
      .value("pedestrian", ObjectKind::pedestrian);

  py::enum_<Goal>(m, "Goal")
      .value("stop_line_violation", Goal::stop_line_violation)
      .value("pedestrian_collision", Goal::pedestrian_collision);

  py::enum_<TrackStatus>(m, "TrackStatus")
      .value("empty", TrackStatus::empty)
      .value("tentative", TrackStatus::tentative)
      .value("confirmed", TrackStatus::confirmed);

  py::class_<CameraModel>(m, "CameraModel")
      .def(py::init<>())
      .def(py::init([](double f, double rate, double oos) {
             return CameraModel{f, rate, oos};
           }),
           py::arg("focal_length_px"), py::arg("capture_rate_hz") = 20.0,
           py::arg("oos_distance_m") = 4.0)
      .def_readwrite("focal_length_px", &CameraModel::focal_length_px)
      .def_readwrite("capture_rate_hz", &CameraModel::capture_rate_hz)
      .def_readwrite("oos_distance_m", &CameraModel::oos_distance_m);

  py::class_<ObjectSpec>(m, "ObjectSpec")
      .def(py::init<>())
      .def(py::init([](ObjectKind kind, double size, double lateral) {
             return ObjectSpec{kind, size, lateral};
           }),
           py::arg("kind") = ObjectKind::stop_sign, py::arg("physical_size_m") = 1.5,
           py::arg("lateral_offset_m") = 3.0)
      .def_readwrite("kind", &ObjectSpec::kind)
      .def_readwrite("physical_size_m", &ObjectSpec::physical_size_m)
      .def_readwrite("lateral_offset_m", &ObjectSpec::lateral_offset_m);

  py::class_<VehiclePlant>(m, "VehiclePlant")
      .def(py::init<>())
      .def_readwrite("max_decel_mps2", &VehiclePlant::max_decel_mps2)
      .def_readwrite("comfort_decel_mps2", &VehiclePlant::comfort_decel_mps2)
      .def_readwrite("oos_distance_m", &VehiclePlant::oos_distance_m)
      .def_readwrite("max_accel_mps2", &VehiclePlant::max_accel_mps2);

  py::class_<TrackerParams>(m, "TrackerParams")
      .def(py::init<>())
      .def_readwrite("hits_to_confirm", &TrackerParams::hits_to_confirm)
      .def_readwrite("misses_to_delete", &TrackerParams::misses_to_delete)
      .def_readwrite("process_noise_std", &TrackerParams::process_noise_std)
      .def_readwrite("measurement_noise_std_m", &TrackerParams::measurement_noise_std_m)
      .def_readwrite("gate_sigma", &TrackerParams::gate_sigma);

  py::class_<RateRange>(m, "RateRange")
      .def(py::init([](double lo, double hi, double rate) {
             return RateRange{lo, hi, rate};
           }),
           py::arg("lo_m"), py::arg("hi_m"), py::arg("rate"))
      .def_readwrite("lo_m", &RateRange::lo_m)
      .def_readwrite("hi_m", &RateRange::hi_m)
      .def_readwrite("rate", &RateRange::rate);

  py::class_<DetectionProfile>(m, "DetectionProfile")
      .def(py::init<>())
      .def(py::init([](const std::string& label, const std::vector<RateRange>& ranges) {
             DetectionProfile p{label, ranges};
             p.validate();
             return p;
           }),
           py::arg("label"), py::arg("ranges"))
      .def_readwrite("label", &DetectionProfile::label)
      .def_readwrite("ranges", &DetectionProfile::ranges)
      .def("validate", &DetectionProfile::validate);

  py::class_<SystemCriticalRange>(m, "SystemCriticalRange")
      .def(py::init<>())
      .def_readwrite("d_min_m", &SystemCriticalRange::d_min_m)
      .def_readwrite("d_max_m", &SystemCriticalRange::d_max_m)
      .def_readwrite("s_min_px", &SystemCriticalRange::s_min_px)
      .def_readwrite("s_max_px", &SystemCriticalRange::s_max_px);

  py::class_<SamplingPlan::Entry>(m, "SamplingPlanEntry")
      .def_readonly("pixel_size_px", &SamplingPlan::Entry::pixel_size_px)
      .def_readonly("probability", &SamplingPlan::Entry::probability);

  py::class_<SamplingPlan>(m, "SamplingPlan")
      .def_readonly("entries", &SamplingPlan::entries)
      .def_readonly("critical_range", &SamplingPlan::critical_range)
      .def_readonly("provenance", &SamplingPlan::provenance);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("id", &ScenarioConfig::id)
      .def_readwrite("object", &ScenarioConfig::object)
      .def_readwrite("camera", &ScenarioConfig::camera)
      .def_readwrite("plant", &ScenarioConfig::plant)
      .def_readwrite("tracker", &ScenarioConfig::tracker)
      .def_readwrite("profile", &ScenarioConfig::profile)
      .def_readwrite("speed_limit_mps", &ScenarioConfig::speed_limit_mps)
      .def_readwrite("road_length_m", &ScenarioConfig::road_length_m)
      .def_readwrite("init_band_lo_m", &ScenarioConfig::init_band_lo_m)
      .def_readwrite("init_band_hi_m", &ScenarioConfig::init_band_hi_m)
      .def_readwrite("goal", &ScenarioConfig::goal)
      .def_readwrite("trials", &ScenarioConfig::trials)
      .def_readwrite("base_seed", &ScenarioConfig::base_seed)
      .def_readwrite("latch_stop", &ScenarioConfig::latch_stop);

  py::class_<TrialResult>(m, "TrialResult")
      .def_readonly("violated", &TrialResult::violated)
      .def_readonly("min_distance_to_line_m", &TrialResult::min_distance_to_line_m)
      .def_readonly("final_speed_at_line_mps", &TrialResult::final_speed_at_line_mps)
      .def_readonly("track_confirm_frame", &TrialResult::track_confirm_frame)
      .def_readonly("track_delete_frames", &TrialResult::track_delete_frames)
      .def_readonly("init_distance_m", &TrialResult::init_distance_m)
      .def_readonly("final_speed_mps", &TrialResult::final_speed_mps)
      .def_readonly("frames", &TrialResult::frames);

  py::class_<SpeedRow>(m, "SpeedRow")
      .def_readonly("speed_mph", &SpeedRow::speed_mph)
      .def_readonly("violations", &SpeedRow::violations)
      .def_readonly("trials", &SpeedRow::trials)
      .def_readonly("rate", &SpeedRow::rate);

  py::class_<SizeDistResult>(m, "SizeDistResult")
      .def_readonly("bin_lo_px", &SizeDistResult::bin_lo_px)
      .def_readonly("bin_hi_px", &SizeDistResult::bin_hi_px)
      .def_readonly("empirical", &SizeDistResult::empirical)
      .def_readonly("analytic", &SizeDistResult::analytic)
      .def_readonly("l1_distance", &SizeDistResult::l1_distance)
      .def_readonly("samples", &SizeDistResult::samples);

  m.def("mph_to_mps", &mph_to_mps, py::arg("mph"));
  m.def("mps_to_mph", &mps_to_mph, py::arg("mps"));
  m.def("focal_length_px_from_mm", &focal_length_px_from_mm, py::arg("focal_length_mm"),
        py::arg("pixel_pitch_mm"));
  m.def("size_at_distance", &size_at_distance, py::arg("obj"), py::arg("cam"),
        py::arg("distance_m"));
  m.def("distance_at_size", &distance_at_size, py::arg("obj"), py::arg("cam"),
        py::arg("pixel_size"));
  m.def("frame_count_cdf", &frame_count_cdf, py::arg("obj"), py::arg("cam"),
        py::arg("road_length_m"), py::arg("speed_mps"), py::arg("pixel_size"));
  m.def("size_pdf", &size_pdf, py::arg("obj"), py::arg("cam"), py::arg("speed_mps"),
        py::arg("pixel_size"));

  m.def("brake_distance", &brake_distance, py::arg("speed_mps"), py::arg("decel_mps2"));
  m.def("compute_d_max", &compute_d_max, py::arg("benign_profile"), py::arg("threshold"));
  m.def("compute_critical_range", &compute_critical_range, py::arg("plant"),
        py::arg("speed_mps"), py::arg("benign_profile"), py::arg("obj"), py::arg("cam"),
        py::arg("d_max_threshold") = 0.05);
  m.def("s1_weights", &s1_weights, py::arg("pixel_sizes"));
  m.def("build_sampling_plan", &build_sampling_plan, py::arg("critical_range"),
        py::arg("n_sizes"), py::arg("provenance") = "");

  m.def("load_profile_file", &load_profile_file, py::arg("path"), py::arg("label") = "");
  m.def("rate_at", &rate_at, py::arg("profile"), py::arg("distance_m"));
  m.def("asr_to_profile", &asr_to_profile, py::arg("asr_rows"), py::arg("label") = "");
  m.def("load_scenario_file", &load_scenario_file, py::arg("path"));

  m.def("normal_cdf", &normal_cdf, py::arg("x"));
  m.def("two_proportion_z", &two_proportion_z, py::arg("violations_a"), py::arg("trials_a"),
        py::arg("violations_b"), py::arg("trials_b"));
  m.def("fisher_exact_two_sided", &fisher_exact_two_sided, py::arg("violations_a"),
        py::arg("trials_a"), py::arg("violations_b"), py::arg("trials_b"));
  m.def(
      "lifecycle_oracle",
      [](const std::vector<bool>& seq, int h, int r) { return lifecycle_oracle(seq, h, r); },
      py::arg("hit_miss_sequence"), py::arg("hits_to_confirm"), py::arg("misses_to_delete"));

  m.def("run_trial", &run_trial, py::arg("cfg"), py::arg("seed"),
        py::arg("record_trajectory") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_eval", &run_eval, py::arg("cfg"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("size_distribution", &size_distribution, py::arg("obj"), py::arg("cam"),
        py::arg("speed_mps"), py::arg("road_length_m"), py::arg("runs"), py::arg("bins"),
        py::arg("seed"));
}
