import math
import os

import pytest

import advsim

DATA = os.environ.get("ADVSIM_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def profile(name):
    return advsim.load_profile_file(os.path.join(DATA, "profiles", name + ".csv"))


def test_pinhole_relations():
    obj = advsim.ObjectSpec(advsim.ObjectKind.stop_sign, 1.5, 3.0)
    cam = advsim.CameraModel(1000.0, 20.0, 4.0)
    assert advsim.size_at_distance(obj, cam, 15.0) == pytest.approx(100.0)
    assert advsim.distance_at_size(obj, cam, 100.0) == pytest.approx(15.0)
    pdf = advsim.size_pdf(obj, cam, 11.176, 100.0)
    assert pdf == pytest.approx(0.2684, abs=1e-4)
    assert advsim.size_pdf(obj, cam, 11.176, 200.0) / pdf == pytest.approx(0.25)


def test_brake_anchors():
    assert advsim.brake_distance(advsim.mph_to_mps(30.0), 6.0) == pytest.approx(15.0, abs=0.2)
    assert advsim.brake_distance(advsim.mph_to_mps(35.0), 6.0) == pytest.approx(20.4, abs=0.2)


def test_sampling_plan():
    assert advsim.s1_weights([30.0, 60.0]) == pytest.approx([0.8, 0.2])
    rng = advsim.compute_critical_range(
        advsim.VehiclePlant(),
        advsim.mph_to_mps(35.0),
        profile("y5_benign"),
        advsim.ObjectSpec(),
        advsim.CameraModel(),
    )
    assert rng.d_min_m == pytest.approx(20.4, abs=0.01)
    assert rng.d_max_m == pytest.approx(40.0)
    plan = advsim.build_sampling_plan(rng, 8)
    probs = [e.probability for e in plan.entries]
    assert sum(probs) == pytest.approx(1.0)
    assert probs == sorted(probs, reverse=True)


def test_infeasible_raises():
    with pytest.raises(advsim.InfeasibleError):
        advsim.compute_critical_range(
            advsim.VehiclePlant(),
            advsim.mph_to_mps(35.0),
            profile("y2_benign"),
            advsim.ObjectSpec(),
            advsim.CameraModel(),
        )


def test_statistics():
    assert advsim.two_proportion_z(0, 30, 3, 30) == pytest.approx(0.0755, abs=1e-3)
    assert advsim.two_proportion_z(0, 30, 4, 30) == pytest.approx(0.0385, abs=1e-3)
    assert advsim.normal_cdf(0.0) == pytest.approx(0.5)


def test_lifecycle_oracle():
    seq = [True, True, False] + [True] * 4
    out = advsim.lifecycle_oracle(seq, 4, 6)
    assert out[-1] == advsim.TrackStatus.confirmed
    assert all(s != advsim.TrackStatus.confirmed for s in out[:-1])


def test_closed_loop_trial():
    cfg = advsim.load_scenario_file(os.path.join(DATA, "scenarios", "stop_sign.cfg"))
    cfg.profile = profile("y5_benign")
    benign = advsim.run_trial(cfg, 41)
    assert not benign.violated

    cfg.profile = advsim.DetectionProfile(
        "blind", [advsim.RateRange(4.0, 45.0, 0.0)]
    )
    blind = advsim.run_trial(cfg, 41)
    assert blind.violated
    assert blind.final_speed_at_line_mps == pytest.approx(cfg.speed_limit_mps, rel=0.01)

    again = advsim.run_trial(cfg, 41)
    assert again.min_distance_to_line_m == blind.min_distance_to_line_m


def test_size_distribution_matches_theory():
    r = advsim.size_distribution(
        advsim.ObjectSpec(), advsim.CameraModel(), advsim.mph_to_mps(25.0), 45.0, 30, 16, 99
    )
    assert r.l1_distance < 0.05
    assert math.isclose(sum(r.analytic), 1.0, rel_tol=1e-9)
