#include "advsim/tracking.hpp"

#include <cmath>
#include <vector>

#include "advsim/rng.hpp"
#include "advsim/stats.hpp"
#include "doctest.h"

using namespace advsim;

namespace {

Detection hit_at(double distance, std::uint64_t frame = 0) {
  Detection d;
  d.detected = true;
  d.measured_distance_m = distance;
  d.frame_index = frame;
  return d;
}

Detection miss(std::uint64_t frame = 0) {
  Detection d;
  d.frame_index = frame;
  return d;
}

bool covariance_is_spd(const TrackState& s) {
  const double p00 = s.covariance[0], p01 = s.covariance[1], p11 = s.covariance[3];
  return p00 > 0.0 && (p00 * p11 - p01 * p01) > 0.0;
}

TrackerParams default_params() { return TrackerParams{}; }

}  // namespace

TEST_CASE("predict leaves a stationary relative state untouched") {
  TrackerParams p = default_params();
  p.process_noise_std = 1e-9;
  Tracker t(p);
  t.predict(0.05, 0.0);
  t.update(hit_at(30.0));
  // Created with ego speed 0 -> closing rate 0: stationary relative state.
  const double d0 = t.distance();
  CHECK(t.closing_rate() == doctest::Approx(0.0));
  t.predict(0.05, 0.0);
  CHECK(t.distance() == doctest::Approx(d0).epsilon(1e-12));
}

TEST_CASE("process noise inflates the covariance") {
  TrackerParams p = default_params();
  Tracker t(p);
  t.predict(0.05, 10.0);
  t.update(hit_at(30.0));
  const TrackState before = t.state();
  t.predict(0.05, 10.0);
  const TrackState after = t.state();
  CHECK(after.covariance[0] + after.covariance[3] >
        before.covariance[0] + before.covariance[3]);
}

TEST_CASE("closed-loop filter converges on noiseless measurements") {
  TrackerParams p = default_params();
  Tracker t(p);
  double truth = 50.0;
  const double closing = 8.0;
  const double dt = 0.05;
  for (int k = 0; k < 100; ++k) {
    truth -= closing * dt;
    t.predict(dt, 8.0);
    t.update(hit_at(truth));
  }
  CHECK(std::abs(t.distance() - truth) < 0.01);
  CHECK(t.closing_rate() == doctest::Approx(closing).epsilon(0.05));
}

TEST_CASE("lifecycle: H consecutive hits confirm") {
  Tracker t(default_params());  // (H, R) = (4, 6)
  for (int k = 0; k < 3; ++k) {
    t.predict(0.05, 10.0);
    t.update(hit_at(30.0));
    CHECK_FALSE(t.is_tracked());
  }
  t.predict(0.05, 10.0);
  t.update(hit_at(30.0));
  CHECK(t.is_tracked());
}

TEST_CASE("lifecycle: R consecutive misses delete") {
  Tracker t(default_params());
  for (int k = 0; k < 4; ++k) {
    t.predict(0.05, 10.0);
    t.update(hit_at(30.0));
  }
  REQUIRE(t.is_tracked());
  for (int k = 0; k < 5; ++k) {
    t.predict(0.05, 10.0);
    t.update(miss());
    CHECK(t.is_tracked());  // coasts until the R-th miss
  }
  t.predict(0.05, 10.0);
  t.update(miss());
  CHECK_FALSE(t.is_tracked());
  CHECK(t.state().status == TrackStatus::empty);
}

TEST_CASE("lifecycle: a miss resets the hit streak") {
  Tracker t(default_params());
  const std::vector<bool> seq = {true, true, false, true, true, true, true};
  std::vector<bool> tracked;
  for (bool h : seq) {
    t.predict(0.05, 10.0);
    t.update(h ? hit_at(30.0) : miss());
    tracked.push_back(t.is_tracked());
  }
  CHECK(tracked == std::vector<bool>{false, false, false, false, false, false, true});
}

TEST_CASE("is_tracked only reports confirmed") {
  Tracker t(default_params());
  CHECK_FALSE(t.is_tracked());  // empty
  for (int k = 0; k < 3; ++k) {  // H-1 hits: still tentative
    t.predict(0.05, 10.0);
    t.update(hit_at(30.0));
  }
  CHECK(t.state().status == TrackStatus::tentative);
  CHECK_FALSE(t.is_tracked());
}

TEST_CASE("lifecycle equals the brute-force oracle exhaustively") {
  // Every hit/miss sequence of length <= 12 for H, R in 1..4, driven through
  // the full tracker (gate and Kalman path included).
  for (int H = 1; H <= 4; ++H) {
    for (int R = 1; R <= 4; ++R) {
      TrackerParams p = default_params();
      p.hits_to_confirm = H;
      p.misses_to_delete = R;
      for (int len = 1; len <= 12; ++len) {
        for (int bits = 0; bits < (1 << len); ++bits) {
          std::vector<bool> seq;
          for (int i = 0; i < len; ++i) seq.push_back((bits >> i) & 1);
          const auto expected = lifecycle_oracle(seq, H, R);
          Tracker t(p);
          for (int i = 0; i < len; ++i) {
            t.predict(0.05, 0.0);
            t.update(seq[static_cast<std::size_t>(i)] ? hit_at(30.0) : miss());
            REQUIRE(t.state().status == expected[static_cast<std::size_t>(i)]);
          }
        }
      }
    }
  }
}

TEST_CASE("covariance stays symmetric positive definite") {
  RngStream rng(404);
  TrackerParams p = default_params();
  Tracker t(p);
  double truth = 60.0;
  std::uint64_t draw = 0;
  for (int step = 0; step < 10000; ++step) {
    const double ego = 5.0 + 10.0 * rng.uniform_at(draw++);
    truth -= ego * 0.05;
    if (truth < 10.0) truth = 60.0;
    t.predict(0.05, ego);
    if (rng.uniform_at(draw++) < 0.7) {
      const double z = truth + 0.5 * rng.normal_at(draw++);
      t.update(hit_at(z));
    } else {
      t.update(miss());
    }
    if (t.state().status != TrackStatus::empty) {
      REQUIRE(covariance_is_spd(t.state()));
      REQUIRE(t.state().covariance[1] == t.state().covariance[2]);
    }
  }
}

TEST_CASE("a measurement never increases the range variance") {
  RngStream rng(808);
  TrackerParams p = default_params();
  std::uint64_t draw = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Tracker t(p);
    t.predict(0.05, 8.0);
    t.update(hit_at(40.0 + rng.normal_at(draw++)));
    for (int k = 0; k < 20; ++k) {
      t.predict(0.05, 8.0);
      const double before = t.state().covariance[0];
      const double z = t.distance() + 0.3 * rng.normal_at(draw++);
      t.update(hit_at(z));
      if (t.state().status != TrackStatus::empty)
        CHECK(t.state().covariance[0] <= before + 1e-12);
    }
  }
}

TEST_CASE("confirmed-track death probability matches the absorbing chain") {
  // DP over the consecutive-miss counter; absorption at R misses.
  const auto death_within = [](double rate, int R, int frames) {
    std::vector<double> state(static_cast<std::size_t>(R), 0.0);
    state[0] = 1.0;
    double dead = 0.0;
    for (int f = 0; f < frames; ++f) {
      std::vector<double> next(state.size(), 0.0);
      for (int m = 0; m < R; ++m) {
        const double mass = state[static_cast<std::size_t>(m)];
        if (mass == 0.0) continue;
        next[0] += mass * rate;
        if (m + 1 >= R)
          dead += mass * (1.0 - rate);
        else
          next[static_cast<std::size_t>(m + 1)] += mass * (1.0 - rate);
      }
      state = std::move(next);
    }
    return dead;
  };

  // A run of R misses is the only way to die within exactly R frames.
  CHECK(death_within(0.904, 6, 6) == doctest::Approx(std::pow(0.096, 6)).epsilon(1e-12));
  CHECK(death_within(0.904, 6, 6) == doctest::Approx(7.8e-7).epsilon(0.01));
  CHECK(death_within(0.904, 6, 40) < 1e-5);  // survival over a whole approach

  // Monte Carlo agreement at parameters where death is common.
  const double rate = 0.3;
  const int R = 2, frames = 12, n = 20000;
  RngStream rng(515);
  int died = 0;
  std::uint64_t draw = 0;
  for (int i = 0; i < n; ++i) {
    int misses = 0;
    for (int f = 0; f < frames; ++f) {
      misses = rng.uniform_at(draw++) < rate ? 0 : misses + 1;
      if (misses >= R) {
        ++died;
        break;
      }
    }
  }
  const double expected = death_within(rate, R, frames);
  const double sigma = std::sqrt(expected * (1.0 - expected) / n);
  CHECK(std::abs(static_cast<double>(died) / n - expected) < 3.0 * sigma);
}

TEST_CASE("parameter validation") {
  TrackerParams p = default_params();
  p.hits_to_confirm = 0;
  CHECK_THROWS(p.validate());
  p = default_params();
  p.gate_sigma = 0.0;
  CHECK_THROWS(p.validate());
}
