#include <doctest.h>

#include <cmath>
#include <random>

#include "ltesense/detect.hpp"
#include "ltesense/sim.hpp"

using namespace ltesense;

namespace {

DopplerTrace trace_from(std::vector<double> v, double dt = 0.1) {
  DopplerTrace t;
  for (std::size_t i = 0; i < v.size(); ++i) {
    t.times.push_back(dt * static_cast<double>(i));
    t.dnu_hz.push_back(v[i] / 0.1428);
    t.v_delta.push_back(v[i]);
  }
  return t;
}

DetectorConfig absolute_cfg(double v_min, double sep = 0.5) {
  DetectorConfig cfg;
  cfg.threshold_mode = ThresholdMode::absolute;
  cfg.v_min = v_min;
  cfg.min_separation = sep;
  return cfg;
}

/// Exhaustive scan oracle: every interior strict local maximum above the
/// threshold, without any separation logic.
std::vector<std::size_t> brute_force_maxima(const DopplerTrace& t, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < t.v_delta.size(); ++i) {
    const double prev = std::abs(t.v_delta[i - 1]);
    const double here = std::abs(t.v_delta[i]);
    const double next = std::abs(t.v_delta[i + 1]);
    if (here > threshold && prev < here && here >= next) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("detect_events on trivial traces") {
  CHECK(detect_events(trace_from(std::vector<double>(50, 0.0)), absolute_cfg(0.1)).empty());

  // single triangular pulse
  std::vector<double> v(41, 0.0);
  for (int i = 0; i <= 10; ++i) {
    v[15 + i] = 0.2 * (1.0 - i / 10.0);
    v[15 - i] = 0.2 * (1.0 - i / 10.0);
  }
  const std::vector<MotionEvent> events = detect_events(trace_from(v), absolute_cfg(0.1));
  REQUIRE(events.size() == 1);
  CHECK(events[0].t_peak == doctest::Approx(1.5));
  CHECK(events[0].v_delta_peak == doctest::Approx(0.2));
  CHECK(events[0].direction == Direction::rx0_to_rx1);
}

TEST_CASE("three spliced crossings are found at their crossing times") {
  // three simulated passes, time-shifted and concatenated
  SimulationConfig c;
  c.geometry.rx0 = {-0.025, 0.0};
  c.geometry.rx1 = {0.025, 0.0};
  c.geometry.reflector_y = 0.05;
  c.geometry.reflector_x0 = -0.15;
  c.geometry.velocity_x = 0.1;
  c.geometry.wavelength = 0.1428;
  c.sample_interval = 1e-3;
  c.duration = 3.0;

  DopplerTrace spliced;
  std::vector<double> crossings;
  for (int pass = 0; pass < 3; ++pass) {
    const GroundTruth truth = synthesize_pair(c).truth;
    const double offset = 3.2 * pass;
    crossings.push_back(*truth.crossing_time_s + offset);
    for (std::size_t i = 0; i < truth.times.size(); ++i) {
      spliced.times.push_back(truth.times[i] + offset);
      spliced.dnu_hz.push_back(truth.dnu_hz[i]);
      spliced.v_delta.push_back(truth.dnu_hz[i] * c.geometry.wavelength);
    }
  }

  DetectorConfig cfg;  // default robust threshold
  cfg.min_separation = 1.0;
  const std::vector<MotionEvent> events = detect_events(spliced, cfg);
  REQUIRE(events.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(events[i].t_peak - crossings[i]) <= c.sample_interval);
    CHECK(events[i].direction == Direction::rx0_to_rx1);
  }

  // against the exhaustive extrema oracle: each detection is a true local
  // maximum, and no stronger unclaimed maximum exists far from the kept ones
  const std::vector<std::size_t> maxima = brute_force_maxima(spliced, 0.0);
  for (const MotionEvent& e : events) {
    bool found = false;
    for (std::size_t m : maxima) found = found || spliced.times[m] == e.t_peak;
    CHECK(found);
  }
}

TEST_CASE("direction antisymmetry (property)") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> noise(0.0, 0.02);
  std::vector<double> v(600, 0.0);
  for (auto& x : v) x = noise(rng);
  for (int i = 0; i < 60; ++i) v[100 + i] += 0.3 * std::sin(i * M_PI / 60.0);
  // build and negate
  DopplerTrace pos = trace_from(v, 0.01);
  DopplerTrace neg = pos;
  for (auto& x : neg.v_delta) x = -x;
  for (auto& x : neg.dnu_hz) x = -x;

  const DetectorConfig cfg = absolute_cfg(0.1, 0.2);
  const auto ev_pos = detect_events(pos, cfg);
  const auto ev_neg = detect_events(neg, cfg);
  REQUIRE(ev_pos.size() == ev_neg.size());
  for (std::size_t i = 0; i < ev_pos.size(); ++i) {
    CHECK(ev_pos[i].t_peak == ev_neg[i].t_peak);
    CHECK(ev_pos[i].v_delta_peak == -ev_neg[i].v_delta_peak);
    CHECK(ev_pos[i].direction != ev_neg[i].direction);
    BaselineGeometry g;
    CHECK(estimate_speed(ev_pos[i], g) == estimate_speed(ev_neg[i], g));
  }
}

TEST_CASE("raising the threshold never adds events (property)") {
  std::mt19937_64 rng(67);
  std::normal_distribution<double> noise(0.0, 0.1);
  for (int round = 0; round < 20; ++round) {
    std::vector<double> v(300);
    for (auto& x : v) x = noise(rng);
    const DopplerTrace t = trace_from(v, 0.05);
    std::size_t prev = SIZE_MAX;
    for (double thr : {0.05, 0.1, 0.15, 0.2, 0.3, 0.5}) {
      const std::size_t count = detect_events(t, absolute_cfg(thr, 0.2)).size();
      CHECK(count <= prev);
      prev = count;
    }
  }
}

TEST_CASE("estimate_speed reproduces the worked pedestrian and vehicle numbers") {
  MotionEvent e;
  BaselineGeometry pedestrian{0.77, 0.025, 0.1428};
  e.v_delta_peak = 0.201;
  CHECK(estimate_speed(e, pedestrian) == doctest::Approx(3.0954).epsilon(1e-6));
  e.v_delta_peak = 0.1229;
  CHECK(estimate_speed(e, pedestrian) == doctest::Approx(1.89266).epsilon(1e-6));

  BaselineGeometry vehicle{2.25, 0.025, 0.1428};
  e.v_delta_peak = 0.2155;
  CHECK(estimate_speed(e, vehicle) == doctest::Approx(9.6975).epsilon(1e-6));
  e.v_delta_peak = 0.0;
  CHECK(estimate_speed(e, vehicle) == 0.0);
}

TEST_CASE("estimate_speed is homogeneous in the peak and geometry (property)") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> dist(0.05, 3.0);
  for (int i = 0; i < 100; ++i) {
    MotionEvent e;
    e.v_delta_peak = dist(rng);
    BaselineGeometry g{dist(rng), dist(rng), 0.1428};
    const double base = estimate_speed(e, g);
    MotionEvent e2 = e;
    e2.v_delta_peak *= 2.0;
    CHECK(estimate_speed(e2, g) == doctest::Approx(2.0 * base));
    BaselineGeometry g2 = g;
    g2.r_m *= 3.0;
    CHECK(estimate_speed(e, g2) == doctest::Approx(3.0 * base));
    BaselineGeometry g3 = g;
    g3.half_separation *= 2.0;
    CHECK(estimate_speed(e, g3) == doctest::Approx(0.5 * base));
  }
}

TEST_CASE("classify_speed bins by |peak| with ties going down") {
  std::vector<MotionEvent> events(3);
  events[0].v_delta_peak = 0.05;
  events[1].v_delta_peak = -0.15;  // sign must not matter
  events[2].v_delta_peak = 0.3;
  const std::vector<double> boundaries{0.1, 0.2};
  classify_speed(events, boundaries);
  CHECK(events[0].speed_class == 0);
  CHECK(events[1].speed_class == 1);
  CHECK(events[2].speed_class == 2);

  std::vector<MotionEvent> tie(1);
  tie[0].v_delta_peak = 0.1;
  classify_speed(tie, boundaries);
  CHECK(tie[0].speed_class == 0);

  std::vector<MotionEvent> none;
  classify_speed(none, boundaries);
  CHECK(none.empty());

  std::vector<double> bad{0.2, 0.1};
  CHECK_THROWS_AS(classify_speed(events, bad), ProcessingError);
}

TEST_CASE("calibrate_boundaries takes midpoints of class medians") {
  std::vector<LabeledPeak> two{{0.1, 0}, {0.3, 1}};
  CHECK(calibrate_boundaries(two) == std::vector<double>{0.2});

  std::vector<LabeledPeak> three{{0.1, 0}, {0.2, 1}, {0.4, 2}};
  const std::vector<double> b = calibrate_boundaries(three);
  REQUIRE(b.size() == 2);
  CHECK(b[0] == doctest::Approx(0.15));
  CHECK(b[1] == doctest::Approx(0.3));

  std::vector<LabeledPeak> missing{{0.1, 0}, {0.4, 2}};
  CHECK_THROWS_AS(calibrate_boundaries(missing), ProcessingError);

  std::vector<LabeledPeak> equal{{0.1, 0}, {0.1, 1}};
  CHECK_THROWS_AS(calibrate_boundaries(equal), ProcessingError);
}

TEST_CASE("three-speed classification against exhaustive binning (property)") {
  std::mt19937_64 rng(73);
  std::normal_distribution<double> jitter(1.0, 0.05);
  const double speeds[3] = {0.0333, 0.1, 0.1667};

  std::vector<LabeledPeak> training;
  std::vector<MotionEvent> events;
  std::vector<int> truth_class;
  for (int i = 0; i < 120; ++i) {
    const int cls = i % 3;
    const double peak = speeds[cls] * 0.45 * jitter(rng);  // session gain 0.45
    training.push_back({peak, cls});
    MotionEvent e;
    e.v_delta_peak = peak;
    events.push_back(e);
    truth_class.push_back(cls);
  }
  const std::vector<double> boundaries = calibrate_boundaries(training);
  classify_speed(events, boundaries);

  int correct = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    // exhaustive assignment oracle
    int expected = 0;
    for (double b : boundaries)
      if (b < std::abs(events[i].v_delta_peak)) ++expected;
    CHECK(events[i].speed_class == expected);
    if (events[i].speed_class == truth_class[i]) ++correct;
  }
  CHECK(static_cast<double>(correct) / events.size() >= 0.9);
}
