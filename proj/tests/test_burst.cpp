#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "burster/burst.hpp"

using namespace burster;

namespace {

// Synthetic membrane trace: triangular spikes of height 40 above a -70
// baseline at given times, optional damped oscillation segments.
Trajectory synth(const std::vector<double>& spike_times, double t_end, double dt = 0.01,
                 double spike_half_width = 0.2) {
  Trajectory tr;
  tr.labels = {"V"};
  for (double t = 0; t <= t_end + 1e-12; t += dt) {
    double v = -70.0;
    for (double s : spike_times) {
      double d = std::fabs(t - s);
      if (d < spike_half_width) v = std::max(v, -70.0 + 40.0 * (1 - d / spike_half_width));
    }
    tr.times.push_back(t);
    tr.states.push_back(Vec{v});
  }
  return tr;
}

std::vector<double> times_from_isis(double t0, const std::vector<double>& isis) {
  std::vector<double> t{t0};
  for (double i : isis) t.push_back(t.back() + i);
  return t;
}

}  // namespace

TEST_CASE("constant trajectory yields an empty spike train") {
  Trajectory tr;
  tr.labels = {"V"};
  for (int i = 0; i < 100; ++i) {
    tr.times.push_back(i * 0.1);
    tr.states.push_back(Vec{-65.0});
  }
  CHECK(detect_spikes(tr, "V").spike_times.empty());
}

TEST_CASE("spike times land on the waveform maxima") {
  auto spikes = times_from_isis(2.0, {1, 1, 1});
  Trajectory tr = synth(spikes, 8.0);
  SpikeTrain st = detect_spikes(tr, "V");
  REQUIRE(st.spike_times.size() == spikes.size());
  for (size_t i = 0; i < spikes.size(); ++i)
    CHECK(st.spike_times[i] == doctest::Approx(spikes[i]).epsilon(0.01));
}

TEST_CASE("ISI pattern (1,1,1,20,1,1) splits into bursts of 4 and 3") {
  auto spikes = times_from_isis(2.0, {1, 1, 1, 20, 1, 1});
  Trajectory tr = synth(spikes, 32.0);
  SpikeTrain st = detect_spikes(tr, "V");
  REQUIRE(st.spike_times.size() == 7);
  BurstSegmentation seg = segment_bursts(st);
  REQUIRE(seg.bursts.size() == 2);
  CHECK(seg.bursts[0].spikes.size() == 4);
  CHECK(seg.bursts[1].spikes.size() == 3);
  CHECK(seg.gaps.size() == 1);
  CHECK(seg.gaps[0] == doctest::Approx(20.0).epsilon(0.01));
}

TEST_CASE("regular train stays one burst") {
  SpikeTrain st;
  st.spike_times = times_from_isis(0.0, std::vector<double>(9, 1.0));
  BurstSegmentation seg = segment_bursts(st);
  CHECK(seg.bursts.size() == 1);
  CHECK(!seg.has_singleton);
}

TEST_CASE("segmentation idempotence on a single burst") {
  SpikeTrain st;
  st.spike_times = times_from_isis(0.0, {1, 1.2, 0.9, 1.1});
  BurstSegmentation seg = segment_bursts(st);
  REQUIRE(seg.bursts.size() == 1);
  SpikeTrain again;
  again.spike_times = seg.bursts[0].spikes;
  CHECK(segment_bursts(again).bursts.size() == 1);
}

TEST_CASE("threshold perturbation of +-5 percent changes no spike count") {
  auto spikes = times_from_isis(2.0, {1, 1, 1, 20, 1, 1, 1, 20, 1, 1, 1});
  Trajectory tr = synth(spikes, 55.0);
  SpikeTrain base = detect_spikes(tr, "V");
  double range = 40.0;
  for (double d : {-0.05, 0.05}) {
    SpikeTrain p = detect_spikes(tr, "V", base.threshold + d * range);
    CHECK(p.spike_times.size() == base.spike_times.size());
  }
}

TEST_CASE("statistics unavailable below two bursts") {
  auto spikes = times_from_isis(2.0, {1, 1, 1});
  Trajectory tr = synth(spikes, 8.0);
  SpikeTrain st = detect_spikes(tr, "V");
  BurstSegmentation seg = segment_bursts(st);
  BurstStatistics b = burst_statistics(seg, tr, "V");
  CHECK(!b.available);
}

TEST_CASE("identical synthetic bursts give zero-variance periods") {
  std::vector<double> spikes;
  for (int b = 0; b < 4; ++b)
    for (double t : times_from_isis(2.0 + 30.0 * b, {1, 1, 1})) spikes.push_back(t);
  Trajectory tr = synth(spikes, 100.0);
  BurstSegmentation seg = segment_bursts(detect_spikes(tr, "V"));
  REQUIRE(seg.bursts.size() == 4);
  BurstStatistics st = burst_statistics(seg, tr, "V");
  REQUIRE(st.available);
  CHECK(st.spikes_per_burst == std::vector<int>{4, 4, 4});
  CHECK(st.mean_burst_duration == doctest::Approx(3.0).epsilon(0.01));
  CHECK(st.burst_period == doctest::Approx(30.0).epsilon(0.01));
  CHECK(st.duty_cycle == doctest::Approx(3.0 / 30.0).epsilon(0.02));
  CHECK(!st.onset_oscillations);
  CHECK(!st.offset_oscillations);
}

TEST_CASE("time rescaling scales durations and keeps counts") {
  std::vector<double> spikes;
  for (int b = 0; b < 4; ++b)
    for (double t : times_from_isis(2.0 + 30.0 * b, {1, 1, 1})) spikes.push_back(t);
  Trajectory tr = synth(spikes, 100.0);
  Trajectory tr10 = tr;
  for (auto& t : tr10.times) t *= 10.0;
  auto seg = segment_bursts(detect_spikes(tr, "V"));
  auto seg10 = segment_bursts(detect_spikes(tr10, "V"));
  BurstStatistics a = burst_statistics(seg, tr, "V");
  BurstStatistics b = burst_statistics(seg10, tr10, "V");
  REQUIRE(a.available);
  REQUIRE(b.available);
  CHECK(a.spikes_per_burst == b.spikes_per_burst);
  CHECK(b.mean_burst_duration == doctest::Approx(10.0 * a.mean_burst_duration));
  CHECK(b.burst_period == doctest::Approx(10.0 * a.burst_period));
  CHECK(b.duty_cycle == doctest::Approx(a.duty_cycle));
  CHECK(a.onset_oscillations == b.onset_oscillations);
}

TEST_CASE("damped sinusoid before burst onset raises the onset flag") {
  // Two bursts; insert a subthreshold ringing segment just before each onset.
  std::vector<double> spikes;
  for (int b = 0; b < 3; ++b)
    for (double t : times_from_isis(10.0 + 40.0 * b, {1, 1, 1})) spikes.push_back(t);
  Trajectory tr = synth(spikes, 140.0);
  for (size_t i = 0; i < tr.size(); ++i) {
    double t = tr.times[i];
    for (int b = 1; b < 3; ++b) {
      double onset = 10.0 + 40.0 * b;
      double dt = onset - t;
      if (dt > 0 && dt < 7.0 && tr.states[i][0] < -69.0)
        tr.states[i][0] += 8.0 * std::exp(-0.3 * dt) * std::cos(2.0 * M_PI * dt);
    }
  }
  BurstSegmentation seg = segment_bursts(detect_spikes(tr, "V"));
  REQUIRE(seg.bursts.size() == 3);
  BurstStatistics st = burst_statistics(seg, tr, "V");
  REQUIRE(st.available);
  CHECK(st.onset_oscillations);

  // Pure exponential relaxation instead: no flag.
  Trajectory mono = synth(spikes, 140.0);
  BurstStatistics st2 =
      burst_statistics(segment_bursts(detect_spikes(mono, "V")), mono, "V");
  REQUIRE(st2.available);
  CHECK(!st2.onset_oscillations);
  CHECK(!st2.offset_oscillations);
}
