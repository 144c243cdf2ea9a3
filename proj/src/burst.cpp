#include "burster/burst.hpp"

#include <algorithm>
#include <cmath>

#include "burster/integrate.hpp"

namespace burster {

SpikeTrain detect_spikes(const Trajectory& traj, const std::string& component,
                         double threshold) {
  SpikeTrain out;
  if (traj.size() < 2) return out;
  int c = traj.label_index(component);
  double vmin = 1e300, vmax = -1e300;
  for (auto& s : traj.states) {
    vmin = std::min(vmin, s[c]);
    vmax = std::max(vmax, s[c]);
  }
  if (vmax <= vmin) return out;  // fewer than 2 distinct values
  double thr = std::isfinite(threshold) ? threshold : vmin + 0.6 * (vmax - vmin);
  out.threshold = thr;

  auto rising = locate_threshold_crossings(traj, c, thr, Direction::rising);
  auto falling = locate_threshold_crossings(traj, c, thr, Direction::falling);
  size_t fi = 0;
  for (double r : rising) {
    while (fi < falling.size() && falling[fi] <= r) ++fi;
    if (fi >= falling.size()) break;
    double f = falling[fi];
    // Spike time = the component's maximum between the crossing pair.
    double best_t = r, best_v = -1e300;
    for (size_t i = 0; i < traj.size(); ++i) {
      if (traj.times[i] < r) continue;
      if (traj.times[i] > f) break;
      if (traj.states[i][c] > best_v) {
        best_v = traj.states[i][c];
        best_t = traj.times[i];
      }
    }
    out.spike_times.push_back(best_t);
  }
  return out;
}

BurstSegmentation segment_bursts(const SpikeTrain& train, double gap_factor,
                                 double floor) {
  BurstSegmentation seg;
  const auto& sp = train.spike_times;
  if (sp.empty()) return seg;
  std::vector<double> isi;
  for (size_t i = 0; i + 1 < sp.size(); ++i) isi.push_back(sp[i + 1] - sp[i]);
  double gap_thr = floor;
  if (!isi.empty()) {
    std::vector<double> tmp = isi;
    std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
    double med = tmp[tmp.size() / 2];
    gap_thr = std::max(gap_factor * med, floor);
  }
  seg.gap_threshold = gap_thr;
  Burst cur;
  cur.spikes.push_back(sp[0]);
  for (size_t i = 1; i < sp.size(); ++i) {
    if (sp[i] - sp[i - 1] > gap_thr && gap_thr > 0) {
      cur.start = cur.spikes.front();
      cur.end = cur.spikes.back();
      seg.bursts.push_back(cur);
      cur = Burst{};
    }
    cur.spikes.push_back(sp[i]);
  }
  cur.start = cur.spikes.front();
  cur.end = cur.spikes.back();
  seg.bursts.push_back(cur);
  for (size_t i = 0; i + 1 < seg.bursts.size(); ++i)
    seg.gaps.push_back(seg.bursts[i + 1].start - seg.bursts[i].end);
  for (auto& b : seg.bursts)
    if (b.spikes.size() == 1) seg.has_singleton = true;
  return seg;
}

std::vector<OscWindow> detect_subthreshold_oscillations(const Trajectory& traj,
                                                        const BurstSegmentation& seg,
                                                        const std::string& component,
                                                        double threshold,
                                                        double window_frac,
                                                        double noise_floor_frac) {
  int c = traj.label_index(component);
  double vmin = 1e300, vmax = -1e300;
  for (auto& s : traj.states) {
    vmin = std::min(vmin, s[c]);
    vmax = std::max(vmax, s[c]);
  }
  const double floor_abs = noise_floor_frac * (vmax - vmin);

  auto count_in = [&](double t0, double t1) -> int {
    std::vector<double> v;
    for (size_t i = 0; i < traj.size(); ++i)
      if (traj.times[i] >= t0 && traj.times[i] <= t1) v.push_back(traj.states[i][c]);
    if (v.size() < 5) return -1;  // undetermined
    double base = *std::min_element(v.begin(), v.end());
    int cnt = 0;
    for (size_t i = 1; i + 1 < v.size(); ++i)
      if (v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] < threshold &&
          v[i] > base + floor_abs)
        ++cnt;
    return cnt;
  };

  std::vector<OscWindow> out(seg.bursts.size());
  for (size_t b = 0; b < seg.bursts.size(); ++b) {
    OscWindow w;
    if (b > 0) {
      double gap = seg.bursts[b].start - seg.bursts[b - 1].end;
      double wlen = window_frac * gap;
      w.onset_extrema = count_in(seg.bursts[b].start - wlen, seg.bursts[b].start);
      w.onset_flag = w.onset_extrema >= 2;
    }
    if (b + 1 < seg.bursts.size()) {
      double gap = seg.bursts[b + 1].start - seg.bursts[b].end;
      double wlen = window_frac * gap;
      w.offset_extrema = count_in(seg.bursts[b].end, seg.bursts[b].end + wlen);
      w.offset_flag = w.offset_extrema >= 2;
    }
    out[b] = w;
  }
  return out;
}

BurstStatistics burst_statistics(const BurstSegmentation& seg, const Trajectory& traj,
                                 const std::string& component, double threshold) {
  BurstStatistics st;
  st.gap_factor = 3.0;
  st.noise_floor_frac = 0.02;
  if (seg.bursts.size() < 2) return st;  // statistics unavailable, not fabricated
  st.available = true;

  double thr = threshold;
  if (!std::isfinite(thr)) {
    int c = traj.label_index(component);
    double vmin = 1e300, vmax = -1e300;
    for (auto& s : traj.states) {
      vmin = std::min(vmin, s[c]);
      vmax = std::max(vmax, s[c]);
    }
    thr = vmin + 0.6 * (vmax - vmin);
  }
  st.threshold = thr;

  // First burst excluded (initial-condition transient).
  double dur = 0, ibi = 0, per = 0;
  int ndur = 0, nibi = 0, nper = 0;
  for (size_t b = 1; b < seg.bursts.size(); ++b) {
    st.spikes_per_burst.push_back(static_cast<int>(seg.bursts[b].spikes.size()));
    dur += seg.bursts[b].end - seg.bursts[b].start;
    ++ndur;
    ibi += seg.bursts[b].start - seg.bursts[b - 1].end;
    ++nibi;
    if (b + 1 < seg.bursts.size()) {
      per += seg.bursts[b + 1].start - seg.bursts[b].start;
      ++nper;
    }
  }
  st.mean_burst_duration = ndur ? dur / ndur : 0;
  st.mean_interburst_interval = nibi ? ibi / nibi : 0;
  st.burst_period = nper ? per / nper : st.mean_burst_duration + st.mean_interburst_interval;
  st.duty_cycle = st.burst_period > 0 ? st.mean_burst_duration / st.burst_period : 0;

  auto osc = detect_subthreshold_oscillations(traj, seg, component, thr);
  int on = 0, non = 0, off = 0, noff = 0;
  for (size_t b = 1; b < osc.size(); ++b) {
    if (osc[b].onset_extrema >= 0) {
      ++non;
      if (osc[b].onset_flag) ++on;
    }
    if (osc[b].offset_extrema >= 0) {
      ++noff;
      if (osc[b].offset_flag) ++off;
    }
  }
  st.onset_count = on;
  st.offset_count = off;
  st.onset_oscillations = non > 0 && 2 * on >= non;
  st.offset_oscillations = noff > 0 && 2 * off >= noff;
  return st;
}

}  // namespace burster
