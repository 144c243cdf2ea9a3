#pragma once
// Spike detection, burst segmentation, burst statistics, and
// subthreshold-oscillation detection on full-system trajectories.
#include <optional>
#include <string>
#include <vector>

#include "burster/dynsys.hpp"

namespace burster {

struct SpikeTrain {
  std::vector<double> spike_times;
  double threshold = 0;
};

struct Burst {
  double start = 0, end = 0;
  std::vector<double> spikes;
};

struct BurstSegmentation {
  std::vector<Burst> bursts;
  std::vector<double> gaps;  // interburst gaps (end_i -> start_{i+1})
  double gap_threshold = 0;
  bool has_singleton = false;
};

struct BurstStatistics {
  bool available = false;  // needs >= 2 bursts
  std::vector<int> spikes_per_burst;
  double mean_burst_duration = 0;
  double mean_interburst_interval = 0;
  double burst_period = 0;
  double duty_cycle = 0;
  bool onset_oscillations = false, offset_oscillations = false;
  int onset_count = 0, offset_count = 0;  // windows flagged
  // config fingerprint
  double threshold = 0, gap_factor = 3.0, noise_floor_frac = 0.02;
};

struct OscWindow {
  int onset_extrema = -1, offset_extrema = -1;  // -1 = undetermined
  bool onset_flag = false, offset_flag = false;
};

// Auto threshold (when threshold is NaN): min + 0.6*(max - min).
SpikeTrain detect_spikes(const Trajectory& traj, const std::string& component,
                         double threshold = std::nan(""));

// Gaps > max(gap_factor * median ISI, floor) split bursts.
BurstSegmentation segment_bursts(const SpikeTrain& train, double gap_factor = 3.0,
                                 double floor = 0.0);

BurstStatistics burst_statistics(const BurstSegmentation& seg, const Trajectory& traj,
                                 const std::string& component,
                                 double threshold = std::nan(""));

// Local maxima below threshold exceeding a noise floor, counted in the
// quiescent windows adjacent to each burst (clipped to 25% of the gap).
std::vector<OscWindow> detect_subthreshold_oscillations(const Trajectory& traj,
                                                        const BurstSegmentation& seg,
                                                        const std::string& component,
                                                        double threshold,
                                                        double window_frac = 0.25,
                                                        double noise_floor_frac = 0.02);

}  // namespace burster
