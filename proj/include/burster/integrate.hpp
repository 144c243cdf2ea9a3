#pragma once
#include "burster/dynsys.hpp"

namespace burster {

// Classical fixed-step RK4; final partial step shortened to land on t_end.
Trajectory integrate_fixed(const DynamicalSystem& sys, const Vec& x0,
                           const IntegratorConfig& cfg);

// Dormand-Prince 5(4) embedded pair with proportional step control.
Trajectory integrate_adaptive(const DynamicalSystem& sys, const Vec& x0,
                              const IntegratorConfig& cfg);

inline Trajectory integrate(const DynamicalSystem& sys, const Vec& x0,
                            const IntegratorConfig& cfg) {
  return cfg.method == Method::rk4 ? integrate_fixed(sys, x0, cfg)
                                   : integrate_adaptive(sys, x0, cfg);
}

enum class Direction { rising, falling };

// Crossing times of one component through `level`, refined by linear interpolation.
std::vector<double> locate_threshold_crossings(const Trajectory& traj,
                                               const std::string& component,
                                               double level, Direction dir);
std::vector<double> locate_threshold_crossings(const Trajectory& traj,
                                               int component, double level,
                                               Direction dir);

}  // namespace burster
