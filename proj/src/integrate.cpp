#include "burster/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace burster {

namespace {

void check_finite(const Vec& x, double t) {
  if (!x.finite()) throw DivergedError("integration diverged (non-finite state)", t);
}

}  // namespace

Trajectory integrate_fixed(const DynamicalSystem& sys, const Vec& x0,
                           const IntegratorConfig& cfg) {
  if (cfg.t_end <= cfg.t_start) throw std::invalid_argument("t_end must exceed t_start");
  if (cfg.fixed_step <= 0) throw std::invalid_argument("fixed_step must be positive");
  if (x0.size() != sys.dim) throw std::invalid_argument("state dimension mismatch");

  Trajectory traj;
  traj.labels = sys.labels;
  double t = cfg.t_start;
  Vec x = x0;
  Vec k1 = Vec::zeros(sys.dim), k2 = k1, k3 = k1, k4 = k1;
  long step = 0;
  traj.times.push_back(t);
  traj.states.push_back(x);
  while (t < cfg.t_end) {
    double h = std::min(cfg.fixed_step, cfg.t_end - t);
    sys.rhs(t, x, k1);
    sys.rhs(t + 0.5 * h, x + (0.5 * h) * k1, k2);
    sys.rhs(t + 0.5 * h, x + (0.5 * h) * k2, k3);
    sys.rhs(t + h, x + h * k3, k4);
    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    check_finite(x, t);
    ++step;
    if (step > cfg.max_steps) throw IntegrationError("max_steps exceeded", t);
    if (step % cfg.record_stride == 0 || t >= cfg.t_end) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  }
  return traj;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Trajectory integrate_adaptive(const DynamicalSystem& sys, const Vec& x0,
                              const IntegratorConfig& cfg) {
  if (cfg.t_end <= cfg.t_start) throw std::invalid_argument("t_end must exceed t_start");
  if (cfg.rel_tol <= 0 || cfg.abs_tol <= 0) throw std::invalid_argument("tolerances must be positive");
  if (x0.size() != sys.dim) throw std::invalid_argument("state dimension mismatch");

  const double span = cfg.t_end - cfg.t_start;
  const double hmax = cfg.max_step > 0 ? cfg.max_step : span / 1000.0;
  const double hmin = cfg.min_step > 0 ? cfg.min_step : 1e-14 * span;

  Trajectory traj;
  traj.labels = sys.labels;
  double t = cfg.t_start;
  Vec x = x0;
  traj.times.push_back(t);
  traj.states.push_back(x);

  Vec k1 = Vec::zeros(sys.dim), k2 = k1, k3 = k1, k4 = k1, k5 = k1, k6 = k1, k7 = k1;
  sys.rhs(t, x, k1);  // FSAL: k1 carried over from the previous accepted step
  double h = std::min(hmax, span / 100.0);
  long steps = 0;
  long accepted = 0;

  while (t < cfg.t_end) {
    h = std::min(h, cfg.t_end - t);
    sys.rhs(t + c2 * h, x + h * (a21 * k1), k2);
    sys.rhs(t + c3 * h, x + h * (a31 * k1 + a32 * k2), k3);
    sys.rhs(t + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3), k4);
    sys.rhs(t + c5 * h, x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), k5);
    sys.rhs(t + h, x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k6);
    Vec xn = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    sys.rhs(t + h, xn, k7);
    Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double norm = 0;
    for (int i = 0; i < sys.dim; ++i) {
      double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(x[i]), std::fabs(xn[i]));
      double r = err[i] / sc;
      norm += r * r;
    }
    norm = std::sqrt(norm / sys.dim);

    if (!std::isfinite(norm)) {
      h *= 0.25;
      if (h < hmin) throw DivergedError("integration diverged", t);
      continue;
    }
    if (norm <= 1.0) {
      t += h;
      x = xn;
      k1 = k7;
      check_finite(x, t);
      ++accepted;
      if (accepted % cfg.record_stride == 0 || t >= cfg.t_end) {
        traj.times.push_back(t);
        traj.states.push_back(x);
      }
    }
    double fac = 0.9 * std::pow(std::max(norm, 1e-10), -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
    h = std::min(h, hmax);
    if (h < hmin && t < cfg.t_end)
      throw StiffnessError("step size underflow (stiffness)", t);
    if (++steps > cfg.max_steps) throw IntegrationError("max_steps exceeded", t);
  }
  if (traj.times.back() < cfg.t_end) {
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

std::vector<double> locate_threshold_crossings(const Trajectory& traj, int comp,
                                               double level, Direction dir) {
  std::vector<double> out;
  for (size_t i = 0; i + 1 < traj.size(); ++i) {
    double a = traj.states[i][comp], b = traj.states[i + 1][comp];
    bool hit = dir == Direction::rising ? (a < level && b >= level)
                                        : (a > level && b <= level);
    if (!hit) continue;
    double f = (level - a) / (b - a);
    out.push_back(traj.times[i] + f * (traj.times[i + 1] - traj.times[i]));
  }
  return out;
}

std::vector<double> locate_threshold_crossings(const Trajectory& traj,
                                               const std::string& component,
                                               double level, Direction dir) {
  return locate_threshold_crossings(traj, traj.label_index(component), level, dir);
}

}  // namespace burster
