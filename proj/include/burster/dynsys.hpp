#pragma once
// Core ODE representation: fixed-capacity state vector, dynamical system,
// trajectory storage, and integrator configuration.
#include <array>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace burster {

// Fixed-capacity (<=4) state vector; keeps integrator inner loops allocation-free.
struct Vec {
  std::array<double, 4> a{};
  int n = 0;

  Vec() = default;
  Vec(std::initializer_list<double> xs) {
    for (double x : xs) a[static_cast<size_t>(n++)] = x;
  }
  static Vec zeros(int d) {
    Vec v;
    v.n = d;
    return v;
  }
  double& operator[](int i) { return a[static_cast<size_t>(i)]; }
  double operator[](int i) const { return a[static_cast<size_t>(i)]; }
  int size() const { return n; }
  bool finite() const {
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(a[static_cast<size_t>(i)])) return false;
    return true;
  }
};

inline Vec operator+(Vec x, const Vec& y) {
  for (int i = 0; i < x.n; ++i) x[i] += y[i];
  return x;
}
inline Vec operator-(Vec x, const Vec& y) {
  for (int i = 0; i < x.n; ++i) x[i] -= y[i];
  return x;
}
inline Vec operator*(double s, Vec x) {
  for (int i = 0; i < x.n; ++i) x[i] *= s;
  return x;
}
inline double max_abs(const Vec& x) {
  double m = 0;
  for (int i = 0; i < x.n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

// Right-hand side f(t, x) -> dx; deterministic by contract.
using RhsFn = std::function<void(double, const Vec&, Vec&)>;

struct DynamicalSystem {
  int dim = 0;
  std::vector<std::string> labels;
  RhsFn rhs;

  Vec eval(double t, const Vec& x) const {
    Vec dx = Vec::zeros(dim);
    rhs(t, x, dx);
    return dx;
  }
  int label_index(const std::string& name) const {
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown state label: " + name);
  }
};

// Time-reversed copy (planar time reversal swaps cycle stability).
inline DynamicalSystem reversed(const DynamicalSystem& s) {
  DynamicalSystem r = s;
  RhsFn f = s.rhs;
  r.rhs = [f](double t, const Vec& x, Vec& dx) {
    f(t, x, dx);
    for (int i = 0; i < dx.n; ++i) dx[i] = -dx[i];
  };
  return r;
}

struct Trajectory {
  std::vector<std::string> labels;
  std::vector<double> times;
  std::vector<Vec> states;

  size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  int label_index(const std::string& name) const {
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown trajectory label: " + name);
  }
};

enum class Method { rk4, rk45 };

struct IntegratorConfig {
  Method method = Method::rk45;
  double t_start = 0.0;
  double t_end = 1.0;
  double fixed_step = 1e-3;      // rk4 only
  double rel_tol = 1e-6;         // rk45
  double abs_tol = 1e-9;         // rk45
  double max_step = 0.0;         // 0 -> (t_end - t_start)/1000
  double min_step = 0.0;         // 0 -> 1e-14 * (t_end - t_start)
  long max_steps = 50'000'000;
  int record_stride = 1;
};

struct IntegrationError : std::runtime_error {
  double last_time;
  IntegrationError(const std::string& msg, double t)
      : std::runtime_error(msg), last_time(t) {}
};
struct DivergedError : IntegrationError {
  using IntegrationError::IntegrationError;
};
struct StiffnessError : IntegrationError {
  using IntegrationError::IntegrationError;
};

}  // namespace burster
