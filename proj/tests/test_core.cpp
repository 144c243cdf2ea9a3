#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "burster/gridkernel.hpp"
#include "burster/integrate.hpp"
#include "burster/neuron.hpp"

using namespace burster;

namespace {

DynamicalSystem decay() {
  DynamicalSystem s;
  s.dim = 1;
  s.labels = {"x"};
  s.rhs = [](double, const Vec& x, Vec& dx) { dx[0] = -x[0]; };
  return s;
}

DynamicalSystem harmonic() {
  DynamicalSystem s;
  s.dim = 2;
  s.labels = {"x", "y"};
  s.rhs = [](double, const Vec& x, Vec& dx) {
    dx[0] = x[1];
    dx[1] = -x[0];
  };
  return s;
}

double rk4_decay_error(double h) {
  IntegratorConfig c;
  c.method = Method::rk4;
  c.t_end = 1.0;
  c.fixed_step = h;
  Trajectory tr = integrate(decay(), Vec{1.0}, c);
  return std::fabs(tr.states.back()[0] - std::exp(-1.0));
}

}  // namespace

TEST_CASE("rk4 exponential decay hits e^-1") {
  CHECK(rk4_decay_error(1e-3) < 1e-9);
}

TEST_CASE("rk4 constant rhs gives constant trajectory") {
  DynamicalSystem s;
  s.dim = 1;
  s.labels = {"x"};
  s.rhs = [](double, const Vec&, Vec& dx) { dx[0] = 0.0; };
  IntegratorConfig c;
  c.method = Method::rk4;
  c.t_end = 2.0;
  c.fixed_step = 1e-2;
  Trajectory tr = integrate(s, Vec{7.0}, c);
  for (auto& st : tr.states) CHECK(st[0] == 7.0);
  CHECK(tr.times.back() == doctest::Approx(2.0));
}

TEST_CASE("rk4 harmonic oscillator closes after 2*pi") {
  IntegratorConfig c;
  c.method = Method::rk4;
  c.t_end = 2.0 * M_PI;
  c.fixed_step = 1e-3;
  Trajectory tr = integrate(harmonic(), Vec{1.0, 0.0}, c);
  CHECK(std::fabs(tr.states.back()[0] - 1.0) < 1e-8);
  CHECK(std::fabs(tr.states.back()[1]) < 1e-8);
}

TEST_CASE("rk4 global error drops ~16x when halving h") {
  double e1 = rk4_decay_error(0.04);
  double e2 = rk4_decay_error(0.02);
  double ratio = e1 / e2;
  CHECK(ratio > 16.0 * 0.8);
  CHECK(ratio < 16.0 * 1.2);
}

TEST_CASE("adaptive integrator matches closed form and rk4") {
  IntegratorConfig c;
  c.t_end = 1.0;
  c.rel_tol = 1e-8;
  c.abs_tol = 1e-12;
  Trajectory tr = integrate(decay(), Vec{1.0}, c);
  CHECK(std::fabs(tr.states.back()[0] - std::exp(-1.0)) < 1e-6);

  // Agreement with rk4 on the model over a burst-scale window.
  InapIkIkmParams p = param_set_a();
  DynamicalSystem m = model_system(p);
  Vec x0 = model_default_state(p);
  IntegratorConfig ca;
  ca.t_end = 50.0;
  ca.rel_tol = 1e-8;
  ca.abs_tol = 1e-10;
  ca.max_step = 0.01;
  IntegratorConfig cf;
  cf.method = Method::rk4;
  cf.t_end = 50.0;
  cf.fixed_step = 1e-4;
  Vec a = integrate(m, x0, ca).states.back();
  Vec f = integrate(m, x0, cf).states.back();
  double scale = std::max(max_abs(a), 1.0);
  CHECK(max_abs(a - f) < 10 * 1e-6 * scale);
}

TEST_CASE("forward-then-backward integration returns to x0") {
  IntegratorConfig c;
  c.t_end = 3.0;
  c.rel_tol = 1e-8;
  c.abs_tol = 1e-12;
  Trajectory fwd = integrate(harmonic(), Vec{1.0, 0.25}, c);
  Trajectory bwd = integrate(reversed(harmonic()), fwd.states.back(), c);
  CHECK(max_abs(bwd.states.back() - Vec{1.0, 0.25}) < 100 * c.rel_tol);
}

TEST_CASE("integration is deterministic") {
  InapIkIkmParams p = param_set_a();
  DynamicalSystem m = model_system(p);
  IntegratorConfig c;
  c.t_end = 20.0;
  c.max_step = 0.02;
  Trajectory a = integrate(m, model_default_state(p), c);
  Trajectory b = integrate(m, model_default_state(p), c);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a.times[i] == b.times[i]);
    for (int k = 0; k < 3; ++k) CHECK(a.states[i][k] == b.states[i][k]);
  }
}

TEST_CASE("divergence raises IntegrationError with last valid time") {
  DynamicalSystem s;
  s.dim = 1;
  s.labels = {"x"};
  s.rhs = [](double, const Vec& x, Vec& dx) { dx[0] = x[0] * x[0]; };  // blow-up at t=1
  IntegratorConfig c;
  c.method = Method::rk4;
  c.t_end = 2.0;
  c.fixed_step = 1e-3;
  CHECK_THROWS_AS(integrate(s, Vec{1.0}, c), IntegrationError);
}

TEST_CASE("threshold crossings of a sampled sine land at multiples of 2*pi") {
  Trajectory tr;
  tr.labels = {"x"};
  const double dt = 1e-3;
  for (int i = 0; i <= 20000; ++i) {
    double t = i * dt;
    tr.times.push_back(t);
    tr.states.push_back(Vec{std::sin(t)});
  }
  auto cr = locate_threshold_crossings(tr, "x", 0.0, Direction::rising);
  REQUIRE(cr.size() >= 3);
  for (size_t k = 0; k < cr.size(); ++k)
    CHECK(std::fabs(cr[k] - cr[0] - k * 2.0 * M_PI) < dt);

  Trajectory flat;
  flat.labels = {"x"};
  flat.times = {0, 1, 2};
  flat.states = {Vec{1.0}, Vec{1.0}, Vec{1.0}};
  CHECK(locate_threshold_crossings(flat, "x", 0.0, Direction::rising).empty());
}

TEST_CASE("serial and parallel grid kernels agree bitwise") {
  InapIkIkmParams p = param_set_a();
  DynamicalSystem fast = fast_subsystem(p, 0.05);
  Window2D w{-90, 30, -0.1, 1.1, 137, 91};
  GridField a = evaluate_grid_serial(fast, w);
  GridField b = evaluate_grid_parallel(fast, w);
  REQUIRE(a.f1.size() == b.f1.size());
  for (size_t i = 0; i < a.f1.size(); ++i) {
    CHECK(a.f1[i] == b.f1[i]);
    CHECK(a.f2[i] == b.f2[i]);
  }
}
