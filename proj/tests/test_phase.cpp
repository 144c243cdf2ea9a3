#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "burster/neuron.hpp"
#include "burster/phase.hpp"

using namespace burster;

namespace {

DynamicalSystem planar(std::function<void(double, double, double&, double&)> f) {
  DynamicalSystem s;
  s.dim = 2;
  s.labels = {"x", "y"};
  s.rhs = [f](double, const Vec& v, Vec& dv) {
    double a, b;
    f(v[0], v[1], a, b);
    dv = Vec::zeros(2);
    dv[0] = a;
    dv[1] = b;
  };
  return s;
}

// Test-side oracle: 50x50 cells whose corners show both signs of f1 and f2.
std::vector<std::array<double, 2>> sign_scan_cells(const DynamicalSystem& s,
                                                   const Window2D& w) {
  const int N = 50;
  std::vector<std::array<double, 2>> out;
  auto f = [&](double x, double y) { return s.eval(0, Vec{x, y}); };
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      double x0 = w.x0 + w.span_x() * i / N, x1 = w.x0 + w.span_x() * (i + 1) / N;
      double y0 = w.y0 + w.span_y() * j / N, y1 = w.y0 + w.span_y() * (j + 1) / N;
      Vec c[4] = {f(x0, y0), f(x1, y0), f(x0, y1), f(x1, y1)};
      bool p1 = false, n1 = false, p2 = false, n2 = false;
      for (auto& v : c) {
        (v[0] >= 0 ? p1 : n1) = true;
        (v[1] >= 0 ? p2 : n2) = true;
      }
      if (p1 && n1 && p2 && n2) out.push_back({0.5 * (x0 + x1), 0.5 * (y0 + y1)});
    }
  return out;
}

void check_oracle_agreement(const DynamicalSystem& s, const Window2D& w,
                            const std::vector<Equilibrium>& eqs) {
  auto cells = sign_scan_cells(s, w);
  const double diag = std::hypot(w.span_x() / 50, w.span_y() / 50);
  // Every equilibrium is covered by a sign-change cell.
  for (auto& e : eqs) {
    double best = 1e300;
    for (auto& c : cells)
      best = std::min(best, std::hypot((c[0] - e.location[0]), (c[1] - e.location[1])));
    CHECK(best < diag);
  }
  // Every sign-change cell is near some equilibrium.
  for (auto& c : cells) {
    double best = 1e300;
    for (auto& e : eqs)
      best = std::min(best, std::hypot((c[0] - e.location[0]), (c[1] - e.location[1])));
    CHECK(best < diag);
  }
}

}  // namespace

TEST_CASE("nullclines of a linear system are the expected lines") {
  auto s = planar([](double x, double y, double& a, double& b) {
    a = x - 1;
    b = y + 2;
  });
  Window2D w{-5, 5, -5, 5, 200, 200};
  NullclineSet ns = compute_nullclines(s, w);
  REQUIRE(!ns.curves_f1.empty());
  REQUIRE(!ns.curves_f2.empty());
  for (auto& c : ns.curves_f1)
    for (auto& p : c.pts) CHECK(std::fabs(p[0] - 1.0) < 1e-8);
  for (auto& c : ns.curves_f2)
    for (auto& p : c.pts) CHECK(std::fabs(p[1] + 2.0) < 1e-8);
}

TEST_CASE("equilibrium of a linear system with exact Jacobian recovery") {
  auto s = planar([](double x, double y, double& a, double& b) {
    a = -1.0 * (x - 1) + 0.5 * (y + 2);
    b = 0.25 * (x - 1) - 2.0 * (y + 2);
  });
  Window2D w{-5, 5, -5, 5, 200, 200};
  auto eqs = find_equilibria(s, w);
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0].location[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(eqs[0].location[1] == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(eqs[0].klass == EqClass::stable_node);
  const double J[2][2] = {{-1.0, 0.5}, {0.25, -2.0}};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      CHECK(std::fabs(eqs[0].jacobian[r][c] - J[r][c]) < 1e-4 * 2.0);
}

TEST_CASE("classify textbook eigenvalue patterns") {
  using C = std::complex<double>;
  CHECK(classify(C(-1, 0), C(-2, 0), 2) == EqClass::stable_node);
  CHECK(classify(C(1, 0), C(2, 0), 2) == EqClass::unstable_node);
  CHECK(classify(C(-1, 0), C(2, 0), 2) == EqClass::saddle);
  CHECK(classify(C(-0.3, 2), C(-0.3, -2), 2) == EqClass::stable_focus);
  CHECK(classify(C(0.1, 3), C(0.1, -3), 3) == EqClass::unstable_focus);
  CHECK(classify(C(1e-9, 1), C(-1e-9, -1), 1) == EqClass::nonhyperbolic);
}

TEST_CASE("model A fast subsystem panel censuses") {
  InapIkIkmParams p = param_set_a();
  Window2D w{-90, 30, -0.1, 1.1, 400, 400};

  auto e1 = find_equilibria(fast_subsystem(p, 0.05), w);
  REQUIRE(e1.size() == 3);
  CHECK(e1[0].klass == EqClass::stable_node);
  CHECK(e1[1].klass == EqClass::saddle);
  CHECK(e1[2].klass == EqClass::unstable_focus);
  check_oracle_agreement(fast_subsystem(p, 0.05), w, e1);

  auto e2 = find_equilibria(fast_subsystem(p, -0.05), w);
  for (auto& e : e2) CHECK(!e.stable());
}

TEST_CASE("stable limit cycle of the Hopf normal form") {
  auto s = planar([](double x, double y, double& a, double& b) {
    double r2 = x * x + y * y;
    a = x - y - x * r2;
    b = x + y - y * r2;
  });
  Window2D w{-2, 2, -2, 2, 100, 100};
  CycleCfg cfg;
  cfg.t_char = 2 * M_PI;
  auto c = find_limit_cycle(s, Vec{1.5, 0.0}, true, w, cfg);
  REQUIRE(c.has_value());
  CHECK(c->stable);
  CHECK(c->period == doctest::Approx(2 * M_PI).epsilon(1e-3));
  CHECK(c->v_max == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(c->v_min == doctest::Approx(-1.0).epsilon(1e-3));
  // Closure: first and last samples coincide within 1e-5 of the window span.
  double dx = c->samples.front()[0] - c->samples.back()[0];
  double dy = c->samples.front()[1] - c->samples.back()[1];
  CHECK(std::hypot(dx, dy) < 1e-5 * w.span_x());
}

TEST_CASE("unstable cycle via time reversal with period duality") {
  auto s = planar([](double x, double y, double& a, double& b) {
    double r2 = x * x + y * y;
    a = -x - y + x * r2;
    b = x - y + y * r2;
  });
  Window2D w{-2, 2, -2, 2, 100, 100};
  CycleCfg cfg;
  cfg.t_char = 2 * M_PI;
  auto uc = find_limit_cycle(s, Vec{0.8, 0.0}, false, w, cfg);
  REQUIRE(uc.has_value());
  CHECK(!uc->stable);
  CHECK(uc->v_max == doctest::Approx(1.0).epsilon(5e-3));
  // The reversed system carries the same cycle as a stable one.
  auto sc = find_limit_cycle(reversed(s), Vec{0.8, 0.0}, true, w, cfg);
  REQUIRE(sc.has_value());
  CHECK(std::fabs(uc->period - sc->period) < 1e-3 * sc->period);
}

TEST_CASE("no cycle in a linear stable system") {
  auto s = planar([](double x, double y, double& a, double& b) {
    a = -x;
    b = -y;
  });
  Window2D w{-2, 2, -2, 2, 100, 100};
  CycleCfg cfg;
  cfg.t_char = 1.0;
  CHECK(!find_limit_cycle(s, Vec{1.0, 1.0}, true, w, cfg).has_value());
}

TEST_CASE("basin probe returns the equilibrium at its own location") {
  InapIkIkmParams p = param_set_a();
  Window2D w{-90, 30, -0.1, 1.1, 400, 400};
  DynamicalSystem fast = fast_subsystem(p, 0.05);
  auto eqs = find_equilibria(fast, w);
  REQUIRE(eqs.size() == 3);
  CycleCfg cfg;
  cfg.t_char = 20 * p.tau;
  BasinResult r = basin_probe(fast, Vec{eqs[0].location[0], eqs[0].location[1]}, eqs,
                              {}, w, cfg);
  CHECK(r.kind == AttractorKind::equilibrium);
  CHECK(r.index == 0);
}
