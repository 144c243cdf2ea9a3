#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "burster/bifurcation.hpp"

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

// Saddle-node normal form: xdot = p + x^2, ydot = -y. Fold at p = 0.
FastFamily fold_family() {
  FastFamily f;
  f.param_name = "p";
  f.window = {-1, 1, -1, 1, 100, 100};
  f.ccfg.t_char = 1.0;
  f.seed_grid = 50;
  f.make = [](double p) {
    return planar([p](double x, double y, double& a, double& b) {
      a = p + x * x;
      b = -y;
    });
  };
  return f;
}

// Subcritical Hopf normal form: unstable cycle r = sqrt(-mu) for mu < 0.
FastFamily subhopf_family() {
  FastFamily f;
  f.param_name = "mu";
  f.window = {-1, 1, -1, 1, 100, 100};
  f.ccfg.t_char = 2 * M_PI;
  f.seed_grid = 50;
  f.make = [](double mu) {
    return planar([mu](double x, double y, double& a, double& b) {
      double r2 = x * x + y * y;
      a = mu * x - y + x * r2;
      b = x + mu * y + y * r2;
    });
  };
  return f;
}

// Fold-of-cycles normal form in q = -mu: rdot = r(-q + r^2 - r^4).
// Stable + unstable cycles for q < 1/4, none for q > 1/4; FLC at q = 0.25.
FastFamily flc_family() {
  FastFamily f;
  f.param_name = "q";
  f.window = {-2, 2, -2, 2, 100, 100};
  f.ccfg.t_char = 2 * M_PI;
  f.seed_grid = 50;
  f.make = [](double q) {
    return planar([q](double x, double y, double& a, double& b) {
      double r2 = x * x + y * y;
      double g = -q + r2 - r2 * r2;
      a = x * g - y;
      b = y * g + x;
    });
  };
  return f;
}

FastFamily linear_family() {
  FastFamily f;
  f.param_name = "p";
  f.window = {-1, 1, -1, 1, 100, 100};
  f.ccfg.t_char = 1.0;
  f.seed_grid = 50;
  f.make = [](double) {
    return planar([](double x, double y, double& a, double& b) {
      a = -x;
      b = -2 * y;
    });
  };
  return f;
}

}  // namespace

TEST_CASE("locate_fold pins the saddle-node normal form") {
  BifurcationPoint bp = locate_fold(fold_family(), -0.1, 0.1);
  CHECK(bp.kind == BifKind::saddle_node);
  CHECK(std::fabs(bp.param) < 1e-3);
  CHECK(bp.hi - bp.lo <= 1e-4 * 0.2 * 1.001);
}

TEST_CASE("locate_fold rejects a bracket without pair-existence change") {
  CHECK_THROWS_AS(locate_fold(fold_family(), -0.2, -0.1), BracketError);
  CHECK_THROWS_AS(locate_fold(linear_family(), -0.1, 0.1), BracketError);
}

TEST_CASE("locate_hopf pins the subcritical normal form and proves subcriticality") {
  BifurcationPoint bp = locate_hopf(subhopf_family(), -0.05, 0.05);
  CHECK(std::fabs(bp.param) < 1e-3);
  CHECK(bp.kind == BifKind::subcritical_hopf);
}

TEST_CASE("locate_hopf rejects a focus-free bracket") {
  CHECK_THROWS_AS(locate_hopf(fold_family(), -0.1, -0.01), BracketError);
}

TEST_CASE("locate_fold_cycle pins the fold-of-cycles normal form") {
  BifurcationPoint bp = locate_fold_cycle(flc_family(), 0.15, 0.35);
  CHECK(bp.kind == BifKind::fold_limit_cycle);
  CHECK(bp.param == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("locate_fold_cycle rejects brackets spanning an equilibrium bifurcation") {
  CHECK_THROWS_AS(locate_fold_cycle(fold_family(), -0.1, 0.1), BracketError);
}

TEST_CASE("cycle detectors reject a cycle-free bracket start") {
  CHECK_THROWS_AS(locate_homoclinic(linear_family(), -0.1, 0.1), BracketError);
}

TEST_CASE("constant family sweeps: one branch, no cycles") {
  auto brs = sweep_equilibrium_branches(linear_family(), -1, 1, 40);
  REQUIRE(brs.size() == 1);
  CHECK(brs[0].points.size() == 40);
  for (auto& p : brs[0].points) CHECK(p.eq.klass == EqClass::stable_node);
  CHECK(sweep_cycle_branches(linear_family(), -1, 1, 20).empty());
}

TEST_CASE("build_diagram on the fold family finds exactly one saddle-node") {
  BifurcationDiagram d = build_diagram(fold_family(), -0.5, 0.2, 60);
  REQUIRE(d.points.size() == 1);
  CHECK(d.points[0].kind == BifKind::saddle_node);
  CHECK(std::fabs(d.points[0].param) < 1e-3);
  // Fold alone cannot classify a burster.
  BursterClass bc = classify_burster(d);
  CHECK(!bc.classified);
  CHECK(!bc.diagnostics.empty());
}

TEST_CASE("diagram refinement stability") {
  BifurcationDiagram a = build_diagram(fold_family(), -0.5, 0.2, 60);
  BifurcationDiagram b = build_diagram(fold_family(), -0.5, 0.2, 120);
  REQUIRE(a.points.size() == 1);
  REQUIRE(b.points.size() == 1);
  CHECK(std::fabs(a.points[0].param - b.points[0].param) < 5 * 1e-4 * 0.7);
}

TEST_CASE("build_diagram on the subcritical Hopf family") {
  BifurcationDiagram d = build_diagram(subhopf_family(), -0.05, 0.05, 40);
  REQUIRE(d.points.size() >= 1);
  bool found = false;
  for (auto& p : d.points)
    if (p.kind == BifKind::subcritical_hopf && std::fabs(p.param) < 2e-3) found = true;
  CHECK(found);
}

TEST_CASE("standalone cycle finders on the fold-of-cycles family") {
  auto sc = find_stable_cycle_at(flc_family(), 0.15);
  REQUIRE(sc.has_value());
  CHECK(sc->stable);
  double r_outer = std::sqrt((1 + std::sqrt(1 - 4 * 0.15)) / 2);
  CHECK(sc->v_max == doctest::Approx(r_outer).epsilon(0.01));
  auto uc = find_unstable_cycle_at(flc_family(), 0.15);
  REQUIRE(uc.has_value());
  CHECK(!uc->stable);
  double r_inner = std::sqrt((1 - std::sqrt(1 - 4 * 0.15)) / 2);
  CHECK(uc->v_max == doctest::Approx(r_inner).epsilon(0.02));
  CHECK(!find_stable_cycle_at(flc_family(), 0.35).has_value());
}
