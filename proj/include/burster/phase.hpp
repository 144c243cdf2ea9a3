#pragma once
// Phase-plane analysis for 2-D fast subsystems: nullclines (marching squares),
// equilibria (damped Newton), planar classification, limit-cycle detection via
// a Poincare return map, and basin probing.
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "burster/gridkernel.hpp"

namespace burster {

struct Polyline {
  std::vector<std::array<double, 2>> pts;
};

struct NullclineSet {
  std::vector<Polyline> curves_f1, curves_f2;
};

enum class EqClass {
  stable_node,
  unstable_node,
  saddle,
  stable_focus,
  unstable_focus,
  nonhyperbolic
};

std::string to_string(EqClass k);

struct Equilibrium {
  std::array<double, 2> location{};
  std::array<std::array<double, 2>, 2> jacobian{};
  std::complex<double> ev1, ev2;
  std::array<double, 2> saddle_unstable_dir{};  // unit eigenvector, saddles only
  std::array<double, 2> saddle_stable_dir{};
  EqClass klass = EqClass::nonhyperbolic;

  bool stable() const {
    return klass == EqClass::stable_node || klass == EqClass::stable_focus;
  }
  bool focus() const {
    return klass == EqClass::stable_focus || klass == EqClass::unstable_focus;
  }
};

struct LimitCycle {
  std::vector<double> ts;                        // sample times over one period
  std::vector<std::array<double, 2>> samples;    // closed (first ~ last)
  double period = 0;
  double v_min = 0, v_max = 0;                   // extrema of the first coordinate
  bool stable = true;
};

NullclineSet compute_nullclines(const DynamicalSystem& fast, const Window2D& w);

struct FindDiagnostics {
  int seeds = 0;
  int discarded = 0;
};

// Seeds from nullcline proximity; damped Newton with FD Jacobian and a step
// cap of 10% of the window span; duplicates merged; sorted by first coordinate.
std::vector<Equilibrium> find_equilibria(const DynamicalSystem& fast, const Window2D& w,
                                         FindDiagnostics* diag = nullptr);

// Refine/classify a single equilibrium from a given start (warm starts in sweeps).
std::optional<Equilibrium> refine_equilibrium(const DynamicalSystem& fast,
                                              const Window2D& w,
                                              std::array<double, 2> start);

EqClass classify(std::complex<double> e1, std::complex<double> e2, double jac_norm);

struct CycleCfg {
  double t_char = 1;            // putative period scale (model: ms, circuit: s)
  double transient_periods = 20;
  double probe_periods = 30;
  double max_time_factor = 400;  // total budget = factor * t_char
  double tol_frac = 1e-6;        // return-map convergence, fraction of window span
  double rel_tol = 1e-6, abs_tol = 1e-9;
};

std::optional<LimitCycle> find_limit_cycle(const DynamicalSystem& fast, const Vec& seed,
                                           bool want_stable, const Window2D& w,
                                           const CycleCfg& cfg,
                                           std::string* diag = nullptr);

enum class AttractorKind { equilibrium, limit_cycle, divergent };

struct BasinResult {
  AttractorKind kind = AttractorKind::divergent;
  int index = -1;  // which equilibrium / cycle
};

BasinResult basin_probe(const DynamicalSystem& fast, const Vec& point,
                        const std::vector<Equilibrium>& eqs,
                        const std::vector<LimitCycle>& cycles, const Window2D& w,
                        const CycleCfg& cfg);

}  // namespace burster
