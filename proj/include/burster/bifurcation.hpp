#pragma once
// One-parameter sweeps of the frozen slow variable, branch assembly, and the
// four bifurcation detectors (saddle-node, subcritical Andronov-Hopf, saddle
// homoclinic orbit, fold limit cycle), plus burster classification.
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "burster/phase.hpp"

namespace burster {

// A fast subsystem parameterized by the frozen slow variable.
struct FastFamily {
  std::string param_name;                          // "nM" or "VGS2"
  std::function<DynamicalSystem(double)> make;
  Window2D window;
  CycleCfg ccfg;
  int seed_grid = 60;  // grid used for fresh equilibrium seeding in sweeps
};

struct EqBranchPoint {
  double param = 0;
  Equilibrium eq;
};

struct EquilibriumBranch {
  std::vector<EqBranchPoint> points;
};

struct CycleBranchPoint {
  double param = 0;
  double v_min = 0, v_max = 0, period = 0;
};

struct CycleBranch {
  bool stable = true;
  std::vector<CycleBranchPoint> points;
};

enum class BifKind {
  saddle_node,
  subcritical_hopf,
  hopf_undetermined,
  saddle_homoclinic,
  fold_limit_cycle
};

std::string to_string(BifKind k);

struct BifurcationPoint {
  BifKind kind = BifKind::saddle_node;
  double param = 0;
  double lo = 0, hi = 0;  // bracketing evidence interval
  std::string evidence;
};

struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BifurcationDiagram {
  std::string param_name;
  double lo = 0, hi = 0;
  std::vector<double> params;                       // sweep grid
  std::vector<std::vector<Equilibrium>> census;     // equilibria per sweep step
  std::vector<EquilibriumBranch> eq_branches;
  std::vector<CycleBranch> cycle_branches;
  std::vector<BifurcationPoint> points;
  std::vector<std::pair<double, double>> bistable;
};

std::vector<EquilibriumBranch> sweep_equilibrium_branches(const FastFamily& fam,
                                                          double lo, double hi,
                                                          int steps);

std::vector<CycleBranch> sweep_cycle_branches(const FastFamily& fam, double lo,
                                              double hi, int steps);

// Bisection on node/saddle-pair existence. tol is a fraction of (hi - lo).
BifurcationPoint locate_fold(const FastFamily& fam, double lo, double hi,
                             double tol = 1e-4);

// Bisection on the focus eigenvalue real-part sign change; subcriticality
// asserted by a time-reversed unstable-cycle probe on the stable side.
BifurcationPoint locate_hopf(const FastFamily& fam, double lo, double hi,
                             double tol = 1e-4);

// Bisection on cycle existence with warm-started seeds; requires period
// blow-up and saddle-approach evidence, else reclassifies as fold limit cycle.
BifurcationPoint locate_homoclinic(const FastFamily& fam, double lo, double hi,
                                   double tol = 1e-4);

BifurcationPoint locate_fold_cycle(const FastFamily& fam, double lo, double hi,
                                   double tol = 1e-4);

BifurcationDiagram build_diagram(const FastFamily& fam, double lo, double hi,
                                 int steps = 300);

// Standalone cycle searches at one parameter value (fresh seeding):
// stable from a few window-spanning seeds, unstable from a perturbed stable
// focus on the time-reversed system.
std::optional<LimitCycle> find_stable_cycle_at(const FastFamily& fam, double param);
std::optional<LimitCycle> find_unstable_cycle_at(const FastFamily& fam, double param);

struct BursterClass {
  bool classified = false;
  std::string onset, offset;
  bool predicted_onset_oscillations = false;
  bool predicted_offset_oscillations = false;
  std::string diagnostics;
};

BursterClass classify_burster(const BifurcationDiagram& d);

}  // namespace burster
