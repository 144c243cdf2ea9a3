// g_M calibration: log-grid search + golden-section refinement against target
// fast-subsystem bifurcation locations, gated by a full-model burst/rest check.
#include <cmath>
#include <sstream>

#include "burster/bifurcation.hpp"
#include "burster/integrate.hpp"
#include "burster/neuron.hpp"

namespace burster {

namespace {

FastFamily model_family(const InapIkIkmParams& p) {
  FastFamily f;
  f.param_name = "nM";
  f.window = {-90, 30, -0.1, 1.1, 400, 400};
  f.ccfg.t_char = 20 * p.tau;
  f.ccfg.rel_tol = 1e-6;
  f.ccfg.abs_tol = 1e-9;
  f.seed_grid = 60;
  InapIkIkmParams pc = p;
  f.make = [pc](double nM) { return fast_subsystem(pc, nM); };
  return f;
}

struct Detected {
  double fold = std::nan("");
  double sho = std::nan("");
  double hopf = std::nan("");
};

// Detect the targeted bifurcation locations for one g_M; the slow variable
// enters only as g_M*nM, so the scan window is scaled by 1/g_M.
Detected detect(const InapIkIkmParams& base, double g, const CalibrationTargets& t) {
  InapIkIkmParams p = base;
  p.g_M = g;
  FastFamily fam = model_family(p);
  const double lo = -0.02 / g * 5.0 - 0.01;
  const double hi = 4.0 / g;
  Detected d;

  if (std::isfinite(t.fold) || std::isfinite(t.sho)) {
    // Coarse scan for the node/saddle pair region.
    const int N = 40;
    int prev = -1;
    double bra = std::nan(""), brb = std::nan("");
    double pair_hi = std::nan("");
    for (int i = 0; i <= N; ++i) {
      double pm = lo + (hi - lo) * i / N;
      int c = 0;
      for (auto& e : find_equilibria(fam.make(pm), fam.window))
        if (e.klass == EqClass::stable_node || e.klass == EqClass::saddle ||
            e.klass == EqClass::unstable_node)
          ++c;
      if (prev >= 0 && (prev >= 2) != (c >= 2)) {
        if (!std::isfinite(bra)) {
          bra = lo + (hi - lo) * (i - 1) / N;
          brb = pm;
        } else {
          pair_hi = pm;  // pair also disappears at high nM (not targeted)
        }
      }
      prev = c;
    }
    if (std::isfinite(bra)) {
      try {
        d.fold = locate_fold(fam, bra, brb, 1e-3).param;
      } catch (const BracketError&) {
      }
    }
    (void)pair_hi;
  }

  if (std::isfinite(t.sho)) {
    try {
      double a = std::isfinite(d.fold) ? d.fold - 0.02 / g : lo;
      BifurcationPoint bp = locate_homoclinic(fam, a, hi, 1e-3);
      d.sho = bp.param;
    } catch (const BracketError&) {
    }
  }

  if (std::isfinite(t.hopf)) {
    const int N = 40;
    double prev = std::nan("");
    double prev_p = lo;
    for (int i = 0; i <= N; ++i) {
      double pm = lo + (hi - lo) * i / N;
      double re = std::nan("");
      double bi = 0;
      for (auto& e : find_equilibria(fam.make(pm), fam.window))
        if (std::fabs(e.ev1.imag()) > bi) {
          bi = std::fabs(e.ev1.imag());
          re = e.ev1.real();
        }
      if (std::isfinite(prev) && std::isfinite(re) && prev * re < 0) {
        try {
          d.hopf = locate_hopf(fam, prev_p, pm, 1e-3).param;
        } catch (const BracketError&) {
        }
        break;
      }
      if (std::isfinite(re)) {
        prev = re;
        prev_p = pm;
      }
    }
  }
  return d;
}

double objective(const Detected& d, const CalibrationTargets& t) {
  double obj = 0;
  auto add = [&](double got, double want) {
    if (!std::isfinite(want)) return;
    if (!std::isfinite(got)) obj += 1e6;
    else obj += (got - want) * (got - want);
  };
  add(d.fold, t.fold);
  add(d.sho, t.sho);
  add(d.hopf, t.hopf);
  return obj;
}

// Spike count after the transient window (rising crossings of a mid threshold).
int spike_count(const InapIkIkmParams& p, double I, double t_sim, double t_tr) {
  InapIkIkmParams q = p;
  q.I = I;
  DynamicalSystem sys = model_system(q);
  IntegratorConfig ic;
  ic.t_end = t_sim;
  ic.max_step = t_sim / 8000.0;
  Trajectory tr = integrate_adaptive(sys, model_default_state(q), ic);
  double vmin = 1e300, vmax = -1e300;
  for (size_t i = 0; i < tr.size(); ++i) {
    if (tr.times[i] < t_tr) continue;
    vmin = std::min(vmin, tr.states[i][0]);
    vmax = std::max(vmax, tr.states[i][0]);
  }
  if (vmax - vmin < 10.0) return 0;  // no spikes: sub-threshold range only
  double level = vmin + 0.6 * (vmax - vmin);
  int c = 0;
  for (double t : locate_threshold_crossings(tr, 0, level, Direction::rising))
    if (t >= t_tr) ++c;
  return c;
}

}  // namespace

CalibrationResult calibrate_gM(InapIkIkmParams base, const CalibrationTargets& t) {
  if (std::isfinite(t.fold) && std::isfinite(t.sho) && std::fabs(t.fold - t.sho) < 1e-9)
    throw CalibrationError("degenerate targets: bifurcations at identical nM");
  std::ostringstream rep;
  rep << "g_M calibration: log grid [0.1, 100], 60 points + golden-section\n";

  const int N = 60;
  double best_g = 0.1, best_obj = 1e300;
  int best_i = 0;
  for (int i = 0; i < N; ++i) {
    double g = 0.1 * std::pow(1000.0, static_cast<double>(i) / (N - 1));
    double obj = objective(detect(base, g, t), t);
    rep << "  g=" << g << " obj=" << obj << "\n";
    if (obj < best_obj) {
      best_obj = obj;
      best_g = g;
      best_i = i;
    }
  }
  double a = 0.1 * std::pow(1000.0, static_cast<double>(std::max(best_i - 1, 0)) / (N - 1));
  double b = 0.1 * std::pow(1000.0, static_cast<double>(std::min(best_i + 1, N - 1)) / (N - 1));
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = objective(detect(base, x1, t), t);
  double f2 = objective(detect(base, x2, t), t);
  for (int it = 0; it < 30 && (b - a) > 1e-4 * best_g; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = objective(detect(base, x1, t), t);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = objective(detect(base, x2, t), t);
    }
  }
  CalibrationResult r;
  r.g_M = f1 < f2 ? x1 : x2;
  Detected d = detect(base, r.g_M, t);
  r.objective = objective(d, t);
  r.achieved_fold = d.fold;
  r.achieved_sho = d.sho;
  r.achieved_hopf = d.hopf;
  rep << "refined g_M=" << r.g_M << " objective=" << r.objective << "\n";
  rep << "achieved: fold=" << d.fold << " sho=" << d.sho << " hopf=" << d.hopf << "\n";

  // Target (a): full model must burst at I_high and rest at I_low.
  if (t.I_high != t.I_low) {
    InapIkIkmParams p = base;
    p.g_M = r.g_M;
    int hi_spikes = spike_count(p, t.I_high, t.t_sim, t.t_transient);
    int lo_spikes = spike_count(p, t.I_low, t.t_sim, t.t_transient);
    rep << "burst gate: spikes(I=" << t.I_high << ")=" << hi_spikes << ", spikes(I="
        << t.I_low << ")=" << lo_spikes << "\n";
    if (hi_spikes < 4 || lo_spikes > 0) {
      rep << "FAILED burst/rest gate\n";
      throw CalibrationError("calibration failed burst/rest gate:\n" + rep.str());
    }
  }
  r.report = rep.str();
  return r;
}

}  // namespace burster
