#include "burster/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace burster {

std::string to_string(BifKind k) {
  switch (k) {
    case BifKind::saddle_node: return "saddle-node";
    case BifKind::subcritical_hopf: return "subcritical Andronov-Hopf";
    case BifKind::hopf_undetermined: return "Andronov-Hopf (criticality undetermined)";
    case BifKind::saddle_homoclinic: return "saddle homoclinic orbit";
    default: return "fold limit cycle";
  }
}

namespace {

Window2D seed_window(const FastFamily& fam) {
  Window2D w = fam.window;
  w.nx = w.ny = fam.seed_grid;
  return w;
}

std::vector<Equilibrium> equilibria_at(const FastFamily& fam, double p) {
  return find_equilibria(fam.make(p), seed_window(fam));
}

bool node_or_saddle(EqClass k) {
  return k == EqClass::stable_node || k == EqClass::saddle || k == EqClass::unstable_node;
}

int pair_count(const FastFamily& fam, double p) {
  int c = 0;
  for (auto& e : equilibria_at(fam, p))
    if (node_or_saddle(e.klass)) ++c;
  return c;
}

Vec cycle_top_seed(const LimitCycle& c) {
  size_t best = 0;
  for (size_t i = 0; i < c.samples.size(); ++i)
    if (c.samples[i][0] > c.samples[best][0]) best = i;
  return Vec{c.samples[best][0], c.samples[best][1]};
}

CycleCfg sweep_cfg(const FastFamily& fam, bool warm) {
  CycleCfg c = fam.ccfg;
  c.transient_periods = warm ? 5 : fam.ccfg.transient_periods;
  c.tol_frac = std::max(c.tol_frac, 1e-5);
  return c;
}

std::optional<LimitCycle> probe_cycle(const FastFamily& fam, double p, const Vec& seed,
                                      bool stable, bool warm,
                                      double min_amp_frac = 0.02) {
  CycleCfg cfg = sweep_cfg(fam, warm);
  auto c = find_limit_cycle(fam.make(p), seed, stable, fam.window, cfg);
  if (c && (c->v_max - c->v_min) < min_amp_frac * fam.window.span_x())
    return std::nullopt;
  return c;
}

std::vector<Vec> fresh_seeds(const FastFamily& fam) {
  const Window2D& w = fam.window;
  return {Vec{w.x0 + 0.5 * w.span_x(), w.y0 + 0.5 * w.span_y()},
          Vec{w.x0 + 0.8 * w.span_x(), w.y0 + 0.3 * w.span_y()},
          Vec{w.x0 + 0.3 * w.span_x(), w.y0 + 0.7 * w.span_y()}};
}

std::optional<LimitCycle> fresh_stable_cycle(const FastFamily& fam, double p) {
  for (auto& s : fresh_seeds(fam))
    if (auto c = probe_cycle(fam, p, s, true, false)) return c;
  return std::nullopt;
}

// Fresh unstable-cycle attempt: perturb off a stable focus and search the
// time-reversed system (planar reversal swaps stability).
std::optional<LimitCycle> fresh_unstable_cycle(const FastFamily& fam, double p) {
  for (auto& e : equilibria_at(fam, p)) {
    if (e.klass != EqClass::stable_focus) continue;
    Vec s{e.location[0] + 0.02 * fam.window.span_x(), e.location[1]};
    if (auto c = probe_cycle(fam, p, s, false, false, 1e-3)) return c;
  }
  return std::nullopt;
}

double norm_dist(const Window2D& w, const std::array<double, 2>& a,
                 const std::array<double, 2>& b) {
  return std::hypot((a[0] - b[0]) / w.span_x(), (a[1] - b[1]) / w.span_y());
}

std::vector<std::vector<Equilibrium>> sweep_census(const FastFamily& fam,
                                                   const std::vector<double>& params) {
  std::vector<std::vector<Equilibrium>> census(params.size());
  std::vector<Equilibrium> prev;
  for (size_t i = 0; i < params.size(); ++i) {
    std::vector<Equilibrium> cur;
    const DynamicalSystem sys = fam.make(params[i]);
    // Warm-start Newton from the previous step's equilibria.
    for (auto& e : prev)
      if (auto r = refine_equilibrium(sys, fam.window, e.location)) {
        bool dup = false;
        for (auto& c : cur)
          if (norm_dist(fam.window, c.location, r->location) < 1e-5) dup = true;
        if (!dup) cur.push_back(*r);
      }
    // Fresh grid seeding at every step: branch births (folds) must be seen
    // between the adjacent steps that actually bracket them.
    for (auto& e : find_equilibria(sys, seed_window(fam))) {
      bool dup = false;
      for (auto& c : cur)
        if (norm_dist(fam.window, c.location, e.location) < 1e-5) dup = true;
      if (!dup) cur.push_back(e);
    }
    std::sort(cur.begin(), cur.end(), [](const Equilibrium& a, const Equilibrium& b) {
      return a.location[0] < b.location[0];
    });
    census[i] = cur;
    prev = cur;
  }
  return census;
}

std::vector<EquilibriumBranch> assemble_branches(const Window2D& w,
                                                 const std::vector<double>& params,
                                                 const std::vector<std::vector<Equilibrium>>& census) {
  std::vector<EquilibriumBranch> open, closed;
  for (size_t i = 0; i < params.size(); ++i) {
    std::vector<bool> used(census[i].size(), false);
    std::vector<EquilibriumBranch> still_open;
    for (auto& br : open) {
      const auto& tip = br.points.back().eq.location;
      int best = -1;
      double bd = 0.05;  // gating distance (fraction of window span)
      for (size_t k = 0; k < census[i].size(); ++k) {
        if (used[k]) continue;
        double d = norm_dist(w, tip, census[i][k].location);
        if (d < bd) {
          bd = d;
          best = static_cast<int>(k);
        }
      }
      if (best >= 0) {
        used[static_cast<size_t>(best)] = true;
        EquilibriumBranch nb = std::move(br);
        nb.points.push_back({params[i], census[i][static_cast<size_t>(best)]});
        still_open.push_back(std::move(nb));
      } else {
        closed.push_back(std::move(br));
      }
    }
    for (size_t k = 0; k < census[i].size(); ++k) {
      if (used[k]) continue;
      EquilibriumBranch nb;
      nb.points.push_back({params[i], census[i][k]});
      still_open.push_back(std::move(nb));
    }
    open = std::move(still_open);
  }
  for (auto& br : open) closed.push_back(std::move(br));
  return closed;
}

}  // namespace

std::vector<EquilibriumBranch> sweep_equilibrium_branches(const FastFamily& fam,
                                                          double lo, double hi,
                                                          int steps) {
  if (steps < 2) throw std::invalid_argument("steps must be >= 2");
  std::vector<double> params(static_cast<size_t>(steps));
  for (int i = 0; i < steps; ++i) params[static_cast<size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  auto census = sweep_census(fam, params);
  return assemble_branches(fam.window, params, census);
}

std::vector<CycleBranch> sweep_cycle_branches(const FastFamily& fam, double lo,
                                              double hi, int steps) {
  std::vector<double> params(static_cast<size_t>(std::max(steps, 2)));
  for (size_t i = 0; i < params.size(); ++i)
    params[i] = lo + (hi - lo) * static_cast<double>(i) / (params.size() - 1);

  std::vector<CycleBranch> out;
  for (bool stable : {true, false}) {
    CycleBranch cur;
    cur.stable = stable;
    std::optional<Vec> seed;
    for (size_t i = 0; i < params.size(); ++i) {
      std::optional<LimitCycle> c;
      if (seed) {
        c = probe_cycle(fam, params[i], *seed, stable, true, stable ? 0.02 : 1e-3);
      } else if (i % 5 == 0 || (!cur.points.empty())) {
        c = stable ? fresh_stable_cycle(fam, params[i])
                   : fresh_unstable_cycle(fam, params[i]);
      }
      if (c) {
        cur.points.push_back({params[i], c->v_min, c->v_max, c->period});
        seed = cycle_top_seed(*c);
      } else {
        seed.reset();
        if (!cur.points.empty()) {
          out.push_back(std::move(cur));
          cur = CycleBranch{};
          cur.stable = stable;
        }
      }
    }
    if (!cur.points.empty()) out.push_back(std::move(cur));
  }
  return out;
}

BifurcationPoint locate_fold(const FastFamily& fam, double lo, double hi, double tol) {
  int clo = pair_count(fam, lo), chi = pair_count(fam, hi);
  if ((clo >= 2) == (chi >= 2))
    throw BracketError("locate_fold: bracket endpoints do not straddle pair existence");
  const double width = hi - lo;
  std::ostringstream ev;
  while (hi - lo > tol * width) {
    double mid = 0.5 * (lo + hi);
    if ((pair_count(fam, mid) >= 2) == (clo >= 2)) lo = mid;
    else hi = mid;
  }
  // Evidence: det(J) of the node trending to zero on the two-equilibria side.
  double side = clo >= 2 ? lo : hi;
  double away = clo >= 2 ? lo - 10 * tol * width : hi + 10 * tol * width;
  for (double p : {away, side}) {
    for (auto& e : equilibria_at(fam, p))
      if (e.klass == EqClass::stable_node || e.klass == EqClass::saddle) {
        double det = e.jacobian[0][0] * e.jacobian[1][1] -
                     e.jacobian[0][1] * e.jacobian[1][0];
        ev << "det(J)@" << p << "=" << det << "; ";
      }
  }
  BifurcationPoint bp;
  bp.kind = BifKind::saddle_node;
  bp.lo = lo;
  bp.hi = hi;
  bp.param = 0.5 * (lo + hi);
  bp.evidence = ev.str();
  return bp;
}

namespace {

// Real part of the focus eigenvalue at parameter p (NaN if no focus).
double focus_re(const FastFamily& fam, double p) {
  double best = std::nan("");
  double bi = 0;
  for (auto& e : equilibria_at(fam, p))
    if (std::fabs(e.ev1.imag()) > bi) {
      bi = std::fabs(e.ev1.imag());
      best = e.ev1.real();
    }
  return best;
}

}  // namespace

BifurcationPoint locate_hopf(const FastFamily& fam, double lo, double hi, double tol) {
  double rlo = focus_re(fam, lo), rhi = focus_re(fam, hi);
  if (!std::isfinite(rlo) || !std::isfinite(rhi) || rlo * rhi > 0)
    throw BracketError("locate_hopf: no focus real-part sign change across bracket");
  const double width = hi - lo;
  double a = lo, b = hi;
  while (b - a > tol * width) {
    double mid = 0.5 * (a + b);
    double rm = focus_re(fam, mid);
    if (std::isfinite(rm) && rm * rlo > 0) a = mid;
    else b = mid;
  }
  BifurcationPoint bp;
  bp.lo = a;
  bp.hi = b;
  bp.param = 0.5 * (a + b);

  // Subcriticality: an unstable cycle must exist on the stable (Re < 0) side.
  double stable_end = rlo < 0 ? lo : hi;
  double probe = bp.param + 0.3 * (stable_end - bp.param);
  auto uc = fresh_unstable_cycle(fam, probe);
  std::ostringstream ev;
  ev << "Re@" << lo << "=" << rlo << ", Re@" << hi << "=" << rhi
     << "; unstable-cycle probe @" << probe << ": " << (uc ? "found" : "absent");
  bp.kind = uc ? BifKind::subcritical_hopf : BifKind::hopf_undetermined;
  bp.evidence = ev.str();
  return bp;
}

namespace {

struct CycleMarch {
  double last_exist = 0, first_gone = 0;
  std::vector<double> periods;       // along existing params
  std::vector<double> params;
  std::vector<double> saddle_dist;   // min normalized distance to the saddle
  std::vector<double> vmax;          // stable-cycle amplitude trace
  Vec seed;
  bool any = false;
};

double min_saddle_dist(const FastFamily& fam, double p, const LimitCycle& c) {
  for (auto& e : equilibria_at(fam, p))
    if (e.klass == EqClass::saddle) {
      double best = 1e300;
      for (auto& s : c.samples) best = std::min(best, norm_dist(fam.window, s, e.location));
      return best;
    }
  return std::nan("");
}

// March the stable cycle from lo toward hi, then bisect its disappearance.
CycleMarch march_cycle(const FastFamily& fam, double lo, double hi, double tol,
                       bool with_saddle, const std::optional<Vec>& seed0) {
  CycleMarch m;
  const double width = hi - lo;
  const int sub = 20;
  std::optional<LimitCycle> c;
  if (seed0) c = probe_cycle(fam, lo, *seed0, true, true);
  if (!c) c = fresh_stable_cycle(fam, lo);
  if (!c) throw BracketError("cycle detector: no stable cycle at bracket start");
  m.any = true;
  m.seed = cycle_top_seed(*c);
  m.last_exist = lo;
  m.params.push_back(lo);
  m.periods.push_back(c->period);
  m.vmax.push_back(c->v_max);
  if (with_saddle) m.saddle_dist.push_back(min_saddle_dist(fam, lo, *c));

  double gone = hi;
  bool found_gone = false;
  for (int k = 1; k <= sub; ++k) {
    double p = lo + width * k / sub;
    auto ck = probe_cycle(fam, p, m.seed, true, true);
    if (ck) {
      m.seed = cycle_top_seed(*ck);
      m.last_exist = p;
      m.params.push_back(p);
      m.periods.push_back(ck->period);
      m.vmax.push_back(ck->v_max);
      if (with_saddle) m.saddle_dist.push_back(min_saddle_dist(fam, p, *ck));
    } else {
      gone = p;
      found_gone = true;
      break;
    }
  }
  if (!found_gone)
    throw BracketError("cycle detector: cycle persists across the whole bracket");
  double a = m.last_exist, b = gone;
  while (b - a > tol * width) {
    double p = 0.5 * (a + b);
    auto cp = probe_cycle(fam, p, m.seed, true, true);
    if (cp) {
      a = p;
      m.seed = cycle_top_seed(*cp);
      m.last_exist = p;
      m.params.push_back(p);
      m.periods.push_back(cp->period);
      m.vmax.push_back(cp->v_max);
      if (with_saddle) m.saddle_dist.push_back(min_saddle_dist(fam, p, *cp));
    } else {
      b = p;
    }
  }
  m.first_gone = b;
  return m;
}

}  // namespace

BifurcationPoint locate_homoclinic(const FastFamily& fam, double lo, double hi,
                                   double tol) {
  FastFamily f2 = fam;
  f2.ccfg.probe_periods = std::max(f2.ccfg.probe_periods, 60.0);
  f2.ccfg.max_time_factor = std::max(f2.ccfg.max_time_factor, 1000.0);
  CycleMarch m = march_cycle(f2, lo, hi, tol, true, std::nullopt);

  // Homoclinic signature: the period keeps growing (logarithmic divergence,
  // so the factor over one bracket is modest) while the cycle closes in on
  // the saddle. A fold of cycles keeps both bounded away.
  double growth = m.periods.back() / m.periods.front();
  bool approach = !m.saddle_dist.empty() && std::isfinite(m.saddle_dist.front()) &&
                  std::isfinite(m.saddle_dist.back()) &&
                  (m.saddle_dist.back() < 0.03 ||
                   m.saddle_dist.back() < 0.5 * m.saddle_dist.front() + 1e-3);
  std::ostringstream ev;
  ev << "period " << m.periods.front() << " -> " << m.periods.back() << " (x" << growth
     << "); saddle distance " << (m.saddle_dist.empty() ? -1.0 : m.saddle_dist.front())
     << " -> " << (m.saddle_dist.empty() ? -1.0 : m.saddle_dist.back());

  BifurcationPoint bp;
  bp.lo = m.last_exist;
  bp.hi = m.first_gone;
  bp.param = 0.5 * (bp.lo + bp.hi);
  bp.evidence = ev.str();
  bp.kind = (growth > 1.25 && approach) ? BifKind::saddle_homoclinic
                                        : BifKind::fold_limit_cycle;
  return bp;
}

BifurcationPoint locate_fold_cycle(const FastFamily& fam, double lo, double hi,
                                   double tol) {
  auto elo = equilibria_at(fam, lo);
  auto ehi = equilibria_at(fam, hi);
  if (elo.size() != ehi.size())
    throw BracketError("locate_fold_cycle: equilibrium bifurcation inside bracket");
  for (size_t i = 0; i < elo.size(); ++i)
    if (elo[i].stable() != ehi[i].stable())
      throw BracketError("locate_fold_cycle: equilibrium stability change inside bracket");

  CycleMarch m = march_cycle(fam, lo, hi, tol, false, std::nullopt);

  // Evidence: the stable/unstable amplitude gap shrinking toward the point.
  std::ostringstream ev;
  size_t n = m.params.size();
  for (size_t i = n >= 3 ? n - 3 : 0; i < n; ++i) {
    if (auto uc = fresh_unstable_cycle(fam, m.params[i]))
      ev << "gap@" << m.params[i] << "=" << (m.vmax[i] - uc->v_max) << "; ";
  }
  BifurcationPoint bp;
  bp.kind = BifKind::fold_limit_cycle;
  bp.lo = m.last_exist;
  bp.hi = m.first_gone;
  bp.param = 0.5 * (bp.lo + bp.hi);
  bp.evidence = ev.str();
  return bp;
}

BifurcationDiagram build_diagram(const FastFamily& fam, double lo, double hi,
                                 int steps) {
  BifurcationDiagram d;
  d.param_name = fam.param_name;
  d.lo = lo;
  d.hi = hi;
  d.params.resize(static_cast<size_t>(steps));
  for (int i = 0; i < steps; ++i)
    d.params[static_cast<size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  d.census = sweep_census(fam, d.params);
  d.eq_branches = assemble_branches(fam.window, d.params, d.census);
  d.cycle_branches = sweep_cycle_branches(fam, lo, hi, steps);

  const double step_w = (hi - lo) / (steps - 1);
  const double tol_abs = 1e-4 * (hi - lo);

  // Fold: node/saddle pair count change between adjacent sweep steps.
  for (size_t i = 0; i + 1 < d.params.size(); ++i) {
    auto cnt = [&](size_t k) {
      int c = 0;
      for (auto& e : d.census[k])
        if (node_or_saddle(e.klass)) ++c;
      return c;
    };
    if ((cnt(i) >= 2) != (cnt(i + 1) >= 2)) {
      try {
        d.points.push_back(
            locate_fold(fam, d.params[i], d.params[i + 1], tol_abs / step_w));
      } catch (const BracketError&) {
      }
    }
  }
  // Hopf: focus real-part sign change between adjacent steps.
  for (size_t i = 0; i + 1 < d.params.size(); ++i) {
    auto fre = [&](size_t k) {
      double best = std::nan("");
      double bi = 0;
      for (auto& e : d.census[k])
        if (std::fabs(e.ev1.imag()) > bi) {
          bi = std::fabs(e.ev1.imag());
          best = e.ev1.real();
        }
      return best;
    };
    double a = fre(i), b = fre(i + 1);
    if (std::isfinite(a) && std::isfinite(b) && a * b < 0) {
      try {
        d.points.push_back(
            locate_hopf(fam, d.params[i], d.params[i + 1], tol_abs / step_w));
      } catch (const BracketError&) {
      }
    }
  }
  // Stable-cycle branch upper terminations: SHO if a saddle is present there,
  // fold limit cycle otherwise.
  for (auto& br : d.cycle_branches) {
    if (!br.stable || br.points.empty()) continue;
    double pend = br.points.back().param;
    if (pend >= hi - 0.5 * step_w) continue;  // persists to the range end
    double blo = std::max(lo, pend - step_w);
    double bhi = std::min(hi, pend + 2 * step_w);
    size_t idx = static_cast<size_t>(std::lround((pend - lo) / step_w));
    bool saddle_here = false;
    for (auto& e : d.census[std::min(idx, d.census.size() - 1)])
      if (e.klass == EqClass::saddle) saddle_here = true;
    try {
      d.points.push_back(saddle_here
                             ? locate_homoclinic(fam, blo, bhi, tol_abs / (bhi - blo))
                             : locate_fold_cycle(fam, blo, bhi, tol_abs / (bhi - blo)));
    } catch (const BracketError&) {
    }
  }

  // Bistable interval(s): overlap of stable-equilibrium and stable-cycle
  // existence, endpoints snapped to detected bifurcation parameters.
  std::vector<char> has_eq(d.params.size(), 0), has_cy(d.params.size(), 0);
  for (size_t i = 0; i < d.params.size(); ++i)
    for (auto& e : d.census[i])
      if (e.stable()) has_eq[i] = 1;
  for (auto& br : d.cycle_branches)
    if (br.stable)
      for (auto& p : br.points) {
        size_t idx = static_cast<size_t>(std::lround((p.param - lo) / step_w));
        if (idx < has_cy.size()) has_cy[idx] = 1;
      }
  size_t i = 0;
  while (i < d.params.size()) {
    if (has_eq[i] && has_cy[i]) {
      size_t j = i;
      while (j + 1 < d.params.size() && has_eq[j + 1] && has_cy[j + 1]) ++j;
      double a = d.params[i], b = d.params[j];
      for (auto& bp : d.points) {
        if (std::fabs(bp.param - a) <= 2 * step_w) a = bp.param;
        if (std::fabs(bp.param - b) <= 2 * step_w) b = bp.param;
      }
      if (b > a) d.bistable.push_back({a, b});
      i = j + 1;
    } else {
      ++i;
    }
  }
  std::sort(d.points.begin(), d.points.end(),
            [](const BifurcationPoint& a, const BifurcationPoint& b) {
              return a.param < b.param;
            });
  return d;
}

std::optional<LimitCycle> find_stable_cycle_at(const FastFamily& fam, double param) {
  return fresh_stable_cycle(fam, param);
}

std::optional<LimitCycle> find_unstable_cycle_at(const FastFamily& fam, double param) {
  return fresh_unstable_cycle(fam, param);
}

BursterClass classify_burster(const BifurcationDiagram& d) {
  BursterClass out;
  const BifurcationPoint* onset = nullptr;
  const BifurcationPoint* offset = nullptr;
  for (auto& p : d.points) {
    if (p.kind == BifKind::saddle_node || p.kind == BifKind::subcritical_hopf ||
        p.kind == BifKind::hopf_undetermined) {
      if (!onset || p.param < onset->param) onset = &p;
    }
    if (p.kind == BifKind::saddle_homoclinic || p.kind == BifKind::fold_limit_cycle) {
      if (!offset || p.param > offset->param) offset = &p;
    }
  }
  if (!onset || !offset) {
    out.diagnostics = "unclassified: missing onset or offset bifurcation";
    return out;
  }
  out.classified = true;
  if (onset->kind == BifKind::saddle_node) {
    // SNIC label when a stable cycle exists just below the fold.
    bool cycle_below = false;
    for (auto& br : d.cycle_branches)
      if (br.stable && !br.points.empty() && br.points.front().param < onset->param)
        cycle_below = true;
    out.onset = cycle_below ? "saddle-node off invariant circle" : "saddle-node";
    out.predicted_onset_oscillations = false;
  } else {
    out.onset = to_string(onset->kind);
    out.predicted_onset_oscillations = true;
  }
  out.offset = to_string(offset->kind);
  out.predicted_offset_oscillations = offset->kind == BifKind::fold_limit_cycle;
  return out;
}

}  // namespace burster
