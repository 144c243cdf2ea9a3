#include "burster/phase.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "burster/integrate.hpp"

namespace burster {

std::string to_string(EqClass k) {
  switch (k) {
    case EqClass::stable_node: return "stable node";
    case EqClass::unstable_node: return "unstable node";
    case EqClass::saddle: return "saddle";
    case EqClass::stable_focus: return "stable focus";
    case EqClass::unstable_focus: return "unstable focus";
    default: return "nonhyperbolic";
  }
}

namespace {

double eval_component(const DynamicalSystem& fast, double x, double y, int comp) {
  Vec p{x, y};
  Vec d = Vec::zeros(2);
  fast.rhs(0.0, p, d);
  return d[comp];
}

// Bisection along a grid edge to |f| < tol, given a sign change.
std::array<double, 2> refine_edge(const DynamicalSystem& fast, int comp, double ax,
                                  double ay, double bx, double by, double fa,
                                  double tol) {
  for (int it = 0; it < 80; ++it) {
    double mx = 0.5 * (ax + bx), my = 0.5 * (ay + by);
    double fm = eval_component(fast, mx, my, comp);
    if (std::fabs(fm) < tol) return {mx, my};
    if ((fa < 0) != (fm < 0)) {
      bx = mx;
      by = my;
    } else {
      ax = mx;
      ay = my;
      fa = fm;
    }
  }
  return {0.5 * (ax + bx), 0.5 * (ay + by)};
}

struct Seg {
  std::array<double, 2> a, b;
};

// Marching squares on one component: per-cell edge crossings chained into polylines.
std::vector<Polyline> march_component(const DynamicalSystem& fast, const Window2D& w,
                                      const GridField& g, int comp, double scale) {
  const double tol = 1e-10 * scale;
  std::vector<Seg> segs;
  auto fval = [&](int i, int j) { return comp == 0 ? g.F1(i, j) : g.F2(i, j); };
  for (int j = 0; j + 1 < w.ny; ++j)
    for (int i = 0; i + 1 < w.nx; ++i) {
      double c[4] = {fval(i, j), fval(i + 1, j), fval(i + 1, j + 1), fval(i, j + 1)};
      if (!std::isfinite(c[0]) || !std::isfinite(c[1]) || !std::isfinite(c[2]) ||
          !std::isfinite(c[3]))
        continue;
      double px[4] = {w.gx(i), w.gx(i + 1), w.gx(i + 1), w.gx(i)};
      double py[4] = {w.gy(j), w.gy(j), w.gy(j + 1), w.gy(j + 1)};
      std::vector<std::array<double, 2>> hits;
      for (int e = 0; e < 4; ++e) {
        int e2 = (e + 1) % 4;
        if ((c[e] < 0) != (c[e2] < 0))
          hits.push_back(refine_edge(fast, comp, px[e], py[e], px[e2], py[e2], c[e], tol));
      }
      if (hits.size() == 2) segs.push_back({hits[0], hits[1]});
      else if (hits.size() == 4) {
        segs.push_back({hits[0], hits[1]});
        segs.push_back({hits[2], hits[3]});
      }
    }

  // Chain segments sharing endpoints (quantized to half a grid cell).
  const double qx = 0.5 * w.span_x() / (w.nx - 1), qy = 0.5 * w.span_y() / (w.ny - 1);
  auto key = [&](const std::array<double, 2>& p) {
    return std::pair<long, long>(std::lround((p[0] - w.x0) / qx),
                                 std::lround((p[1] - w.y0) / qy));
  };
  std::map<std::pair<long, long>, std::vector<size_t>> ends;
  for (size_t s = 0; s < segs.size(); ++s) {
    ends[key(segs[s].a)].push_back(s);
    ends[key(segs[s].b)].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<Polyline> out;
  for (size_t s0 = 0; s0 < segs.size(); ++s0) {
    if (used[s0]) continue;
    used[s0] = true;
    std::vector<std::array<double, 2>> chain{segs[s0].a, segs[s0].b};
    for (int side = 0; side < 2; ++side) {
      bool extended = true;
      while (extended) {
        extended = false;
        auto tip = side == 0 ? chain.back() : chain.front();
        for (size_t s : ends[key(tip)]) {
          if (used[s]) continue;
          auto ka = key(segs[s].a), kb = key(segs[s].b), kt = key(tip);
          std::array<double, 2> next;
          if (ka == kt) next = segs[s].b;
          else if (kb == kt) next = segs[s].a;
          else continue;
          used[s] = true;
          if (side == 0) chain.push_back(next);
          else chain.insert(chain.begin(), next);
          extended = true;
          break;
        }
      }
    }
    Polyline p;
    p.pts = std::move(chain);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

NullclineSet compute_nullclines(const DynamicalSystem& fast, const Window2D& w) {
  GridField g = evaluate_grid(fast, w);
  double s1 = 0, s2 = 0;
  for (size_t k = 0; k < g.f1.size(); ++k) {
    if (std::isfinite(g.f1[k])) s1 = std::max(s1, std::fabs(g.f1[k]));
    if (std::isfinite(g.f2[k])) s2 = std::max(s2, std::fabs(g.f2[k]));
  }
  NullclineSet ns;
  ns.curves_f1 = march_component(fast, w, g, 0, s1 > 0 ? s1 : 1.0);
  ns.curves_f2 = march_component(fast, w, g, 1, s2 > 0 ? s2 : 1.0);
  return ns;
}

namespace {

struct Scales {
  double s1 = 1, s2 = 1;  // rhs component magnitudes over the window
};

Scales window_scales(const GridField& g) {
  Scales s;
  double m1 = 0, m2 = 0;
  for (size_t k = 0; k < g.f1.size(); ++k) {
    if (std::isfinite(g.f1[k])) m1 = std::max(m1, std::fabs(g.f1[k]));
    if (std::isfinite(g.f2[k])) m2 = std::max(m2, std::fabs(g.f2[k]));
  }
  s.s1 = m1 > 0 ? m1 : 1.0;
  s.s2 = m2 > 0 ? m2 : 1.0;
  return s;
}

std::array<std::array<double, 2>, 2> fd_jacobian(const DynamicalSystem& fast,
                                                 const Window2D& w, double x, double y,
                                                 double hfrac = 1e-6) {
  const double hx = hfrac * w.span_x(), hy = hfrac * w.span_y();
  std::array<std::array<double, 2>, 2> J{};
  for (int c = 0; c < 2; ++c) {
    J[c][0] = (eval_component(fast, x + hx, y, c) - eval_component(fast, x - hx, y, c)) /
              (2 * hx);
    J[c][1] = (eval_component(fast, x, y + hy, c) - eval_component(fast, x, y - hy, c)) /
              (2 * hy);
  }
  return J;
}

bool newton_solve(const DynamicalSystem& fast, const Window2D& w, const Scales& sc,
                  double& x, double& y) {
  const double cap_x = 0.1 * w.span_x(), cap_y = 0.1 * w.span_y();
  auto resnorm = [&](double px, double py) {
    return std::max(std::fabs(eval_component(fast, px, py, 0)) / sc.s1,
                    std::fabs(eval_component(fast, px, py, 1)) / sc.s2);
  };
  for (int it = 0; it < 60; ++it) {
    double f0 = eval_component(fast, x, y, 0);
    double f1 = eval_component(fast, x, y, 1);
    double rn = std::max(std::fabs(f0) / sc.s1, std::fabs(f1) / sc.s2);
    if (rn < 1e-10) return true;
    auto J = fd_jacobian(fast, w, x, y);
    double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (std::fabs(det) < 1e-300) return false;
    double dx = -(J[1][1] * f0 - J[0][1] * f1) / det;
    double dy = -(-J[1][0] * f0 + J[0][0] * f1) / det;
    dx = std::clamp(dx, -cap_x, cap_x);
    dy = std::clamp(dy, -cap_y, cap_y);
    double lam = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 8; ++bt) {
      double nx = x + lam * dx, ny = y + lam * dy;
      if (resnorm(nx, ny) < rn) {
        x = nx;
        y = ny;
        moved = true;
        break;
      }
      lam *= 0.5;
    }
    if (!moved) {
      x += lam * dx;
      y += lam * dy;
    }
    if (!w.contains(x, y, 0.5)) return false;
  }
  return resnorm(x, y) < 1e-10;
}

Equilibrium make_equilibrium(const DynamicalSystem& fast, const Window2D& w, double x,
                             double y) {
  Equilibrium e;
  e.location = {x, y};
  e.jacobian = fd_jacobian(fast, w, x, y);
  const auto& J = e.jacobian;
  double tr = J[0][0] + J[1][1];
  double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
  double disc = tr * tr - 4 * det;
  if (disc >= 0) {
    double r = std::sqrt(disc);
    e.ev1 = {(tr - r) / 2, 0};
    e.ev2 = {(tr + r) / 2, 0};
  } else {
    double im = std::sqrt(-disc) / 2;
    e.ev1 = {tr / 2, -im};
    e.ev2 = {tr / 2, im};
  }
  double jn = std::max({std::fabs(J[0][0]), std::fabs(J[0][1]), std::fabs(J[1][0]),
                        std::fabs(J[1][1])});
  e.klass = classify(e.ev1, e.ev2, jn);
  if (e.klass == EqClass::saddle) {
    auto evec = [&](double lam) -> std::array<double, 2> {
      // (J - lam I) v = 0
      double ax = J[0][0] - lam, bx = J[0][1];
      std::array<double, 2> v;
      if (std::fabs(bx) > 1e-300 || std::fabs(ax) > 1e-300) v = {-bx, ax};
      else v = {J[1][1] - lam, -J[1][0]};
      double nrm = std::hypot(v[0], v[1]);
      if (nrm > 0) {
        v[0] /= nrm;
        v[1] /= nrm;
      }
      return v;
    };
    double l1 = e.ev1.real(), l2 = e.ev2.real();
    e.saddle_stable_dir = evec(std::min(l1, l2));
    e.saddle_unstable_dir = evec(std::max(l1, l2));
  }
  return e;
}

}  // namespace

EqClass classify(std::complex<double> e1, std::complex<double> e2, double jac_norm) {
  const double eps = 1e-6 * std::max(jac_norm, 1e-300);
  if (std::fabs(e1.real()) < eps || std::fabs(e2.real()) < eps)
    return EqClass::nonhyperbolic;
  bool complex_pair = std::fabs(e1.imag()) > 0 || std::fabs(e2.imag()) > 0;
  if (complex_pair)
    return e1.real() < 0 ? EqClass::stable_focus : EqClass::unstable_focus;
  if (e1.real() * e2.real() < 0) return EqClass::saddle;
  return e1.real() < 0 ? EqClass::stable_node : EqClass::unstable_node;
}

std::optional<Equilibrium> refine_equilibrium(const DynamicalSystem& fast,
                                              const Window2D& w,
                                              std::array<double, 2> start) {
  GridField probe;  // scales from a coarse grid around the window
  Window2D cw = w;
  cw.nx = cw.ny = 16;
  probe = evaluate_grid_serial(fast, cw);
  Scales sc = window_scales(probe);
  double x = start[0], y = start[1];
  if (!newton_solve(fast, w, sc, x, y)) return std::nullopt;
  return make_equilibrium(fast, w, x, y);
}

std::vector<Equilibrium> find_equilibria(const DynamicalSystem& fast, const Window2D& w,
                                         FindDiagnostics* diag) {
  GridField g = evaluate_grid(fast, w);
  Scales sc = window_scales(g);

  // Seed wherever a grid cell shows sign changes of both components.
  std::vector<std::array<double, 2>> seeds;
  auto sgn = [](double v) { return v < 0; };
  for (int j = 0; j + 1 < w.ny; ++j)
    for (int i = 0; i + 1 < w.nx; ++i) {
      bool c1 = false, c2 = false;
      bool a1 = sgn(g.F1(i, j)), a2 = sgn(g.F2(i, j));
      for (auto [di, dj] : {std::pair{1, 0}, {1, 1}, {0, 1}}) {
        if (sgn(g.F1(i + di, j + dj)) != a1) c1 = true;
        if (sgn(g.F2(i + di, j + dj)) != a2) c2 = true;
      }
      if (c1 && c2)
        seeds.push_back({0.5 * (w.gx(i) + w.gx(i + 1)), 0.5 * (w.gy(j) + w.gy(j + 1))});
    }

  std::vector<Equilibrium> out;
  int discarded = 0;
  const double merge_tol = 1e-6;
  for (auto& s : seeds) {
    double x = s[0], y = s[1];
    if (!newton_solve(fast, w, sc, x, y)) {
      ++discarded;
      continue;
    }
    if (!w.contains(x, y, 1e-9)) {
      ++discarded;
      continue;
    }
    bool dup = false;
    for (auto& e : out) {
      double dx = (e.location[0] - x) / w.span_x();
      double dy = (e.location[1] - y) / w.span_y();
      if (std::hypot(dx, dy) < merge_tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(make_equilibrium(fast, w, x, y));
  }
  std::sort(out.begin(), out.end(), [](const Equilibrium& a, const Equilibrium& b) {
    return a.location[0] < b.location[0];
  });
  if (diag) {
    diag->seeds = static_cast<int>(seeds.size());
    diag->discarded = discarded;
  }
  return out;
}

namespace {

struct ProbeState {
  Trajectory chunk;
  double t = 0;
  Vec x;
};

}  // namespace

std::optional<LimitCycle> find_limit_cycle(const DynamicalSystem& fast, const Vec& seed,
                                           bool want_stable, const Window2D& w,
                                           const CycleCfg& cfg, std::string* diag) {
  if (!want_stable) {
    auto c = find_limit_cycle(reversed(fast), seed, true, w, cfg, diag);
    if (!c) return std::nullopt;
    c->stable = false;
    std::reverse(c->samples.begin(), c->samples.end());
    return c;
  }

  const double T_tr = cfg.transient_periods * cfg.t_char;
  const double T_probe = cfg.probe_periods * cfg.t_char;
  const double T_max = cfg.max_time_factor * cfg.t_char;
  const double max_step = 0.02 * cfg.t_char;

  IntegratorConfig ic;
  ic.method = Method::rk45;
  ic.rel_tol = cfg.rel_tol;
  ic.abs_tol = cfg.abs_tol;
  ic.max_step = max_step;

  Vec x = seed;
  double t = 0;
  // Transient discard.
  if (T_tr > 0) {
    ic.t_start = 0;
    ic.t_end = T_tr;
    ic.record_stride = 1 << 20;
    Trajectory tr;
    try {
      tr = integrate_adaptive(fast, x, ic);
    } catch (const IntegrationError&) {
      if (diag) *diag = "diverged during transient";
      return std::nullopt;
    }
    x = tr.states.back();
    t = T_tr;
  }

  int quiet_chunks = 0;
  double best_dy = 1e300;
  int stalled_chunks = 0;
  while (t < T_max) {
    ic.t_start = t;
    ic.t_end = t + T_probe;
    ic.record_stride = 1;
    Trajectory tr;
    try {
      tr = integrate_adaptive(fast, x, ic);
    } catch (const IntegrationError&) {
      if (diag) *diag = "diverged during probe";
      return std::nullopt;
    }
    x = tr.states.back();
    t = ic.t_end;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& s : tr.states) {
      xmin = std::min(xmin, s[0]);
      xmax = std::max(xmax, s[0]);
      ymin = std::min(ymin, s[1]);
      ymax = std::max(ymax, s[1]);
    }
    if (!w.contains(x[0], x[1], 1.0)) {
      if (diag) *diag = "left window";
      return std::nullopt;
    }
    double rel_range = std::max((xmax - xmin) / w.span_x(), (ymax - ymin) / w.span_y());
    if (rel_range < 1e-7) {
      if (++quiet_chunks >= 2) {
        if (diag) *diag = "converged to equilibrium";
        return std::nullopt;
      }
      continue;
    }
    quiet_chunks = 0;

    // Poincare section: upward crossings of x through its trailing mean.
    double mean = 0;
    for (auto& s : tr.states) mean += s[0];
    mean /= static_cast<double>(tr.states.size());
    std::vector<double> ct;  // crossing times
    std::vector<double> cy;  // y at crossing
    std::vector<size_t> ci;  // index before crossing
    for (size_t i = 0; i + 1 < tr.size(); ++i) {
      double a = tr.states[i][0], b = tr.states[i + 1][0];
      if (a < mean && b >= mean) {
        double f = (mean - a) / (b - a);
        ct.push_back(tr.times[i] + f * (tr.times[i + 1] - tr.times[i]));
        cy.push_back(tr.states[i][1] + f * (tr.states[i + 1][1] - tr.states[i][1]));
        ci.push_back(i);
      }
    }
    size_t m = ct.size();
    if (m >= 3) {
      double P1 = ct[m - 1] - ct[m - 2];
      double P2 = ct[m - 2] - ct[m - 3];
      double dy = std::fabs(cy[m - 1] - cy[m - 2]) / w.span_y();
      // The return-map gap bottoms out at the sampling/interpolation noise
      // floor (~1e-3 of the window for spike-shaped cycles), so accept either
      // on the tight tolerance or once the gap has stopped improving at a
      // still-small value with consistent periods.
      if (dy < 0.75 * best_dy) {
        best_dy = dy;
        stalled_chunks = 0;
      } else {
        ++stalled_chunks;
      }
      bool tight = dy < cfg.tol_frac && std::fabs(P1 - P2) < 1e-3 * P1;
      bool stalled = stalled_chunks >= 2 && dy < 5e-3 &&
                     std::fabs(P1 - P2) < 5e-3 * P1;
      if (tight || stalled) {
        LimitCycle c;
        c.period = m >= 6 ? (ct[m - 1] - ct[m - 6]) / 5.0 : P1;
        c.stable = true;
        c.v_min = 1e300;
        c.v_max = -1e300;
        for (size_t i = ci[m - 2] + 1; i <= ci[m - 1]; ++i) {
          c.ts.push_back(tr.times[i] - ct[m - 2]);
          c.samples.push_back({tr.states[i][0], tr.states[i][1]});
        }
        if (!c.samples.empty()) {
          c.ts.push_back(c.period);
          c.samples.push_back(c.samples.front());
        }
        for (auto& s : c.samples) {
          c.v_min = std::min(c.v_min, s[0]);
          c.v_max = std::max(c.v_max, s[0]);
        }
        return c;
      }
    }
  }
  if (diag) *diag = "no periodicity within budget";
  return std::nullopt;
}

BasinResult basin_probe(const DynamicalSystem& fast, const Vec& point,
                        const std::vector<Equilibrium>& eqs,
                        const std::vector<LimitCycle>& cycles, const Window2D& w,
                        const CycleCfg& cfg) {
  const double cap = 1e-4;
  auto near_eq = [&](const Vec& x) -> int {
    for (size_t k = 0; k < eqs.size(); ++k) {
      if (!eqs[k].stable()) continue;
      double dx = (x[0] - eqs[k].location[0]) / w.span_x();
      double dy = (x[1] - eqs[k].location[1]) / w.span_y();
      if (std::hypot(dx, dy) < cap) return static_cast<int>(k);
    }
    return -1;
  };
  if (int k = near_eq(point); k >= 0) return {AttractorKind::equilibrium, k};

  IntegratorConfig ic;
  ic.rel_tol = cfg.rel_tol;
  ic.abs_tol = cfg.abs_tol;
  ic.max_step = 0.02 * cfg.t_char;
  Vec x = point;
  double t = 0;
  const double T_chunk = cfg.probe_periods * cfg.t_char;
  const double T_max = cfg.max_time_factor * cfg.t_char;
  while (t < T_max) {
    ic.t_start = t;
    ic.t_end = t + T_chunk;
    Trajectory tr;
    try {
      tr = integrate_adaptive(fast, x, ic);
    } catch (const IntegrationError&) {
      return {AttractorKind::divergent, -1};
    }
    for (auto& s : tr.states)
      if (int k = near_eq(s); k >= 0) return {AttractorKind::equilibrium, k};
    x = tr.states.back();
    t = ic.t_end;
    if (!w.contains(x[0], x[1], 1.0)) return {AttractorKind::divergent, -1};

    // Try cycle convergence from the current state.
    CycleCfg quick = cfg;
    quick.transient_periods = 0;
    quick.max_time_factor = cfg.probe_periods * 3;
    quick.tol_frac = std::max(cfg.tol_frac, 1e-5);
    if (auto c = find_limit_cycle(fast, x, true, w, quick)) {
      int best = -1;
      double bd = 1e300;
      for (size_t k = 0; k < cycles.size(); ++k) {
        double d = std::fabs(c->v_min - cycles[k].v_min) / w.span_x() +
                   std::fabs(c->v_max - cycles[k].v_max) / w.span_x();
        if (d < bd) {
          bd = d;
          best = static_cast<int>(k);
        }
      }
      if (best >= 0 && bd < 0.04) return {AttractorKind::limit_cycle, best};
      if (cycles.empty()) return {AttractorKind::limit_cycle, -1};
    }
  }
  return {AttractorKind::divergent, -1};
}

}  // namespace burster
