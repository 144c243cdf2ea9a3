// Command-line front end: simulate / phase / bifurcate / metrics / dissect.
#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "burster/burst.hpp"
#include "burster/csvio.hpp"
#include "burster/integrate.hpp"
#include "burster/svg.hpp"
#include "burster/systems.hpp"

namespace fs = std::filesystem;
using namespace burster;

namespace {

struct Common {
  std::string system;
  std::string config_path;
  std::string out = "out";
  bool svg = false;
  bool strict = false;
};

void add_common(CLI::App* cmd, Common& c, bool need_system = true) {
  auto* s = cmd->add_option("--system", c.system,
                            "model-a, model-b, circuit-a, or circuit-b");
  if (need_system) s->required();
  cmd->add_option("--config", c.config_path, "flat key = value parameter file");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_flag("--svg", c.svg, "also render SVG output");
  cmd->add_flag("--strict", c.strict, "nonzero exit on unavailable statistics");
}

SystemDef resolve(const Common& c) {
  if (!c.config_path.empty())
    return make_system_with_config(c.system, load_config(c.config_path));
  return make_system(c.system);
}

void write_manifest(const Common& c, const SystemDef& d, const KeyValues& extra) {
  std::ostringstream out;
  out << "# run-manifest: fully resolved configuration\n";
  out << "system = " << d.name << "\n";
  out << "time_unit = " << d.time_unit << "\n";
  for (auto& [k, v] : extra) out << k << " = " << v << "\n";
  for (auto& [k, v] : d.config) out << k << " = " << v << "\n";
  write_text_atomic(c.out + "/run-manifest.txt", out.str());
}

Trajectory run_full(const SystemDef& d, double t_end, Method method, double dt,
                    int stride) {
  IntegratorConfig ic;
  ic.method = method;
  ic.t_end = t_end;
  ic.fixed_step = dt > 0 ? dt : d.max_step;
  ic.max_step = d.max_step;
  ic.record_stride = stride;
  return integrate(d.full, d.x0, ic);
}

void svg_waveform(const std::string& path, const Trajectory& tr, const SystemDef& d) {
  double vmin = 1e300, vmax = -1e300;
  for (auto& s : tr.states) {
    vmin = std::min(vmin, s[0]);
    vmax = std::max(vmax, s[0]);
  }
  double pad = 0.05 * (vmax - vmin + 1e-12);
  SvgPlot p(tr.times.front(), tr.times.back(), vmin - pad, vmax + pad,
            "t [" + d.time_unit + "]", d.membrane, d.name);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(tr.size());
  for (size_t i = 0; i < tr.size(); ++i) pts.push_back({tr.times[i], tr.states[i][0]});
  p.add_polyline(pts, "steelblue");
  p.save(path);
}

void svg_phase(const std::string& path, const SystemDef& d, const NullclineSet& ns,
               const std::vector<Equilibrium>& eqs,
               const std::vector<LimitCycle>& cycles, double frozen) {
  const Window2D& w = d.family.window;
  std::ostringstream title;
  title << d.name << " " << d.slow_name << "=" << frozen;
  SvgPlot p(w.x0, w.x1, w.y0, w.y1, d.membrane, d.full.labels[1], title.str());
  auto draw = [&](const std::vector<Polyline>& cs, const std::string& col) {
    for (auto& c : cs) {
      std::vector<std::pair<double, double>> pts;
      for (auto& q : c.pts) pts.push_back({q[0], q[1]});
      p.add_polyline(pts, col);
    }
  };
  draw(ns.curves_f1, "crimson");
  draw(ns.curves_f2, "darkorange");
  for (auto& c : cycles) {
    std::vector<std::pair<double, double>> pts;
    for (auto& q : c.samples) pts.push_back({q[0], q[1]});
    p.add_polyline(pts, c.stable ? "forestgreen" : "gray", 1.5);
  }
  for (auto& e : eqs) p.add_marker(e.location[0], e.location[1], "black", e.stable());
  p.save(path);
}

std::string tag(double v) {
  std::ostringstream s;
  s << v;
  std::string t = s.str();
  for (auto& ch : t)
    if (ch == '.' || ch == '-') ch = ch == '.' ? 'p' : 'm';
  return t;
}

int cmd_simulate(const Common& c, double I, double t_end, const std::string& method,
                 double dt, int stride) {
  SystemDef d = resolve(c);
  if (std::isfinite(I)) set_current(d, I);
  if (t_end <= 0) t_end = d.t_end;
  fs::create_directories(c.out);
  Method m = method == "rk4" ? Method::rk4 : Method::rk45;
  KeyValues extra{{"command", "simulate"},
                  {"t_end", fmt17(t_end)},
                  {"method", method},
                  {"max_step", fmt17(d.max_step)},
                  {"record_stride", std::to_string(stride)}};
  write_manifest(c, d, extra);
  try {
    Trajectory tr = run_full(d, t_end, m, dt, stride);
    write_trajectory_csv(c.out + "/trajectory.csv", tr);
    if (c.svg) svg_waveform(c.out + "/trajectory.svg", tr, d);
  } catch (const IntegrationError& e) {
    write_text_atomic(c.out + "/diagnostics.txt",
                      std::string("integration failed: ") + e.what() + " at t=" +
                          fmt17(e.last_time) + "\n");
    std::cerr << "error: " << e.what() << " (diagnostics written)\n";
    return 1;
  }
  std::cout << "wrote " << c.out << "/trajectory.csv\n";
  return 0;
}

int cmd_phase(const Common& c, std::vector<double> frozen) {
  SystemDef d = resolve(c);
  if (frozen.empty()) frozen = d.panel_values;
  fs::create_directories(c.out);
  KeyValues extra{{"command", "phase"}};
  for (size_t i = 0; i < frozen.size(); ++i)
    extra["frozen." + std::to_string(i)] = fmt17(frozen[i]);
  write_manifest(c, d, extra);
  for (double v : frozen) {
    DynamicalSystem fast = d.family.make(v);
    NullclineSet ns = compute_nullclines(fast, d.family.window);
    std::vector<Equilibrium> eqs = find_equilibria(fast, d.family.window);
    std::vector<LimitCycle> cycles;
    if (auto s = find_stable_cycle_at(d.family, v)) cycles.push_back(*s);
    if (auto u = find_unstable_cycle_at(d.family, v)) cycles.push_back(*u);
    std::string t = tag(v);
    write_nullclines_csv(c.out + "/nullclines_" + t + ".csv", ns);
    write_equilibria_csv(c.out + "/equilibria_" + t + ".csv", eqs);
    write_cycles_csv(c.out + "/cycles_" + t + ".csv", cycles);
    if (c.svg) svg_phase(c.out + "/phase_" + t + ".svg", d, ns, eqs, cycles, v);
    std::cout << d.slow_name << "=" << v << ": " << eqs.size() << " equilibria (";
    for (size_t i = 0; i < eqs.size(); ++i)
      std::cout << (i ? ", " : "") << to_string(eqs[i].klass);
    std::cout << "), " << cycles.size() << " cycle(s)\n";
  }
  return 0;
}

int cmd_bifurcate(const Common& c, double lo, double hi, int steps, bool have_range) {
  SystemDef d = resolve(c);
  if (!have_range) {
    lo = d.sweep_lo;
    hi = d.sweep_hi;
  }
  fs::create_directories(c.out);
  KeyValues extra{{"command", "bifurcate"},
                  {"range_lo", fmt17(lo)},
                  {"range_hi", fmt17(hi)},
                  {"steps", std::to_string(steps)}};
  write_manifest(c, d, extra);
  BifurcationDiagram diag = build_diagram(d.family, lo, hi, steps);
  write_diagram_csvs(c.out, diag);
  for (auto& p : diag.points)
    std::cout << to_string(p.kind) << " at " << d.slow_name << " = " << p.param
              << "  [" << p.lo << ", " << p.hi << "]\n";
  for (auto& [a, b] : diag.bistable)
    std::cout << "bistable interval: (" << a << ", " << b << ")\n";
  if (c.svg) {
    const Window2D& w = d.family.window;
    SvgPlot p(lo, hi, w.x0, w.x1, d.slow_name, d.membrane, d.name + " diagram");
    for (auto& br : diag.eq_branches) {
      std::vector<std::pair<double, double>> pts;
      for (auto& q : br.points) pts.push_back({q.param, q.eq.location[0]});
      p.add_polyline(pts, "black");
    }
    for (auto& br : diag.cycle_branches) {
      std::vector<std::pair<double, double>> a, b;
      for (auto& q : br.points) {
        a.push_back({q.param, q.v_min});
        b.push_back({q.param, q.v_max});
      }
      p.add_polyline(a, br.stable ? "forestgreen" : "gray");
      p.add_polyline(b, br.stable ? "forestgreen" : "gray");
    }
    for (auto& q : diag.points) p.add_marker(q.param, (w.x0 + w.x1) / 2, "crimson", true);
    p.save(c.out + "/diagram.svg");
  }
  return 0;
}

int cmd_metrics(const Common& c, const std::string& input, double I, double t_end) {
  fs::create_directories(c.out);
  Trajectory tr;
  std::string membrane;
  std::string label;
  if (!input.empty()) {
    tr = read_trajectory_csv(input);
    membrane = tr.labels.empty() ? "V" : tr.labels[0];
    label = input;
  } else {
    SystemDef d = resolve(c);
    if (std::isfinite(I)) set_current(d, I);
    if (t_end <= 0) t_end = d.t_end;
    KeyValues extra{{"command", "metrics"}, {"t_end", fmt17(t_end)}};
    write_manifest(c, d, extra);
    tr = run_full(d, t_end, Method::rk45, 0, 1);
    membrane = d.membrane;
    label = d.name;
  }
  SpikeTrain train = detect_spikes(tr, membrane);
  BurstSegmentation seg = segment_bursts(train);
  BurstStatistics st = burst_statistics(seg, tr, membrane);
  write_statistics_csv(c.out + "/metrics.csv", st, label);
  std::cout << "spikes=" << train.spike_times.size() << " bursts=" << seg.bursts.size()
            << " available=" << (st.available ? "yes" : "no");
  if (st.available)
    std::cout << " onset_osc=" << st.onset_oscillations
              << " offset_osc=" << st.offset_oscillations;
  std::cout << "\n";
  if (c.strict && !st.available) {
    std::cerr << "error: burst statistics unavailable (--strict)\n";
    return 1;
  }
  return 0;
}

int cmd_dissect(const Common& c) {
  SystemDef d = resolve(c);
  fs::create_directories(c.out);
  KeyValues extra{{"command", "dissect"},
                  {"range_lo", fmt17(d.sweep_lo)},
                  {"range_hi", fmt17(d.sweep_hi)}};
  write_manifest(c, d, extra);

  Trajectory tr = run_full(d, d.t_end, Method::rk45, 0, 1);
  write_trajectory_csv(c.out + "/trajectory3d.csv", tr);

  BifurcationDiagram diag = build_diagram(d.family, d.sweep_lo, d.sweep_hi, 120);
  write_diagram_csvs(c.out, diag);
  BursterClass bc = classify_burster(diag);

  SpikeTrain train = detect_spikes(tr, d.membrane);
  BurstSegmentation seg = segment_bursts(train);
  BurstStatistics st = burst_statistics(seg, tr, d.membrane);

  std::ostringstream rep;
  rep << "system: " << d.name << "\n";
  if (bc.classified) {
    rep << "burster type: (" << bc.onset << ", " << bc.offset << ")\n";
    rep << "predicted oscillations: onset=" << bc.predicted_onset_oscillations
        << " offset=" << bc.predicted_offset_oscillations << "\n";
  } else {
    rep << "burster type: unclassified (" << bc.diagnostics << ")\n";
  }
  if (st.available) {
    rep << "measured oscillations: onset=" << st.onset_oscillations
        << " offset=" << st.offset_oscillations << "\n";
    bool ok = bc.classified && st.onset_oscillations == bc.predicted_onset_oscillations &&
              st.offset_oscillations == bc.predicted_offset_oscillations;
    rep << "prediction cross-check: " << (ok ? "CONSISTENT" : "MISMATCH") << "\n";
  } else {
    rep << "measured oscillations: unavailable (fewer than 2 bursts)\n";
  }
  for (auto& p : diag.points)
    rep << "bifurcation: " << to_string(p.kind) << " at " << d.slow_name << " = "
        << p.param << "\n";
  for (auto& [a, b] : diag.bistable)
    rep << "bistable interval: (" << a << ", " << b << ")\n";
  write_text_atomic(c.out + "/report.txt", rep.str());
  std::cout << rep.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bursting neuron model & circuit analysis toolkit"};
  app.require_subcommand(1);

  Common c_sim, c_phase, c_bif, c_met, c_dis;
  double I = std::nan(""), t_end = -1, dt = -1;
  int stride = 1;
  std::string method = "rk45";
  auto* sim = app.add_subcommand("simulate", "integrate the full 3-D system");
  add_common(sim, c_sim);
  sim->add_option("--I", I, "injected current override");
  sim->add_option("--t-end", t_end, "simulation horizon");
  sim->add_option("--method", method, "rk45 (default) or rk4");
  sim->add_option("--dt", dt, "fixed step (rk4)");
  sim->add_option("--stride", stride, "record every n-th step");

  std::vector<double> frozen;
  auto* ph = app.add_subcommand("phase", "fast-subsystem phase analysis");
  add_common(ph, c_phase);
  ph->add_option("--at,--nM,--vgs2", frozen, "frozen slow-variable values")
      ->delimiter(',');

  std::string range;
  int steps = 300;
  auto* bf = app.add_subcommand("bifurcate", "fast-subsystem bifurcation diagram");
  add_common(bf, c_bif);
  bf->add_option("--range,--nM,--vgs2", range, "sweep range lo:hi");
  bf->add_option("--steps", steps, "sweep steps");

  std::string input;
  double mI = std::nan(""), mt_end = -1;
  auto* mt = app.add_subcommand("metrics", "burst statistics");
  add_common(mt, c_met, false);
  mt->add_option("--input", input, "trajectory CSV (else run --system inline)");
  mt->add_option("--I", mI, "injected current override");
  mt->add_option("--t-end", mt_end, "simulation horizon");

  auto* ds = app.add_subcommand("dissect", "diagram + classification + 3-D trajectory");
  add_common(ds, c_dis);

  CLI11_PARSE(app, argc, argv);
  try {
    if (sim->parsed()) return cmd_simulate(c_sim, I, t_end, method, dt, stride);
    if (ph->parsed()) return cmd_phase(c_phase, frozen);
    if (bf->parsed()) {
      double lo = 0, hi = 0;
      bool have = false;
      if (!range.empty()) {
        size_t colon = range.find(':');
        if (colon == std::string::npos)
          throw ConfigError("range must be lo:hi, got " + range);
        lo = std::stod(range.substr(0, colon));
        hi = std::stod(range.substr(colon + 1));
        have = true;
      }
      return cmd_bifurcate(c_bif, lo, hi, steps, have);
    }
    if (mt->parsed()) {
      if (input.empty() && c_met.system.empty())
        throw ConfigError("metrics needs --input or --system");
      return cmd_metrics(c_met, input, mI, mt_end);
    }
    if (ds->parsed()) return cmd_dissect(c_dis);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
