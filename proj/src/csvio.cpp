#include "burster/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace burster {

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " -> " + path);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ostringstream out;
  out << "t";
  for (auto& l : traj.labels) out << "," << l;
  out << "\n";
  for (size_t i = 0; i < traj.size(); ++i) {
    out << fmt17(traj.times[i]);
    for (int c = 0; c < traj.states[i].size(); ++c)
      out << "," << fmt17(traj.states[i][c]);
    out << "\n";
  }
  write_text_atomic(path, out.str());
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open trajectory CSV: " + path);
  Trajectory traj;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (lineno == 1) {
      if (cells.empty() || cells[0] != "t")
        throw std::runtime_error(path + ": header must start with 't'");
      for (size_t i = 1; i < cells.size(); ++i) traj.labels.push_back(cells[i]);
      continue;
    }
    if (cells.size() != traj.labels.size() + 1)
      throw std::runtime_error(path + ": wrong cell count at row " + std::to_string(lineno));
    try {
      traj.times.push_back(std::stod(cells[0]));
      Vec s = Vec::zeros(static_cast<int>(traj.labels.size()));
      for (size_t i = 1; i < cells.size(); ++i) s[static_cast<int>(i - 1)] = std::stod(cells[i]);
      traj.states.push_back(s);
    } catch (...) {
      throw std::runtime_error(path + ": parse error at row " + std::to_string(lineno));
    }
  }
  return traj;
}

namespace {

void write_polylines(std::ostringstream& out, const std::vector<Polyline>& ps,
                     int& curve_id) {
  for (auto& p : ps) {
    for (auto& pt : p.pts)
      out << curve_id << "," << fmt17(pt[0]) << "," << fmt17(pt[1]) << "\n";
    ++curve_id;
  }
}

}  // namespace

void write_nullclines_csv(const std::string& path, const NullclineSet& ns) {
  std::ostringstream out;
  out << "curve_id,x,y\n";
  int id = 0;
  write_polylines(out, ns.curves_f1, id);
  write_polylines(out, ns.curves_f2, id);
  write_text_atomic(path, out.str());
}

void write_equilibria_csv(const std::string& path, const std::vector<Equilibrium>& eqs) {
  std::ostringstream out;
  out << "x,y,class,re1,im1,re2,im2\n";
  for (auto& e : eqs)
    out << fmt17(e.location[0]) << "," << fmt17(e.location[1]) << "," << to_string(e.klass)
        << "," << fmt17(e.ev1.real()) << "," << fmt17(e.ev1.imag()) << ","
        << fmt17(e.ev2.real()) << "," << fmt17(e.ev2.imag()) << "\n";
  write_text_atomic(path, out.str());
}

void write_cycles_csv(const std::string& path, const std::vector<LimitCycle>& cycles) {
  std::ostringstream out;
  out << "curve_id,x,y\n";
  for (size_t k = 0; k < cycles.size(); ++k)
    for (auto& s : cycles[k].samples)
      out << k << "," << fmt17(s[0]) << "," << fmt17(s[1]) << "\n";
  write_text_atomic(path, out.str());
}

void write_diagram_csvs(const std::string& dir, const BifurcationDiagram& d) {
  {
    std::ostringstream out;
    out << "branch,param,V,class\n";
    for (size_t b = 0; b < d.eq_branches.size(); ++b)
      for (auto& p : d.eq_branches[b].points)
        out << b << "," << fmt17(p.param) << "," << fmt17(p.eq.location[0]) << ","
            << to_string(p.eq.klass) << "\n";
    write_text_atomic(dir + "/equilibrium_branches.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "branch,param,vmin,vmax,period,stability\n";
    for (size_t b = 0; b < d.cycle_branches.size(); ++b)
      for (auto& p : d.cycle_branches[b].points)
        out << b << "," << fmt17(p.param) << "," << fmt17(p.v_min) << "," << fmt17(p.v_max)
            << "," << fmt17(p.period) << ","
            << (d.cycle_branches[b].stable ? "stable" : "unstable") << "\n";
    write_text_atomic(dir + "/cycle_branches.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "kind,param,evidence_lo,evidence_hi\n";
    for (auto& p : d.points)
      out << to_string(p.kind) << "," << fmt17(p.param) << "," << fmt17(p.lo) << ","
          << fmt17(p.hi) << "\n";
    write_text_atomic(dir + "/points.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "lo,hi\n";
    for (auto& [a, b] : d.bistable) out << fmt17(a) << "," << fmt17(b) << "\n";
    write_text_atomic(dir + "/bistable.csv", out.str());
  }
}

void write_statistics_csv(const std::string& path, const BurstStatistics& st,
                          const std::string& label) {
  std::ostringstream out;
  out << "label,available,n_bursts,spikes_per_burst,mean_burst_duration,"
         "mean_interburst_interval,burst_period,duty_cycle,onset_oscillations,"
         "offset_oscillations,onset_count,offset_count,threshold,gap_factor,"
         "noise_floor_frac\n";
  out << label << "," << (st.available ? 1 : 0) << "," << st.spikes_per_burst.size() << ",";
  for (size_t i = 0; i < st.spikes_per_burst.size(); ++i)
    out << (i ? ";" : "") << st.spikes_per_burst[i];
  out << "," << fmt17(st.mean_burst_duration) << "," << fmt17(st.mean_interburst_interval)
      << "," << fmt17(st.burst_period) << "," << fmt17(st.duty_cycle) << ","
      << (st.onset_oscillations ? 1 : 0) << "," << (st.offset_oscillations ? 1 : 0) << ","
      << st.onset_count << "," << st.offset_count << "," << fmt17(st.threshold) << ","
      << fmt17(st.gap_factor) << "," << fmt17(st.noise_floor_frac) << "\n";
  write_text_atomic(path, out.str());
}

}  // namespace burster
