#pragma once
// CSV export/import: ',' separator, '\n' endings, header row, 17 significant
// digits, atomic writes (temp file + rename).
#include <string>
#include <vector>

#include "burster/bifurcation.hpp"
#include "burster/burst.hpp"
#include "burster/dynsys.hpp"
#include "burster/phase.hpp"

namespace burster {

std::string fmt17(double v);

void write_text_atomic(const std::string& path, const std::string& content);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

void write_nullclines_csv(const std::string& path, const NullclineSet& ns);
void write_equilibria_csv(const std::string& path, const std::vector<Equilibrium>& eqs);
void write_cycles_csv(const std::string& path, const std::vector<LimitCycle>& cycles);

// eq branches: param,V,class ; cycle branches: param,vmin,vmax,period,stability ;
// points: kind,param,evidence_lo,evidence_hi
void write_diagram_csvs(const std::string& dir, const BifurcationDiagram& d);

void write_statistics_csv(const std::string& path, const BurstStatistics& st,
                          const std::string& label);

}  // namespace burster
