#pragma once
// Window/grid evaluation of a planar system's rhs components.
// Two implementations: a serial reference and an OpenMP-parallel kernel with
// identical (deterministic) output; tests compare them bitwise.
#include <vector>

#include "burster/dynsys.hpp"

namespace burster {

struct Window2D {
  double x0 = 0, x1 = 1;
  double y0 = 0, y1 = 1;
  int nx = 400, ny = 400;

  double span_x() const { return x1 - x0; }
  double span_y() const { return y1 - y0; }
  double gx(int i) const { return x0 + span_x() * i / (nx - 1); }
  double gy(int j) const { return y0 + span_y() * j / (ny - 1); }
  bool contains(double x, double y, double margin = 0.0) const {
    return x >= x0 - margin * span_x() && x <= x1 + margin * span_x() &&
           y >= y0 - margin * span_y() && y <= y1 + margin * span_y();
  }
};

struct GridField {
  int nx = 0, ny = 0;
  std::vector<double> f1, f2;  // row-major, index j*nx + i

  double& F1(int i, int j) { return f1[static_cast<size_t>(j) * nx + i]; }
  double& F2(int i, int j) { return f2[static_cast<size_t>(j) * nx + i]; }
  double F1(int i, int j) const { return f1[static_cast<size_t>(j) * nx + i]; }
  double F2(int i, int j) const { return f2[static_cast<size_t>(j) * nx + i]; }
};

GridField evaluate_grid_serial(const DynamicalSystem& fast, const Window2D& w);
GridField evaluate_grid_parallel(const DynamicalSystem& fast, const Window2D& w);

// Parallel when built with OpenMP, serial otherwise.
inline GridField evaluate_grid(const DynamicalSystem& fast, const Window2D& w) {
#ifdef BURSTER_OPENMP
  return evaluate_grid_parallel(fast, w);
#else
  return evaluate_grid_serial(fast, w);
#endif
}

}  // namespace burster
