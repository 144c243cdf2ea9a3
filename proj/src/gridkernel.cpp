#include "burster/gridkernel.hpp"

namespace burster {

GridField evaluate_grid_serial(const DynamicalSystem& fast, const Window2D& w) {
  GridField g;
  g.nx = w.nx;
  g.ny = w.ny;
  g.f1.assign(static_cast<size_t>(w.nx) * w.ny, 0.0);
  g.f2.assign(static_cast<size_t>(w.nx) * w.ny, 0.0);
  Vec dx = Vec::zeros(2);
  for (int j = 0; j < w.ny; ++j)
    for (int i = 0; i < w.nx; ++i) {
      Vec x{w.gx(i), w.gy(j)};
      fast.rhs(0.0, x, dx);
      g.F1(i, j) = dx[0];
      g.F2(i, j) = dx[1];
    }
  return g;
}

GridField evaluate_grid_parallel(const DynamicalSystem& fast, const Window2D& w) {
  GridField g;
  g.nx = w.nx;
  g.ny = w.ny;
  g.f1.assign(static_cast<size_t>(w.nx) * w.ny, 0.0);
  g.f2.assign(static_cast<size_t>(w.nx) * w.ny, 0.0);
#ifdef BURSTER_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < w.ny; ++j) {
    Vec dx = Vec::zeros(2);
    for (int i = 0; i < w.nx; ++i) {
      Vec x{w.gx(i), w.gy(j)};
      fast.rhs(0.0, x, dx);
      g.F1(i, j) = dx[0];
      g.F2(i, j) = dx[1];
    }
  }
  return g;
}

}  // namespace burster
