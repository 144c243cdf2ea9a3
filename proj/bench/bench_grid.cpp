// Benchmark: serial vs OpenMP grid evaluation of the shipped fast subsystems.
#include <chrono>
#include <cstdio>

#include "burster/circuit.hpp"
#include "burster/gridkernel.hpp"
#include "burster/neuron.hpp"

using namespace burster;

namespace {

double time_ms(const DynamicalSystem& sys, const Window2D& w,
               GridField (*fn)(const DynamicalSystem&, const Window2D&), int reps) {
  volatile double sink = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) {
    GridField g = fn(sys, w);
    sink = sink + g.f1[0] + g.f2.back();
  }
  auto t1 = std::chrono::steady_clock::now();
  (void)sink;
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void bench(const char* name, const DynamicalSystem& sys, const Window2D& w, int reps) {
  double serial = time_ms(sys, w, evaluate_grid_serial, reps);
  double parallel = time_ms(sys, w, evaluate_grid_parallel, reps);
  std::printf("%-12s %4dx%-4d  serial %8.2f ms  parallel %8.2f ms  speedup %.2fx\n",
              name, w.nx, w.ny, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
#ifdef BURSTER_OPENMP
  std::printf("built with OpenMP\n");
#else
  std::printf("built without OpenMP (parallel == serial)\n");
#endif
  Window2D model_w{-90, 30, -0.1, 1.1, 400, 400};
  Window2D big_w{-90, 30, -0.1, 1.1, 1200, 1200};
  DynamicalSystem model = fast_subsystem(param_set_a(), 0.05);
  bench("model-a", model, model_w, 20);
  bench("model-a", model, big_w, 5);

  CircuitParams cp = circuit_a_params();
  Window2D circ_w{0, cp.v_dc, 0, cp.v_dc, 400, 400};
  DynamicalSystem circ = circuit_fast_subsystem(cp, 1.16);
  bench("circuit-a", circ, circ_w, 3);
  return 0;
}
