#pragma once
// Registry of the four shipped systems (model-a, model-b, circuit-a,
// circuit-b) with their default windows, horizons, sweep ranges, figure-panel
// frozen values, and resolved config echo.
#include <string>
#include <vector>

#include "burster/bifurcation.hpp"
#include "burster/config.hpp"

namespace burster {

struct SystemDef {
  std::string name;
  bool is_circuit = false;
  std::string time_unit;   // "ms" (model) or "s" (circuit)
  std::string membrane;    // "V" or "Vout"
  std::string slow_name;   // "nM" or "VGS2"

  DynamicalSystem full;    // 3-D system
  FastFamily family;       // parameterized fast subsystem

  Vec x0;                  // default initial condition
  double t_end = 0;        // default simulation horizon
  double max_step = 0;     // integration step cap for spike resolution
  double transient = 0;    // transient window for burst counting

  double sweep_lo = 0, sweep_hi = 0;
  std::vector<double> panel_values;   // figure-panel frozen slow values
  double I_rest = 0, I_burst = 0;

  KeyValues config;        // fully resolved parameter echo
};

// name in {model-a, model-b, circuit-a, circuit-b}.
SystemDef make_system(const std::string& name);

// Same defaults as the named built-in, parameters replaced from a config file.
SystemDef make_system_with_config(const std::string& name, const KeyValues& kv);

// Override the injected current of an existing definition.
void set_current(SystemDef& def, double I);

std::vector<std::string> system_names();

}  // namespace burster
