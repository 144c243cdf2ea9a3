#include "burster/systems.hpp"

#include "burster/csvio.hpp"

namespace burster {

namespace {

SystemDef model_def(const std::string& name, const InapIkIkmParams& p) {
  SystemDef d;
  d.name = name;
  d.is_circuit = false;
  d.time_unit = "ms";
  d.membrane = "V";
  d.slow_name = "nM";
  d.full = model_system(p);
  d.family.param_name = "nM";
  d.family.window = {-90, 30, -0.1, 1.1, 400, 400};
  d.family.ccfg.t_char = 20 * p.tau;
  d.family.seed_grid = 60;
  d.family.make = [p](double nM) { return fast_subsystem(p, nM); };
  d.x0 = model_default_state(p);
  d.config = model_to_config(p);
  return d;
}

SystemDef circuit_def(const std::string& name, const CircuitParams& p) {
  SystemDef d;
  d.name = name;
  d.is_circuit = true;
  d.time_unit = "s";
  d.membrane = "Vout";
  d.slow_name = "VGS2";
  d.full = circuit_system(p);
  d.family.param_name = "VGS2";
  d.family.window = {0, p.v_dc, 0, p.v_dc, 400, 400};
  d.family.ccfg.t_char = 0.01;
  d.family.seed_grid = 60;
  d.family.make = [p](double v) { return circuit_fast_subsystem(p, v); };
  d.t_end = 0.5;
  d.max_step = 2e-5;
  d.transient = 0.1;
  d.x0 = Vec{0, 0, 0};
  d.config = circuit_to_config(p);
  return d;
}

}  // namespace

SystemDef make_system(const std::string& name) {
  if (name == "model-a") {
    SystemDef d = model_def(name, param_set_a());
    d.t_end = 400;
    d.max_step = 0.05;
    d.transient = 100;
    d.sweep_lo = -0.05;
    d.sweep_hi = 0.1;
    d.panel_values = {-0.05, 0.05, 0.062, 0.07};
    d.I_rest = 4;
    d.I_burst = 5;
    return d;
  }
  if (name == "model-b") {
    SystemDef d = model_def(name, param_set_b());
    d.t_end = 3000;
    d.max_step = 0.2;
    d.transient = 300;
    d.sweep_lo = 0.0;
    d.sweep_hi = 0.2;
    d.panel_values = {0.055, 0.065, 0.14, 0.15};
    d.I_rest = 45;
    d.I_burst = 55;
    return d;
  }
  if (name == "circuit-a") {
    SystemDef d = circuit_def(name, circuit_a_params());
    d.x0 = Vec{3.0, 2.5, 1.0};  // spiking-basin start; the full system is bistable
    d.sweep_lo = 1.0;
    d.sweep_hi = 1.3;
    d.panel_values = {1.12, 1.16, 1.227, 1.23};
    d.I_rest = 0.8e-6;
    d.I_burst = 1.2e-6;
    return d;
  }
  if (name == "circuit-b") {
    SystemDef d = circuit_def(name, circuit_b_params());
    d.t_end = 2.0;
    d.transient = 0.25;
    d.sweep_lo = 0.55;
    d.sweep_hi = 0.70;
    d.panel_values = {0.61, 0.62, 0.6583, 0.66};
    d.I_rest = 5e-6;
    d.I_burst = 5.6e-6;
    return d;
  }
  throw std::invalid_argument("unknown system: " + name +
                              " (expected model-a, model-b, circuit-a, circuit-b)");
}

SystemDef make_system_with_config(const std::string& name, const KeyValues& kv) {
  SystemDef base = make_system(name);
  if (base.is_circuit) {
    CircuitParams p = circuit_from_config(kv);
    SystemDef d = circuit_def(name, p);
    d.t_end = base.t_end;
    d.max_step = base.max_step;
    d.transient = base.transient;
    d.x0 = base.x0;
    d.sweep_lo = base.sweep_lo;
    d.sweep_hi = base.sweep_hi;
    d.panel_values = base.panel_values;
    d.I_rest = base.I_rest;
    d.I_burst = base.I_burst;
    return d;
  }
  InapIkIkmParams p = model_from_config(kv);
  SystemDef d = model_def(name, p);
  d.t_end = base.t_end;
  d.max_step = base.max_step;
  d.transient = base.transient;
  d.sweep_lo = base.sweep_lo;
  d.sweep_hi = base.sweep_hi;
  d.panel_values = base.panel_values;
  d.I_rest = base.I_rest;
  d.I_burst = base.I_burst;
  return d;
}

void set_current(SystemDef& def, double I) {
  KeyValues kv = def.config;
  kv["I"] = fmt17(I);
  SystemDef d = make_system_with_config(def.name, kv);
  d.x0 = def.x0;
  def = d;
}

std::vector<std::string> system_names() {
  return {"model-a", "model-b", "circuit-a", "circuit-b"};
}

}  // namespace burster
