#pragma once
// Square-law MOSFET device model, the two-transistor NNDR branch with a
// configurable terminal-assignment table, and the two bursting circuits.
#include <array>
#include <optional>
#include <string>

#include "burster/dynsys.hpp"

namespace burster {

enum class Polarity { NMOS, PMOS };

struct MosfetParams {
  Polarity polarity = Polarity::NMOS;
  double K = 0;        // A/V^2
  double V_t0 = 0;     // V; negative on NMOS => depletion
  double lambda = 0;   // 1/V
  bool half_factor = true;  // i_sat = (K/2) v_ov^2 when true, K v_ov^2 when false
};

// Drain->source current with v_gs, v_ds referenced to the source terminal.
// PMOS by sign mirror (negated voltages, threshold -V_t0).
double mosfet_current(const MosfetParams& m, double v_gs, double v_ds);

// Terminal-based form, symmetric in drain/source; current flows d -> s.
double device_current(const MosfetParams& m, double v_g, double v_d, double v_s);

// Node labels usable in the terminal-assignment table.
enum class Node { vdc, vout, internal };

struct DeviceWiring {
  Node drain, source, gate;
};

struct NndrBranch {
  MosfetParams q2;  // PMOS
  MosfetParams q3;  // depletion NMOS
  double v_dc = 0;
  DeviceWiring w2{Node::vout, Node::internal, Node::vdc};   // lambda-diode default
  DeviceWiring w3{Node::vdc, Node::internal, Node::vout};
};

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// DC branch current entering the v_out node; the internal series node is
// solved by bisection on the current-balance residual (tolerance 1e-12 A).
double nndr_current(const NndrBranch& b, double v_out);

struct CircuitParams {
  double C1 = 0, C2 = 0, C3 = 0;   // F
  double R1 = 0, R2 = 0;           // Ohm
  std::optional<double> R3;        // Ohm; absent for Circuit B
  double v_dc = 0;                 // V
  double I = 0;                    // A
  MosfetParams q1, q4;             // NMOS
  NndrBranch nndr;
};

// State order (Vout, VGS1, VGS2).
Vec circuit_rhs(const Vec& state, const CircuitParams& p);
inline Vec circuit_a_rhs(const Vec& s, const CircuitParams& p) { return circuit_rhs(s, p); }
inline Vec circuit_b_rhs(const Vec& s, const CircuitParams& p) { return circuit_rhs(s, p); }

DynamicalSystem circuit_system(const CircuitParams& p);

// 2-D (Vout, VGS1) system with VGS2 pinned (dissection).
DynamicalSystem circuit_fast_subsystem(const CircuitParams& p, double vgs2_frozen);

// Fig. 9 / Fig. 13 caption values.
CircuitParams circuit_a_params();
CircuitParams circuit_b_params();

}  // namespace burster
