#include "burster/circuit.hpp"

#include <algorithm>
#include <cmath>

namespace burster {

namespace {

// NMOS law, symmetric in drain/source so v_ds < 0 is handled by terminal swap.
double nmos_terminal(double K, double Vt, double lam, bool half, double v_g,
                     double v_d, double v_s) {
  if (v_d < v_s) return -nmos_terminal(K, Vt, lam, half, v_g, v_s, v_d);
  const double v_gs = v_g - v_s;
  const double v_ds = v_d - v_s;
  const double v_ov = v_gs - Vt;
  if (v_ov <= 0) return 0.0;
  const double f = half ? 0.5 * K : K;
  if (v_ds < v_ov) return f * (2 * v_ov * v_ds - v_ds * v_ds) * (1 + lam * v_ds);
  return f * v_ov * v_ov * (1 + lam * v_ds);
}

}  // namespace

double device_current(const MosfetParams& m, double v_g, double v_d, double v_s) {
  if (m.polarity == Polarity::NMOS)
    return nmos_terminal(m.K, m.V_t0, m.lambda, m.half_factor, v_g, v_d, v_s);
  // PMOS: mirror all terminal voltages; the listed V_t0 maps to -V_t0 in the
  // mirrored frame, so a positive V_t0 denotes depletion-mode operation.
  return -nmos_terminal(m.K, -m.V_t0, m.lambda, m.half_factor, -v_g, -v_d, -v_s);
}

double mosfet_current(const MosfetParams& m, double v_gs, double v_ds) {
  return device_current(m, v_gs, v_ds, 0.0);
}

namespace {

double node_voltage(Node n, double v_dc, double v_out, double v_m) {
  switch (n) {
    case Node::vdc: return v_dc;
    case Node::vout: return v_out;
    default: return v_m;
  }
}

// Current a device injects INTO a given node (gate draws nothing).
double current_into(const MosfetParams& m, const DeviceWiring& w, Node node,
                    double v_dc, double v_out, double v_m) {
  const double i = device_current(m, node_voltage(w.gate, v_dc, v_out, v_m),
                                  node_voltage(w.drain, v_dc, v_out, v_m),
                                  node_voltage(w.source, v_dc, v_out, v_m));
  if (w.source == node) return i;
  if (w.drain == node) return -i;
  return 0.0;
}

}  // namespace

double nndr_current(const NndrBranch& b, double v_out) {
  auto residual = [&](double v_m) {
    return current_into(b.q2, b.w2, Node::internal, b.v_dc, v_out, v_m) +
           current_into(b.q3, b.w3, Node::internal, b.v_dc, v_out, v_m);
  };
  auto branch_current = [&](double v_m) {
    return current_into(b.q2, b.w2, Node::vout, b.v_dc, v_out, v_m) +
           current_into(b.q3, b.w3, Node::vout, b.v_dc, v_out, v_m);
  };

  double lo = std::min({0.0, v_out, b.v_dc});
  double hi = std::max({0.0, v_out, b.v_dc});
  double rlo = residual(lo), rhi = residual(hi);
  if (rlo == 0.0 && rhi == 0.0) {
    // Both endpoints balance; scan for an interior imbalance before giving up.
    double worst = 0.0;
    double a = lo, b2 = hi;
    bool found = false;
    double prev_v = lo, prev_r = rlo;
    for (int i = 1; i <= 128; ++i) {
      double v = lo + (hi - lo) * i / 128.0;
      double r = residual(v);
      worst = std::max(worst, std::fabs(r));
      if (!found && prev_r * r <= 0.0 && (prev_r != 0.0 || r != 0.0)) {
        a = prev_v;
        b2 = v;
        found = true;
      }
      prev_v = v;
      prev_r = r;
    }
    if (!found) {
      if (worst < 1e-12) return 0.0;  // both devices cut off everywhere
      throw TopologyError("nndr residual has no sign change (wrong terminal assignment)");
    }
    lo = a;
    hi = b2;
    rlo = residual(lo);
  } else if (rlo * rhi > 0.0) {
    bool found = false;
    double prev_v = lo, prev_r = rlo;
    for (int i = 1; i <= 128; ++i) {
      double v = lo + (hi - lo) * i / 128.0;
      double r = residual(v);
      if (prev_r * r <= 0.0) {
        lo = prev_v;
        hi = v;
        rlo = prev_r;
        found = true;
        break;
      }
      prev_v = v;
      prev_r = r;
    }
    if (!found)
      throw TopologyError("nndr residual has no sign change (wrong terminal assignment)");
  }

  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    double r = residual(mid);
    if (std::fabs(r) < 1e-12 && it >= 40) {
      lo = hi = mid;
      break;
    }
    if (rlo * r <= 0.0)
      hi = mid;
    else {
      lo = mid;
      rlo = r;
    }
  }
  return branch_current(0.5 * (lo + hi));
}

Vec circuit_rhs(const Vec& s, const CircuitParams& p) {
  const double Vout = s[0], VGS1 = s[1], VGS2 = s[2];
  const double i1 = mosfet_current(p.q1, VGS1, Vout);
  const double i4 = mosfet_current(p.q4, VGS2, Vout);
  const double i3 = nndr_current(p.nndr, Vout);
  const double leak = p.R3 ? Vout / *p.R3 : 0.0;
  Vec d = Vec::zeros(3);
  d[0] = (p.I - (Vout - VGS1) / p.R1 - i1 + i3 - (Vout - VGS2) / p.R2 - i4 - leak) / p.C1;
  d[1] = (Vout - VGS1) / (p.C2 * p.R1);
  d[2] = (Vout - VGS2) / (p.C3 * p.R2);
  return d;
}

DynamicalSystem circuit_system(const CircuitParams& p) {
  DynamicalSystem sys;
  sys.dim = 3;
  sys.labels = {"Vout", "VGS1", "VGS2"};
  sys.rhs = [p](double, const Vec& x, Vec& dx) { dx = circuit_rhs(x, p); };
  return sys;
}

DynamicalSystem circuit_fast_subsystem(const CircuitParams& p, double vgs2_frozen) {
  DynamicalSystem sys;
  sys.dim = 2;
  sys.labels = {"Vout", "VGS1"};
  sys.rhs = [p, vgs2_frozen](double, const Vec& x, Vec& dx) {
    Vec full{x[0], x[1], vgs2_frozen};
    Vec d = circuit_rhs(full, p);
    dx = Vec::zeros(2);
    dx[0] = d[0];
    dx[1] = d[1];
  };
  return sys;
}

CircuitParams circuit_a_params() {
  CircuitParams p;
  p.C1 = 5e-9;
  p.C2 = 1e-9;
  p.C3 = 100e-9;
  p.R1 = 1e6;
  p.R2 = 1e6;
  p.R3 = 0.5e6;
  p.v_dc = 4.5;
  p.I = 1.2e-6;
  p.q1 = {Polarity::NMOS, 100e-6, 2.0, 0.01};
  p.q4 = {Polarity::NMOS, 40e-6, 1.0, 0.01};
  p.nndr.q2 = {Polarity::PMOS, 40e-6, 2.0, 0.01};
  p.nndr.q3 = {Polarity::NMOS, 40e-6, -2.0, 0.01};
  p.nndr.v_dc = 4.5;
  return p;
}

CircuitParams circuit_b_params() {
  CircuitParams p;
  p.C1 = 5e-9;
  p.C2 = 1e-9;
  p.C3 = 100e-9;
  p.R1 = 1e6;
  p.R2 = 1e6;
  p.R3.reset();
  p.v_dc = 3.5;
  p.I = 5.6e-6;
  p.q1 = {Polarity::NMOS, 40e-6, -0.5, 0.01};
  p.q4 = {Polarity::NMOS, 40e-6, 0.3, 0.01};
  p.nndr.q2 = {Polarity::PMOS, 100e-6, 2.0, 0.01};
  p.nndr.q3 = {Polarity::NMOS, 100e-6, -2.0, 0.01};
  p.nndr.v_dc = 3.5;
  return p;
}

}  // namespace burster
