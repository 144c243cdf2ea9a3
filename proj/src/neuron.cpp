#include "burster/neuron.hpp"

#include <algorithm>
#include <cmath>

namespace burster {

double boltzmann(double V, const BoltzmannParams& p) {
  double z = (p.v_half - V) / p.k;
  z = std::clamp(z, -700.0, 700.0);
  return 1.0 / (1.0 + std::exp(z));
}

Vec model_rhs(const Vec& s, const InapIkIkmParams& p) {
  const double V = s[0], n = s[1], nM = s[2];
  Vec d = Vec::zeros(3);
  d[0] = (p.I - p.g_L * (V - p.E_L) - p.g_Na * boltzmann(V, p.m_inf) * (V - p.E_Na) -
          p.g_K * n * (V - p.E_K) - p.g_M * nM * (V - p.E_K)) /
         p.C;
  d[1] = (boltzmann(V, p.n_inf) - n) / p.tau;
  d[2] = (boltzmann(V, p.n_inf_M) - nM) / p.tau_M;
  return d;
}

DynamicalSystem model_system(const InapIkIkmParams& p) {
  DynamicalSystem sys;
  sys.dim = 3;
  sys.labels = {"V", "n", "nM"};
  sys.rhs = [p](double, const Vec& x, Vec& dx) { dx = model_rhs(x, p); };
  return sys;
}

DynamicalSystem fast_subsystem(const InapIkIkmParams& p, double nM_frozen) {
  DynamicalSystem sys;
  sys.dim = 2;
  sys.labels = {"V", "n"};
  sys.rhs = [p, nM_frozen](double, const Vec& x, Vec& dx) {
    Vec full{x[0], x[1], nM_frozen};
    Vec d = model_rhs(full, p);
    dx = Vec::zeros(2);
    dx[0] = d[0];
    dx[1] = d[1];
  };
  return sys;
}

InapIkIkmParams param_set_a() {
  InapIkIkmParams p;
  p.C = 1;
  p.E_L = -80;
  p.E_Na = 60;
  p.E_K = -90;
  p.g_L = 8;
  p.g_Na = 20;
  p.g_K = 9;
  p.g_M = 5.1880897;  // calibrated (see calibrate_gM and the shipped config)
  p.m_inf = {-20, 15};
  p.n_inf = {-25, 5};
  p.n_inf_M = {-20, 5};
  p.tau = 0.152;
  p.tau_M = 20;
  p.I = 5;
  return p;
}

InapIkIkmParams param_set_b() {
  InapIkIkmParams p;
  p.C = 1;
  p.E_L = -78;
  p.E_Na = 60;
  p.E_K = -90;
  p.g_L = 1;
  p.g_Na = 4;
  p.g_K = 4;
  p.g_M = 1.4919666;  // calibrated (see calibrate_gM and the shipped config)
  p.m_inf = {-30, 7};
  p.n_inf = {-45, 5};
  p.n_inf_M = {-20, 5};
  p.tau = 1;
  p.tau_M = 60;
  p.I = 55;
  return p;
}

Vec model_default_state(const InapIkIkmParams& p) {
  return Vec{p.E_L, boltzmann(p.E_L, p.n_inf), boltzmann(p.E_L, p.n_inf_M)};
}

}  // namespace burster
