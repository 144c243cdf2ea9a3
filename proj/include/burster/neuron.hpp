#pragma once
// I_Na,p + I_K + I_K(M) model: Boltzmann activations, 3-D right-hand side,
// named parameter sets, dissected fast subsystem, and g_M calibration.
#include <string>

#include "burster/dynsys.hpp"

namespace burster {

struct BoltzmannParams {
  double v_half = 0;  // mV
  double k = 1;       // mV slope factor, nonzero
};

// 1/(1+exp((v_half - V)/k)); exponent clamped against overflow.
double boltzmann(double V, const BoltzmannParams& p);

struct InapIkIkmParams {
  double C = 1;
  double E_L = 0, E_Na = 0, E_K = 0;       // mV
  double g_L = 0, g_Na = 0, g_K = 0, g_M = 0;
  BoltzmannParams m_inf, n_inf, n_inf_M;
  double tau = 1, tau_M = 10;              // ms
  double I = 0;
};

// State order (V, n, nM). n and nM are intentionally not clamped to [0,1].
Vec model_rhs(const Vec& state, const InapIkIkmParams& p);

DynamicalSystem model_system(const InapIkIkmParams& p);

// 2-D (V, n) system with nM pinned at nM_frozen (dissection).
DynamicalSystem fast_subsystem(const InapIkIkmParams& p, double nM_frozen);

// Fig. 2 / Fig. 5 caption values; g_M from the shipped calibration.
InapIkIkmParams param_set_a();
InapIkIkmParams param_set_b();

// Physiological rest-like default start: (E_L, n_inf(E_L), n_inf_M(E_L)).
Vec model_default_state(const InapIkIkmParams& p);

struct CalibrationTargets {
  // NaN = not targeted. Locations are in nM.
  double fold = std::nan("");
  double sho = std::nan("");
  double hopf = std::nan("");
  double I_high = 0, I_low = 0;  // full model must burst at I_high, rest at I_low
  double t_sim = 400, t_transient = 100;  // ms horizon for the burst/rest gate
};

struct CalibrationResult {
  double g_M = 0;
  double achieved_fold = std::nan("");
  double achieved_sho = std::nan("");
  double achieved_hopf = std::nan("");
  double objective = 0;
  std::string report;  // human-readable sweep/refinement log
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Log-grid search g_M in [0.1, 100] (60 points) + golden-section refinement
// minimizing the squared mismatch of detected bifurcation locations.
CalibrationResult calibrate_gM(InapIkIkmParams base, const CalibrationTargets& targets);

}  // namespace burster
