#pragma once

// Two-flavor neutrino oscillations at a fixed baseline: phases, survival
// probabilities, two-time correlations, and constant-density matter effects.
//
// Flavor basis: |nu_mu> = (1, 0), |nu_e> = (0, 1); the measured observable is
// sigma_z. The traceless oscillation Hamiltonian is r.sigma / 2 with
//   r = (omega sin2theta, 0, V_C - omega cos2theta),  omega = dm2 / (2E).
// The identity part of the Hamiltonian (momentum, summed masses, V_C/2, V_N)
// shifts only the global phase and is never used in a probability.

#include <array>

namespace lgosc {

struct OscParams {
  double dm2 = 0.0;           // m2^2 - m1^2 [eV^2]
  double sin2_2theta = 0.0;   // vacuum mixing amplitude sin^2(2 theta)
  double v_c = 0.0;           // charged-current potential [eV]
  double v_n = 0.0;           // neutral-current potential [eV]
  double baseline_km = 0.0;   // source-detector distance [km]

  // Throws DomainError unless 0 <= sin2_2theta <= 1, baseline_km > 0 and
  // v_c, v_n >= 0 (all finite).
  void validate() const;

  // cos(2 theta), taking theta in the first octant (cos 2theta >= 0).
  double cos_2theta() const;
};

struct PhasePoint {
  double energy_gev = 0.0;
  double psi = 0.0;
};

struct MatterParams {
  double omega_m = 0.0;         // |r| [eV]
  double sin2_2theta_m = 0.0;   // effective mixing amplitude
  bool degenerate = false;      // |r| == 0; sin2_2theta_m is reported as 0
};

// dm2 / (2E) in eV. Negative dm2 gives negative frequency.
double osc_frequency(const OscParams& params, double energy_gev);

// Vacuum phase |dm2| L / (4E), with L and E converted to natural units.
double accumulated_phase(const OscParams& params, double energy_gev);

// Phase accumulated over the propagation interval [from_km, to_km]. Depends
// only on the interval length (stationarity).
double accumulated_phase(const OscParams& params, double energy_gev, double from_km,
                         double to_km);

PhasePoint phase_point(const OscParams& params, double energy_gev);

// Effective frequency and mixing amplitude in constant-density matter.
MatterParams matter_params(const OscParams& params, double energy_gev);

// Phase accumulated over the baseline with the matter-modified frequency,
// omega_m L / 2. Equals accumulated_phase when v_c == 0.
double matter_phase(const OscParams& params, double energy_gev);

// P_mumu = 1 - sin2_2theta sin^2(psi).
double survival_probability(double sin2_2theta, double psi);

// C = 1 - 2 sin2_2theta sin^2(psi) = 2 P_mumu - 1.
double correlation(double sin2_2theta, double psi);

// Survival probability at the configured baseline, in vacuum or in matter
// depending on whether params.v_c is zero.
double survival_probability(const OscParams& params, double energy_gev);
double vacuum_survival_probability(const OscParams& params, double energy_gev);

// Unit direction of r in the (x, y, z) Bloch frame.
std::array<double, 3> precession_axis(const OscParams& params, double energy_gev);

// V_C for matter of density rho [g/cm^3] and electron fraction Y_e.
double charged_current_potential(double density_g_cm3, double electron_fraction);

}  // namespace lgosc
