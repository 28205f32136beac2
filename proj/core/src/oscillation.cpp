#include "lgosc/oscillation.hpp"

#include <cmath>
#include <string>

#include "lgosc/error.hpp"
#include "lgosc/units.hpp"

namespace lgosc {
namespace {

void require_energy(double energy_gev) {
  if (!(energy_gev > 0.0) || !std::isfinite(energy_gev)) {
    throw DomainError("neutrino energy must be positive and finite, got " +
                      std::to_string(energy_gev));
  }
}

void require_amplitude(double sin2_2theta) {
  if (!(sin2_2theta >= 0.0 && sin2_2theta <= 1.0)) {
    throw DomainError("sin^2(2theta) must lie in [0, 1], got " + std::to_string(sin2_2theta));
  }
}

}  // namespace

void OscParams::validate() const {
  if (!std::isfinite(dm2)) throw DomainError("dm2 must be finite");
  require_amplitude(sin2_2theta);
  if (!(baseline_km > 0.0) || !std::isfinite(baseline_km)) {
    throw DomainError("baseline_km must be positive, got " + std::to_string(baseline_km));
  }
  if (!(v_c >= 0.0) || !std::isfinite(v_c)) throw DomainError("v_c must be non-negative");
  if (!(v_n >= 0.0) || !std::isfinite(v_n)) throw DomainError("v_n must be non-negative");
}

double OscParams::cos_2theta() const { return std::sqrt(1.0 - sin2_2theta); }

double osc_frequency(const OscParams& params, double energy_gev) {
  require_energy(energy_gev);
  return params.dm2 / (2.0 * energy_gev * units::kEvPerGev);
}

double accumulated_phase(const OscParams& params, double energy_gev) {
  require_energy(energy_gev);
  return units::kPhaseFactor * std::abs(params.dm2) * params.baseline_km / energy_gev;
}

double accumulated_phase(const OscParams& params, double energy_gev, double from_km,
                         double to_km) {
  require_energy(energy_gev);
  const double interval = to_km - from_km;
  return units::kPhaseFactor * std::abs(params.dm2) * interval / energy_gev;
}

PhasePoint phase_point(const OscParams& params, double energy_gev) {
  return {energy_gev, accumulated_phase(params, energy_gev)};
}

MatterParams matter_params(const OscParams& params, double energy_gev) {
  const double omega = osc_frequency(params, energy_gev);
  const double sin_2theta = std::sqrt(params.sin2_2theta);
  const double rx = omega * sin_2theta;
  const double rz = params.v_c - omega * params.cos_2theta();
  const double norm = std::hypot(rx, rz);
  if (norm == 0.0) return {0.0, 0.0, true};
  return {norm, (rx / norm) * (rx / norm), false};
}

double matter_phase(const OscParams& params, double energy_gev) {
  if (params.v_c == 0.0) return accumulated_phase(params, energy_gev);
  const MatterParams m = matter_params(params, energy_gev);
  return 0.5 * m.omega_m * params.baseline_km * units::kInverseEvPerKm;
}

double survival_probability(double sin2_2theta, double psi) {
  require_amplitude(sin2_2theta);
  const double s = std::sin(psi);
  return 1.0 - sin2_2theta * s * s;
}

double correlation(double sin2_2theta, double psi) {
  require_amplitude(sin2_2theta);
  const double s = std::sin(psi);
  return 1.0 - 2.0 * sin2_2theta * s * s;
}

double vacuum_survival_probability(const OscParams& params, double energy_gev) {
  return survival_probability(params.sin2_2theta, accumulated_phase(params, energy_gev));
}

double survival_probability(const OscParams& params, double energy_gev) {
  if (params.v_c == 0.0) return vacuum_survival_probability(params, energy_gev);
  const MatterParams m = matter_params(params, energy_gev);
  if (m.degenerate) return 1.0;
  return survival_probability(m.sin2_2theta_m, matter_phase(params, energy_gev));
}

std::array<double, 3> precession_axis(const OscParams& params, double energy_gev) {
  const double omega = osc_frequency(params, energy_gev);
  const double rx = omega * std::sqrt(params.sin2_2theta);
  const double rz = params.v_c - omega * params.cos_2theta();
  const double norm = std::hypot(rx, rz);
  if (norm == 0.0) return {0.0, 0.0, 1.0};
  return {rx / norm, 0.0, rz / norm};
}

double charged_current_potential(double density_g_cm3, double electron_fraction) {
  if (!(density_g_cm3 >= 0.0) || !(electron_fraction >= 0.0 && electron_fraction <= 1.0)) {
    throw DomainError("density must be non-negative and electron fraction in [0, 1]");
  }
  return units::kCcPotentialEvPerDensity * density_g_cm3 * electron_fraction;
}

}  // namespace lgosc
