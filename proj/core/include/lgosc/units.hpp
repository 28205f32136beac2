#pragma once

// Physical constants and the unit conversions used to turn natural-unit
// formulas into lab units (eV^2, km, GeV).

namespace lgosc::units {

// CODATA 2018.
inline constexpr double kHbarEvSeconds = 6.582119569e-16;
inline constexpr double kSpeedOfLightMetersPerSecond = 299792458.0;
inline constexpr double kFermiConstantPerGev2 = 1.1663787e-5;
inline constexpr double kAvogadro = 6.02214076e23;

inline constexpr double kEvPerGev = 1.0e9;
inline constexpr double kMetersPerKm = 1.0e3;
inline constexpr double kCentimetersPerMeter = 1.0e2;

// hbar*c in eV*m (~1.97327e-7).
inline constexpr double kHbarCEvMeters = kHbarEvSeconds * kSpeedOfLightMetersPerSecond;

// One kilometre expressed in natural units of 1/eV.
inline constexpr double kInverseEvPerKm = kMetersPerKm / kHbarCEvMeters;

// Phase factor: dm2 L / (4 E) = kPhaseFactor * dm2[eV^2] * L[km] / E[GeV] (~1.26693).
inline constexpr double kPhaseFactor = kInverseEvPerKm / (4.0 * kEvPerGev);

// sqrt(2) G_F N_A (hbar c)^3: charged-current potential in eV per unit of
// rho[g/cm^3] * Y_e (~7.63e-14 eV).
inline constexpr double kCcPotentialEvPerDensity = 1.4142135623730951 * kFermiConstantPerGev2 /
                                                   (kEvPerGev * kEvPerGev) * kAvogadro *
                                                   (kHbarCEvMeters * kCentimetersPerMeter) *
                                                   (kHbarCEvMeters * kCentimetersPerMeter) *
                                                   (kHbarCEvMeters * kCentimetersPerMeter);

}  // namespace lgosc::units
