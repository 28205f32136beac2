#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lgosc/error.hpp"
#include "lgosc/oscillation.hpp"
#include "lgosc/units.hpp"
#include "oracles.hpp"

namespace {

using namespace lgosc;

// hbar*c = 197.3269804 MeV fm, written out independently of units.hpp.
constexpr double kHbarCEvMetersOracle = 197.3269804e6 * 1e-15;

OscParams minos(double dm2 = 2.5e-3) {
  OscParams p;
  p.dm2 = dm2;
  p.sin2_2theta = 0.95;
  p.baseline_km = 735.0;
  return p;
}

double oracle_phase(double dm2, double baseline_km, double energy_gev) {
  const double length_inv_ev = baseline_km * 1e3 / kHbarCEvMetersOracle;
  return dm2 * length_inv_ev / (4.0 * energy_gev * 1e9);
}

TEST(Units, PhaseFactorMatchesCodata) {
  EXPECT_NEAR(units::kPhaseFactor, 1.26693, 5e-6);
  EXPECT_NEAR(units::kPhaseFactor, oracle_phase(1.0, 1.0, 1.0), 1e-9);
}

TEST(Units, ChargedCurrentPotentialScale) {
  // sqrt(2) G_F n_e ~ 7.63e-14 eV for rho Y_e = 1 g/cm^3.
  EXPECT_NEAR(charged_current_potential(1.0, 1.0), 7.63e-14, 0.01e-14);
  EXPECT_THROW(charged_current_potential(2.7, 1.5), DomainError);
}

TEST(OscFrequency, Examples) {
  EXPECT_EQ(osc_frequency(minos(0.0), 1.0), 0.0);
  EXPECT_NEAR(osc_frequency(minos(2.5e-3), 1.0), 1.25e-12, 1e-24);
  for (double dm2 : {-3e-3, 1e-4, 2.5e-3}) {
    EXPECT_DOUBLE_EQ(osc_frequency(minos(dm2), 4.0), 0.5 * osc_frequency(minos(dm2), 2.0));
  }
  EXPECT_THROW(osc_frequency(minos(), 0.0), DomainError);
  EXPECT_THROW(osc_frequency(minos(), -1.0), DomainError);
}

TEST(AccumulatedPhase, Examples) {
  for (double e : {0.5, 1.0, 10.0}) EXPECT_EQ(accumulated_phase(minos(0.0), e), 0.0);

  const double psi = accumulated_phase(minos(2.5e-3), 2.25);
  EXPECT_NEAR(psi, oracle_phase(2.5e-3, 735.0, 2.25), 1e-9 * psi);
  EXPECT_NEAR(psi, 1.0347, 5e-5);

  const double at_minimum = accumulated_phase(minos(2.5e-3), 735.0 * 2.5e-3 * units::kPhaseFactor / (std::numbers::pi / 2));
  EXPECT_NEAR(at_minimum, std::numbers::pi / 2, 1e-12);
  EXPECT_THROW(accumulated_phase(minos(), 0.0), DomainError);
}

TEST(AccumulatedPhase, DecreasesWithEnergy) {
  const OscParams p = minos();
  double previous = accumulated_phase(p, 0.1);
  for (double e = 0.2; e < 100.0; e *= 1.3) {
    const double psi = accumulated_phase(p, e);
    EXPECT_GT(psi, 0.0);
    EXPECT_LT(psi, previous);
    previous = psi;
  }
}

TEST(AccumulatedPhase, StationarityOverIntervals) {
  const OscParams p = minos();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.0, 2000.0);
  std::uniform_real_distribution<double> energy(0.3, 60.0);
  for (int i = 0; i < 1000; ++i) {
    const double ti = pos(rng);
    const double tj = ti + pos(rng);
    const double e = energy(rng);
    EXPECT_EQ(accumulated_phase(p, e, ti, tj), accumulated_phase(p, e, 0.0, tj - ti));
  }
}

TEST(AccumulatedPhase, SumRule) {
  const OscParams p = minos();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> log_e(std::log(0.5), std::log(50.0));
  for (int i = 0; i < 10000; ++i) {
    const double ea = std::exp(log_e(rng));
    const double eb = std::exp(log_e(rng));
    const double ec = 1.0 / (1.0 / ea + 1.0 / eb);
    const double lhs = accumulated_phase(p, ea) + accumulated_phase(p, eb);
    const double rhs = accumulated_phase(p, ec);
    EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
  }
}

TEST(SurvivalProbability, Examples) {
  EXPECT_EQ(survival_probability(0.7, 0.0), 1.0);
  EXPECT_NEAR(survival_probability(1.0, std::numbers::pi / 2), 0.0, 1e-15);
  EXPECT_NEAR(survival_probability(0.95, std::numbers::pi / 4), 0.525, 1e-15);
  EXPECT_THROW(survival_probability(1.2, 0.3), DomainError);
  EXPECT_THROW(survival_probability(-0.1, 0.3), DomainError);
}

TEST(SurvivalProbability, PeriodSymmetryAndUnitarity) {
  for (int i = 0; i <= 100; ++i) {
    const double s = i / 100.0;
    for (int j = -200; j <= 200; ++j) {
      const double psi = j * 0.0371;
      const double p = survival_probability(s, psi);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      EXPECT_DOUBLE_EQ(p + (1.0 - p), 1.0);
      EXPECT_NEAR(p, survival_probability(s, -psi), 1e-15);
      EXPECT_NEAR(p, survival_probability(s, psi + std::numbers::pi), 1e-14);
    }
  }
}

TEST(Correlation, Examples) {
  EXPECT_EQ(correlation(0.4, 0.0), 1.0);
  EXPECT_NEAR(correlation(1.0, std::numbers::pi / 2), -1.0, 1e-15);
  EXPECT_THROW(correlation(1.5, 0.0), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> s(0.0, 1.0);
  std::uniform_real_distribution<double> psi(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = s(rng);
    const double x = psi(rng);
    const double c = correlation(a, x);
    EXPECT_NEAR(c, 2.0 * survival_probability(a, x) - 1.0, 1e-15);
    EXPECT_GE(c, 1.0 - 2.0 * a - 1e-15);
    EXPECT_LE(c, 1.0);
  }
}

TEST(MatterParams, VacuumLimitIsExact) {
  const OscParams p = minos();
  for (double e : {0.5, 2.0, 30.0}) {
    const MatterParams m = matter_params(p, e);
    EXPECT_FALSE(m.degenerate);
    EXPECT_DOUBLE_EQ(m.omega_m, osc_frequency(p, e));
    EXPECT_NEAR(m.sin2_2theta_m, p.sin2_2theta, 1e-15);
    EXPECT_EQ(matter_phase(p, e), accumulated_phase(p, e));
  }
}

TEST(MatterParams, ResonanceAndSuppressionAgainstDiagonalization) {
  OscParams p = minos();
  p.sin2_2theta = 0.3;
  const double e = 3.0;
  const double omega = osc_frequency(p, e);
  const double sin_2t = std::sqrt(p.sin2_2theta);
  const double cos_2t = p.cos_2theta();

  p.v_c = omega * cos_2t;
  const MatterParams res = matter_params(p, e);
  EXPECT_NEAR(res.sin2_2theta_m, 1.0, 1e-12);
  const auto res_oracle = oracle::diagonalize(omega, sin_2t, cos_2t, p.v_c);
  EXPECT_NEAR(res.sin2_2theta_m, res_oracle.sin2_2theta_m, 1e-10);
  EXPECT_NEAR(res.omega_m / res_oracle.omega_m, 1.0, 1e-10);

  p.v_c = 100.0 * omega;
  const MatterParams dense = matter_params(p, e);
  EXPECT_LT(dense.sin2_2theta_m, 1e-4);
  const auto dense_oracle = oracle::diagonalize(omega, sin_2t, cos_2t, p.v_c);
  EXPECT_NEAR(dense.sin2_2theta_m, dense_oracle.sin2_2theta_m, 1e-10);
  EXPECT_NEAR(dense.omega_m / dense_oracle.omega_m, 1.0, 1e-10);
}

TEST(MatterParams, DegenerateSplitting) {
  OscParams p = minos(0.0);
  const MatterParams m = matter_params(p, 1.0);
  EXPECT_TRUE(m.degenerate);
  EXPECT_EQ(m.omega_m, 0.0);
  EXPECT_EQ(m.sin2_2theta_m, 0.0);
  p.v_c = 1e-13;
  EXPECT_EQ(survival_probability(p, 1.0), 1.0);
}

TEST(MatterParams, SurvivalMatchesHamiltonianExponentiation) {
  OscParams p = minos(2.4e-3);
  const double t = p.baseline_km * units::kInverseEvPerKm;
  for (double rho_ye : {0.0, 1.35, 5.0, 40.0}) {
    p.v_c = charged_current_potential(rho_ye, 1.0);
    for (double e = 0.5; e <= 50.0; e *= 1.37) {
      const double omega = osc_frequency(p, e);
      const auto h = oracle::hamiltonian(omega, std::sqrt(p.sin2_2theta), p.cos_2theta(), p.v_c,
                                         0.5 * p.v_c + p.v_n);
      EXPECT_NEAR(survival_probability(p, e), oracle::survival_by_exponentiation(h, t), 1e-10)
          << "rho*Ye=" << rho_ye << " E=" << e;
    }
  }
}

TEST(MatterParams, IdentityTermDoesNotChangeProbabilities) {
  OscParams p = minos(2.4e-3);
  p.v_c = charged_current_potential(2.7, 0.5);
  const double t = p.baseline_km * units::kInverseEvPerKm;
  for (double e : {0.7, 1.9, 6.0}) {
    const double reference = survival_probability(p, e);
    for (double v_n : {0.0, 1e-14, 3e-13}) {
      OscParams q = p;
      q.v_n = v_n;
      EXPECT_EQ(survival_probability(q, e), reference);
      const double omega = osc_frequency(q, e);
      const auto h = oracle::hamiltonian(omega, std::sqrt(q.sin2_2theta), q.cos_2theta(), q.v_c,
                                         0.5 * q.v_c + q.v_n);
      EXPECT_NEAR(oracle::survival_by_exponentiation(h, t), reference, 1e-10);
    }
  }
}

TEST(OscParams, Validation) {
  OscParams p = minos();
  EXPECT_NO_THROW(p.validate());
  p.sin2_2theta = 1.01;
  EXPECT_THROW(p.validate(), DomainError);
  p = minos();
  p.baseline_km = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = minos();
  p.v_c = -1.0;
  EXPECT_THROW(p.validate(), DomainError);
}

}  // namespace
