#include "lgosc/goodness_of_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgosc/error.hpp"

namespace lgosc {

ChiSquare chi_square_quantum(std::span<const KValue> k_observed, const OscParams& model,
                             const OscParams& phase_reference) {
  if (k_observed.empty()) throw DomainError("chi-square needs at least one K value");
  if (phase_reference.dm2 == 0.0) throw DomainError("phase reference has zero splitting");
  const double scale = std::abs(model.dm2) / std::abs(phase_reference.dm2);

  ChiSquare out;
  std::vector<double> phases;
  for (const KValue& k : k_observed) {
    if (!(k.uncertainty > 0.0)) throw DomainError("chi-square needs positive K uncertainties");
    if (k.phases.size() != static_cast<std::size_t>(k.n - 1)) {
      throw DomainError("chi-square needs the component phases of every K value");
    }
    phases.clear();
    for (double psi : k.phases) phases.push_back(psi * scale);
    const double theory = k_n_quantum_theory(model.sin2_2theta, phases).value;
    const double pull = (k.value - theory) / k.uncertainty;
    out.chi2 += pull * pull;
  }
  out.dof = static_cast<int>(k_observed.size()) - 1;
  return out;
}

double spectrum_chi_square(const PhasedDataset& dataset, const OscParams& params) {
  double chi2 = 0.0;
  for (const MeasuredPoint& p : dataset.points()) {
    const double sigma = p.sigma_total();
    const double w = sigma > 0.0 ? 1.0 / (sigma * sigma) : 1.0;
    const double d = p.p_mumu - vacuum_survival_probability(params, p.energy_gev);
    chi2 += w * d * d;
  }
  return chi2;
}

OscParams fit_oscillation_curve(const PhasedDataset& dataset, const OscParams& start) {
  start.validate();
  if (start.dm2 == 0.0) throw DomainError("curve fit needs a non-zero starting dm2");

  OscParams best = start;
  double best_chi2 = std::numeric_limits<double>::infinity();
  auto consider = [&](double dm2, double s2) {
    OscParams trial = start;
    trial.dm2 = dm2;
    trial.sin2_2theta = std::clamp(s2, 0.0, 1.0);
    const double chi2 = spectrum_chi_square(dataset, trial);
    if (chi2 < best_chi2) {
      best_chi2 = chi2;
      best = trial;
    }
  };

  // Log grid in dm2 (the phase scale), linear in the amplitude.
  constexpr int kCoarse = 121;
  const double log_lo = std::log(std::abs(start.dm2) / 4.0);
  const double log_hi = std::log(std::abs(start.dm2) * 4.0);
  const double sign = start.dm2 < 0.0 ? -1.0 : 1.0;
  for (int i = 0; i < kCoarse; ++i) {
    const double dm2 = sign * std::exp(log_lo + (log_hi - log_lo) * i / (kCoarse - 1));
    for (int j = 0; j <= 50; ++j) consider(dm2, j / 50.0);
  }

  double log_step = (log_hi - log_lo) / (kCoarse - 1);
  double s2_step = 1.0 / 50.0;
  for (int round = 0; round < 40; ++round) {
    const OscParams centre = best;
    const double log_centre = std::log(std::abs(centre.dm2));
    for (int i = -5; i <= 5; ++i) {
      for (int j = -5; j <= 5; ++j) {
        consider(sign * std::exp(log_centre + i * log_step / 5.0),
                 centre.sin2_2theta + j * s2_step / 5.0);
      }
    }
    log_step /= 2.5;
    s2_step /= 2.5;
  }
  return best;
}

}  // namespace lgosc
