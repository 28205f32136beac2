#pragma once

#include <span>

#include "lgosc/leggett_garg.hpp"
#include "lgosc/oscillation.hpp"
#include "lgosc/selection.hpp"

namespace lgosc {

struct ChiSquare {
  double chi2 = 0.0;
  int dof = 0;
};

// Sum over tuples of (K_obs - K_Q)^2 / sigma_K^2, where K_Q is evaluated on
// the `model` curve at the tuple's component phases (end point at their sum).
// The phases stored in the K values were computed with `phase_reference`;
// they are rescaled to the model splitting. dof = count - 1.
//
// Tuples sharing data points are correlated; the statistic treats them as
// independent and is descriptive only.
ChiSquare chi_square_quantum(std::span<const KValue> k_observed, const OscParams& model,
                             const OscParams& phase_reference);

inline ChiSquare chi_square_quantum(std::span<const KValue> k_observed, const OscParams& model) {
  return chi_square_quantum(k_observed, model, model);
}

// Chi-square of the measured spectrum against the vacuum curve of `params`.
double spectrum_chi_square(const PhasedDataset& dataset, const OscParams& params);

// Least-squares (dm2, sin2_2theta) for the measured spectrum: a coarse grid
// over dm2 in [start/4, 4 start] and sin2_2theta in [0, 1], then shrinking
// local grids. Other fields are copied from `start`.
OscParams fit_oscillation_curve(const PhasedDataset& dataset, const OscParams& start);

}  // namespace lgosc
