#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "lgosc/oscillation.hpp"
#include "lgosc/selection.hpp"

namespace lgosc {

enum class Truth {
  quantum,           // two-flavor survival curve of the given parameters
  classical_flat,    // constant P = flat_p at every energy
  classical_markov,  // exponentially damped correlation C = exp(-damping psi)
};

std::string_view to_string(Truth truth);
Truth truth_from_string(std::string_view name);

struct SyntheticSpec {
  Truth truth = Truth::quantum;
  int bins = 30;
  double e_min_gev = 0.5;
  double e_max_gev = 50.0;
  double rel_error = 0.05;
  std::uint64_t seed = 0;
  double flat_p = 0.7;
  double damping = 1.0;  // per radian of phase

  void validate() const;
};

// Noise-free survival probability of the chosen truth at one energy.
double truth_probability(const OscParams& params, const SyntheticSpec& spec, double energy_gev);

// Log-spaced energies including both ends of the range.
std::vector<double> log_spaced_energies(int bins, double e_min_gev, double e_max_gev);

// Points at log-spaced energies. Each p is the truth plus Gaussian noise of
// sd = rel_error * max(p, 0.05), truncated to [0, 1] by resampling;
// sigma_stat records that sd.
std::vector<MeasuredPoint> generate_synthetic(const OscParams& params, const SyntheticSpec& spec);

}  // namespace lgosc
