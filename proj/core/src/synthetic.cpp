#include "lgosc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lgosc/error.hpp"
#include "lgosc/random.hpp"

namespace lgosc {
namespace {

// Keeps synthetic-data streams apart from pseudo-experiment replicas.
constexpr std::uint64_t kSyntheticDomain = 0x5359'4E54'4845'5449ULL;
constexpr double kNoiseFloorProbability = 0.05;

}  // namespace

std::string_view to_string(Truth truth) {
  switch (truth) {
    case Truth::quantum: return "quantum";
    case Truth::classical_flat: return "classical_flat";
    case Truth::classical_markov: return "classical_markov";
  }
  return "unknown";
}

Truth truth_from_string(std::string_view name) {
  if (name == "quantum") return Truth::quantum;
  if (name == "classical_flat") return Truth::classical_flat;
  if (name == "classical_markov") return Truth::classical_markov;
  throw DomainError("unknown truth model '" + std::string(name) +
                    "' (expected quantum, classical_flat or classical_markov)");
}

void SyntheticSpec::validate() const {
  if (bins < 3) throw DomainError("synthetic spectrum needs at least 3 bins");
  if (!(e_min_gev > 0.0 && e_min_gev < e_max_gev) || !std::isfinite(e_max_gev)) {
    throw DomainError("energy range must satisfy 0 < e_min < e_max");
  }
  if (!(rel_error >= 0.0) || !std::isfinite(rel_error)) {
    throw DomainError("relative error must be non-negative");
  }
  if (!(flat_p >= 0.0 && flat_p <= 1.0)) throw DomainError("flat probability outside [0, 1]");
  if (!(damping >= 0.0)) throw DomainError("damping must be non-negative");
}

double truth_probability(const OscParams& params, const SyntheticSpec& spec, double energy_gev) {
  switch (spec.truth) {
    case Truth::quantum: return survival_probability(params, energy_gev);
    case Truth::classical_flat: return spec.flat_p;
    case Truth::classical_markov:
      return 0.5 * (1.0 + std::exp(-spec.damping * accumulated_phase(params, energy_gev)));
  }
  return 1.0;
}

std::vector<double> log_spaced_energies(int bins, double e_min_gev, double e_max_gev) {
  if (bins < 2) throw DomainError("need at least 2 energy bins");
  if (!(e_min_gev > 0.0) || !(e_max_gev > e_min_gev) || !std::isfinite(e_max_gev)) {
    throw DomainError("energy range must satisfy 0 < e_min < e_max");
  }
  std::vector<double> energies(bins);
  const double ratio = std::log(e_max_gev / e_min_gev);
  for (int i = 0; i < bins; ++i) {
    energies[i] = e_min_gev * std::exp(ratio * i / (bins - 1));
  }
  energies.front() = e_min_gev;
  energies.back() = e_max_gev;
  return energies;
}

std::vector<MeasuredPoint> generate_synthetic(const OscParams& params, const SyntheticSpec& spec) {
  params.validate();
  spec.validate();
  std::vector<MeasuredPoint> points;
  points.reserve(spec.bins);
  const auto energies = log_spaced_energies(spec.bins, spec.e_min_gev, spec.e_max_gev);
  for (int i = 0; i < spec.bins; ++i) {
    MeasuredPoint p;
    p.energy_gev = energies[i];
    const double truth = truth_probability(params, spec, p.energy_gev);
    const double sd = spec.rel_error * std::max(truth, kNoiseFloorProbability);
    p.sigma_stat = sd;
    p.p_mumu = truth;
    if (sd > 0.0) {
      CounterRng rng(spec.seed, kSyntheticDomain, static_cast<std::uint64_t>(i));
      std::normal_distribution<double> normal(truth, sd);
      double x = normal(rng);
      while (x < 0.0 || x > 1.0) x = normal(rng);
      p.p_mumu = x;
    }
    points.push_back(p);
  }
  return points;
}

}  // namespace lgosc
