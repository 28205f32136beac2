#pragma once

// Pseudo-experiments: Gaussian resampling of a measured spectrum and the
// distribution of LGI-violation counts expected under the classical
// (commuting-observable) hypothesis.

#include <cstdint>
#include <string>
#include <vector>

#include "lgosc/leggett_garg.hpp"
#include "lgosc/selection.hpp"

namespace lgosc {

struct PseudoConfig {
  std::uint64_t replicas = 100000;
  std::uint64_t seed = 0;
  double tolerance = 0.005;
  bool include_systematics = false;
  double sys_amplitude_sigma = 0.0;  // relative jitter of the oscillation depth 1 - P
  double sys_phase_sigma = 0.0;      // relative jitter of each tuple's phase scale
  unsigned threads = 0;              // 0: hardware concurrency

  void validate() const;
};

inline constexpr std::uint64_t kMinReplicasForSignificance = 1000;

// Replica `replica_index` of the spectrum: each p_mumu redrawn from a normal
// with the point's value and total sigma, truncated to [0, 1] by resampling.
// Draws for point i come from the stream keyed (seed, replica_index, i).
std::vector<MeasuredPoint> sample_pseudodata(const PhasedDataset& dataset,
                                             const PseudoConfig& config,
                                             std::uint64_t replica_index);

// Number of values strictly above n - 2.
std::size_t count_violations(std::span<const KValue> k_values, int n);

struct NullDistribution {
  std::vector<std::uint32_t> counts;  // violations per replica
  std::size_t trials = 0;             // tuples per replica
  std::vector<std::string> warnings;
};

// Violation counts of pseudo-experiments drawn under the classical
// hypothesis. Within a replica, each tuple's component correlations are
// measured from pseudodata while its end-to-end correlation is the product
// rule applied to the observed component correlations, shifted by the target
// point's own pseudodata fluctuation:
//
//   K* = sum_a C*_a - (prod_a C_a + C*_target - C_target),
//
// which reduces to K_n^C of the observed correlations without noise.
NullDistribution classical_null_distribution(const PhasedDataset& dataset,
                                             std::span<const PhaseTuple> tuples,
                                             const PseudoConfig& config);

}  // namespace lgosc
