#pragma once

// Phase decoration of a measured spectrum and enumeration of the phase
// tuples whose component phases sum (within tolerance) to a measured phase.

#include <cstddef>
#include <span>
#include <vector>

#include "lgosc/leggett_garg.hpp"
#include "lgosc/oscillation.hpp"

namespace lgosc {

struct MeasuredPoint {
  double energy_gev = 0.0;
  double p_mumu = 0.0;
  double sigma_stat = 0.0;
  double sigma_sys = 0.0;
  double psi = 0.0;  // filled by attach_phases

  double sigma_total() const;
};

// A spectrum whose points carry phases, sorted by ascending energy (and so by
// descending phase) with distinct energies.
class PhasedDataset {
 public:
  // Points must already carry phases. Throws DataError on an empty list,
  // unsorted or duplicate energies, or invalid values.
  static PhasedDataset from_points(std::vector<MeasuredPoint> points);

  std::span<const MeasuredPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  const MeasuredPoint& operator[](std::size_t i) const { return points_.at(i); }

 private:
  explicit PhasedDataset(std::vector<MeasuredPoint> points) : points_(std::move(points)) {}
  std::vector<MeasuredPoint> points_;
};

// Sorts by energy, rejects duplicates, and sets psi from the vacuum phase.
PhasedDataset attach_phases(std::vector<MeasuredPoint> dataset, const OscParams& params);

enum class ResidualMode {
  relative,  // |sum - psi_c| / psi_c
  absolute,  // |sum - psi_c| in radians
};

struct PhaseTuple {
  std::vector<std::size_t> indices;  // component points, by descending phase
  std::size_t target_index = 0;      // point whose phase matches the sum
  int n = 3;
  double mismatch = 0.0;             // signed residual (sum - psi_c), scaled per mode

  bool operator==(const PhaseTuple&) const = default;
};

// All pairs a >= b (by phase, repetition allowed) whose phase sum lies within
// `tolerance` of some measured phase; one tuple per pair using the
// best-matching target.
std::vector<PhaseTuple> select_triples(const PhasedDataset& dataset, double tolerance,
                                       ResidualMode mode = ResidualMode::relative);

// Generalisation to n - 1 components taken as non-increasing multisets.
std::vector<PhaseTuple> select_ntuples(const PhasedDataset& dataset, int n, double tolerance,
                                       ResidualMode mode = ResidualMode::relative);

// K_n from the measured survival probabilities of the tuple's points.
KValue evaluate_tuple(const PhaseTuple& tuple, const PhasedDataset& dataset);

}  // namespace lgosc
