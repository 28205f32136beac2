#include "lgosc/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "lgosc/error.hpp"

namespace lgosc {
namespace {

void validate_point(const MeasuredPoint& p, std::size_t row) {
  const auto where = " (point " + std::to_string(row) + ")";
  if (!(p.energy_gev > 0.0) || !std::isfinite(p.energy_gev)) {
    throw DataError("energy must be positive" + where);
  }
  if (!(p.p_mumu >= 0.0 && p.p_mumu <= 1.0)) throw DataError("p_mumu outside [0, 1]" + where);
  if (!(p.sigma_stat >= 0.0) || !std::isfinite(p.sigma_stat)) {
    throw DataError("sigma_stat must be non-negative" + where);
  }
  if (!(p.sigma_sys >= 0.0) || !std::isfinite(p.sigma_sys)) {
    throw DataError("sigma_sys must be non-negative" + where);
  }
}

void require_tolerance(double tolerance) {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw DomainError("tuple tolerance must be positive, got " + std::to_string(tolerance));
  }
}

struct Match {
  std::size_t index;
  double residual;
};

double residual(double sum, double target, ResidualMode mode) {
  const double diff = sum - target;
  return mode == ResidualMode::relative ? diff / target : diff;
}

// Best target for a phase sum. Residuals are unimodal in the target phase, so
// only the two measured phases bracketing the sum can minimise it.
std::optional<Match> best_target(std::span<const MeasuredPoint> points, double sum,
                                 double tolerance, ResidualMode mode) {
  // Points are in descending phase order.
  const auto it = std::lower_bound(points.begin(), points.end(), sum,
                                   [](const MeasuredPoint& p, double s) { return p.psi > s; });
  const auto first = static_cast<std::size_t>(it - points.begin());
  std::optional<Match> best;
  for (std::size_t c : {first == 0 ? first : first - 1, first}) {
    if (c >= points.size() || !(points[c].psi > 0.0)) continue;
    const double r = residual(sum, points[c].psi, mode);
    if (!best || std::abs(r) < std::abs(best->residual) ||
        (std::abs(r) == std::abs(best->residual) && c < best->index)) {
      best = Match{c, r};
    }
  }
  if (!best || !(std::abs(best->residual) <= tolerance)) return std::nullopt;
  return best;
}

void canonical_sort(std::vector<PhaseTuple>& tuples, std::span<const MeasuredPoint> points) {
  std::sort(tuples.begin(), tuples.end(), [&](const PhaseTuple& a, const PhaseTuple& b) {
    const double ta = points[a.target_index].psi;
    const double tb = points[b.target_index].psi;
    if (ta != tb) return ta < tb;
    for (std::size_t k = 0; k < a.indices.size() && k < b.indices.size(); ++k) {
      const double pa = points[a.indices[k]].psi;
      const double pb = points[b.indices[k]].psi;
      if (pa != pb) return pa < pb;
    }
    if (a.indices != b.indices) return a.indices < b.indices;
    return a.target_index < b.target_index;
  });
}

void enumerate(std::span<const MeasuredPoint> points, int components, double tolerance,
               ResidualMode mode, std::vector<std::size_t>& prefix, double prefix_sum,
               std::vector<PhaseTuple>& out) {
  if (static_cast<int>(prefix.size()) == components) {
    if (const auto match = best_target(points, prefix_sum, tolerance, mode)) {
      out.push_back({prefix, match->index, components + 1, match->residual});
    }
    return;
  }
  const std::size_t start = prefix.empty() ? 0 : prefix.back();
  for (std::size_t i = start; i < points.size(); ++i) {
    prefix.push_back(i);
    enumerate(points, components, tolerance, mode, prefix, prefix_sum + points[i].psi, out);
    prefix.pop_back();
  }
}

}  // namespace

double MeasuredPoint::sigma_total() const { return std::hypot(sigma_stat, sigma_sys); }

PhasedDataset PhasedDataset::from_points(std::vector<MeasuredPoint> points) {
  if (points.empty()) throw DataError("dataset is empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    validate_point(points[i], i);
    if (!(points[i].psi >= 0.0) || !std::isfinite(points[i].psi)) {
      throw DataError("point " + std::to_string(i) + " has no valid phase");
    }
    if (i > 0 && !(points[i - 1].energy_gev < points[i].energy_gev)) {
      throw DataError("energies must be strictly increasing (point " + std::to_string(i) + ")");
    }
  }
  return PhasedDataset(std::move(points));
}

PhasedDataset attach_phases(std::vector<MeasuredPoint> dataset, const OscParams& params) {
  if (dataset.empty()) throw DataError("dataset is empty");
  params.validate();
  std::stable_sort(dataset.begin(), dataset.end(),
                   [](const MeasuredPoint& a, const MeasuredPoint& b) {
                     return a.energy_gev < b.energy_gev;
                   });
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    validate_point(dataset[i], i);
    if (i > 0 && dataset[i - 1].energy_gev == dataset[i].energy_gev) {
      throw DataError("duplicate energy " + std::to_string(dataset[i].energy_gev) +
                      " GeV makes phase identity ambiguous");
    }
    dataset[i].psi = accumulated_phase(params, dataset[i].energy_gev);
  }
  return PhasedDataset::from_points(std::move(dataset));
}

std::vector<PhaseTuple> select_triples(const PhasedDataset& dataset, double tolerance,
                                       ResidualMode mode) {
  require_tolerance(tolerance);
  if (dataset.size() < 3) throw DataError("tuple selection needs at least 3 points");
  const auto points = dataset.points();
  std::vector<PhaseTuple> out;
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a; b < points.size(); ++b) {
      if (const auto match = best_target(points, points[a].psi + points[b].psi, tolerance, mode)) {
        out.push_back({{a, b}, match->index, 3, match->residual});
      }
    }
  }
  canonical_sort(out, points);
  return out;
}

std::vector<PhaseTuple> select_ntuples(const PhasedDataset& dataset, int n, double tolerance,
                                       ResidualMode mode) {
  if (n < 3) throw DomainError("tuple order must be at least 3, got " + std::to_string(n));
  require_tolerance(tolerance);
  if (dataset.size() < static_cast<std::size_t>(n)) {
    throw DataError("order " + std::to_string(n) + " needs at least " + std::to_string(n) +
                    " points, dataset has " + std::to_string(dataset.size()));
  }
  std::vector<PhaseTuple> out;
  std::vector<std::size_t> prefix;
  prefix.reserve(n - 1);
  enumerate(dataset.points(), n - 1, tolerance, mode, prefix, 0.0, out);
  canonical_sort(out, dataset.points());
  return out;
}

KValue evaluate_tuple(const PhaseTuple& tuple, const PhasedDataset& dataset) {
  if (tuple.indices.size() != static_cast<std::size_t>(tuple.n - 1)) {
    throw std::logic_error("phase tuple arity does not match its order");
  }
  std::vector<double> probs;
  std::vector<double> sigmas;
  std::vector<double> phases;
  for (std::size_t i : tuple.indices) {
    if (i >= dataset.size()) throw std::out_of_range("tuple index out of range");
    probs.push_back(dataset[i].p_mumu);
    sigmas.push_back(dataset[i].sigma_total());
    phases.push_back(dataset[i].psi);
  }
  if (tuple.target_index >= dataset.size()) throw std::out_of_range("tuple target out of range");
  const MeasuredPoint& target = dataset[tuple.target_index];

  KValue k = k_n_quantum_from_survival(probs, target.p_mumu, tuple.n, sigmas, target.sigma_total(),
                                       KKind::quantum_from_data);
  k.phases = std::move(phases);

  // A point used more than once enters linearly with a summed coefficient.
  std::map<std::size_t, double> coefficient;
  for (std::size_t i : tuple.indices) coefficient[i] += 2.0;
  coefficient[tuple.target_index] -= 2.0;
  if (coefficient.size() != tuple.indices.size() + 1) {
    double var = 0.0;
    for (const auto& [i, c] : coefficient) {
      const double s = c * dataset[i].sigma_total();
      var += s * s;
    }
    k.uncertainty = std::sqrt(var);
  }
  return k;
}

}  // namespace lgosc
