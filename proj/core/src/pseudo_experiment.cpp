#include "lgosc/pseudo_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "lgosc/error.hpp"
#include "lgosc/random.hpp"

namespace lgosc {
namespace {

// Stream ids beyond any point index.
constexpr std::uint64_t kAmplitudeStream = 1ULL << 62;
constexpr std::uint64_t kPhaseStreamBase = (1ULL << 62) + 1;

constexpr int kMaxTruncationAttempts = 10000;

double truncated_normal(double mean, double sigma, CounterRng& rng) {
  std::normal_distribution<double> normal(mean, sigma);
  for (int attempt = 0; attempt < kMaxTruncationAttempts; ++attempt) {
    const double x = normal(rng);
    if (x >= 0.0 && x <= 1.0) return x;
  }
  return std::clamp(mean, 0.0, 1.0);
}

double draw_point(const MeasuredPoint& p, std::uint64_t seed, std::uint64_t replica,
                  std::uint64_t index) {
  const double sigma = p.sigma_total();
  if (sigma == 0.0) return p.p_mumu;
  CounterRng rng(seed, replica, index);
  return truncated_normal(p.p_mumu, sigma, rng);
}

double gaussian(double sigma, std::uint64_t seed, std::uint64_t replica, std::uint64_t stream) {
  if (sigma == 0.0) return 0.0;
  CounterRng rng(seed, replica, stream);
  std::normal_distribution<double> normal(0.0, sigma);
  return normal(rng);
}

// dP/dpsi at each point from neighbouring measurements.
std::vector<double> local_slopes(std::span<const MeasuredPoint> points) {
  std::vector<double> slopes(points.size(), 0.0);
  if (points.size() < 2) return slopes;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == points.size() ? i : i + 1;
    const double dpsi = points[hi].psi - points[lo].psi;
    if (dpsi != 0.0) slopes[i] = (points[hi].p_mumu - points[lo].p_mumu) / dpsi;
  }
  return slopes;
}

struct TupleTerms {
  std::vector<std::size_t> components;
  std::size_t target;
  double classical;  // K_n^C of the observed component correlations
};

}  // namespace

void PseudoConfig::validate() const {
  if (replicas == 0) throw DomainError("replicas must be positive");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (!(sys_amplitude_sigma >= 0.0) || !(sys_phase_sigma >= 0.0)) {
    throw DomainError("systematic sigmas must be non-negative");
  }
}

std::vector<MeasuredPoint> sample_pseudodata(const PhasedDataset& dataset,
                                             const PseudoConfig& config,
                                             std::uint64_t replica_index) {
  if (replica_index >= config.replicas) {
    throw DomainError("replica index " + std::to_string(replica_index) + " out of range");
  }
  std::vector<MeasuredPoint> out(dataset.points().begin(), dataset.points().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].p_mumu = draw_point(out[i], config.seed, replica_index, i);
  }
  return out;
}

std::size_t count_violations(std::span<const KValue> k_values, int n) {
  const double bound = lgi_bound(n);
  std::size_t count = 0;
  for (const KValue& k : k_values) {
    if (k.n != n) {
      throw DomainError("mixed Leggett-Garg orders: expected " + std::to_string(n) + ", got " +
                        std::to_string(k.n));
    }
    if (k.value > bound) ++count;
  }
  return count;
}

NullDistribution classical_null_distribution(const PhasedDataset& dataset,
                                             std::span<const PhaseTuple> tuples,
                                             const PseudoConfig& config) {
  config.validate();
  if (tuples.empty()) throw DomainError("classical null needs at least one tuple");

  NullDistribution result;
  result.trials = tuples.size();
  if (config.replicas < kMinReplicasForSignificance) {
    result.warnings.push_back("only " + std::to_string(config.replicas) +
                              " replicas; significance needs at least " +
                              std::to_string(kMinReplicasForSignificance));
  }
  const auto points = dataset.points();
  if (std::all_of(points.begin(), points.end(),
                  [](const MeasuredPoint& p) { return p.sigma_total() == 0.0; })) {
    result.warnings.push_back("all uncertainties are zero; pseudodata equal the data");
  }

  const int n = tuples.front().n;
  const double bound = lgi_bound(n);
  std::vector<TupleTerms> terms;
  terms.reserve(tuples.size());
  for (const PhaseTuple& t : tuples) {
    if (t.n != n) throw DomainError("mixed tuple orders in classical null");
    std::vector<double> corrs;
    for (std::size_t i : t.indices) corrs.push_back(2.0 * dataset[i].p_mumu - 1.0);
    terms.push_back({t.indices, t.target_index, k_n_classical(corrs).value});
  }

  const bool systematics = config.include_systematics &&
                           (config.sys_amplitude_sigma > 0.0 || config.sys_phase_sigma > 0.0);
  const std::vector<double> slopes = local_slopes(points);

  result.counts.assign(config.replicas, 0);
  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<double> pseudo(points.size());
    for (std::uint64_t r = begin; r < end; ++r) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        pseudo[i] = draw_point(points[i], config.seed, r, i);
      }
      if (systematics) {
        const double amp = gaussian(config.sys_amplitude_sigma, config.seed, r, kAmplitudeStream);
        for (double& p : pseudo) p = std::clamp(1.0 - (1.0 + amp) * (1.0 - p), 0.0, 1.0);
      }
      std::uint32_t count = 0;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const TupleTerms& tt = terms[t];
        const double scale =
            systematics ? gaussian(config.sys_phase_sigma, config.seed, r, kPhaseStreamBase + t)
                        : 0.0;
        auto shifted = [&](std::size_t i) {
          if (scale == 0.0) return pseudo[i];
          return std::clamp(pseudo[i] + slopes[i] * points[i].psi * scale, 0.0, 1.0);
        };
        double k = tt.classical;
        for (std::size_t i : tt.components) k += 2.0 * (shifted(i) - points[i].p_mumu);
        k -= 2.0 * (shifted(tt.target) - points[tt.target].p_mumu);
        if (k > bound) ++count;
      }
      result.counts[r] = count;
    }
  };

  unsigned workers = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  workers = std::max(1u, workers);
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, config.replicas));
  if (workers == 1) {
    run_range(0, config.replicas);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (config.replicas + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min<std::uint64_t>(config.replicas, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
  }
  return result;
}

}  // namespace lgosc
