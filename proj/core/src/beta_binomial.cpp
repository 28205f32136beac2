#include "lgosc/beta_binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lgosc/error.hpp"

namespace lgosc {

std::string_view to_string(NullFitKind kind) {
  switch (kind) {
    case NullFitKind::beta_binomial: return "beta_binomial";
    case NullFitKind::binomial: return "binomial";
    case NullFitKind::degenerate: return "degenerate";
  }
  return "unknown";
}

BetaBinomialFit fit_beta_binomial_moments(double mean, double variance, std::uint64_t trials_n) {
  if (trials_n == 0) throw DomainError("beta-binomial fit needs at least one trial");
  const double n = static_cast<double>(trials_n);
  if (!(mean >= 0.0 && mean <= n)) throw DomainError("mean count outside [0, n]");
  if (!(variance >= 0.0)) throw DomainError("variance must be non-negative");

  BetaBinomialFit fit;
  fit.trials_n = trials_n;
  fit.mean_violations = mean;
  if (variance == 0.0) {
    fit.kind = NullFitKind::degenerate;
    return fit;
  }

  const double p = mean / n;
  const double binomial_var = n * p * (1.0 - p);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (variance <= binomial_var || trials_n == 1) {
    fit.kind = NullFitKind::binomial;
    fit.alpha = inf;
    fit.beta = inf;
    fit.sd_violations = std::sqrt(binomial_var);
    return fit;
  }

  // var = n p (1-p) (1 + (n-1) rho),  rho = 1 / (alpha + beta + 1).
  double rho = (variance / binomial_var - 1.0) / (n - 1.0);
  rho = std::min(rho, 1.0 - 1e-12);
  const double concentration = 1.0 / rho - 1.0;
  fit.kind = NullFitKind::beta_binomial;
  fit.alpha = p * concentration;
  fit.beta = (1.0 - p) * concentration;
  fit.sd_violations = std::sqrt(binomial_var * (1.0 + (n - 1.0) * rho));
  return fit;
}

BetaBinomialFit fit_beta_binomial(std::span<const std::uint32_t> counts, std::uint64_t trials_n) {
  if (counts.empty()) throw DomainError("beta-binomial fit needs at least one count");
  // Integer sums keep the moments independent of accumulation order.
  unsigned long long sum = 0;
  for (std::uint32_t c : counts) {
    if (c > trials_n) throw DomainError("count " + std::to_string(c) + " exceeds trials");
    sum += c;
  }
  const double m = static_cast<double>(counts.size());
  const double mean = static_cast<double>(sum) / m;
  double ss = 0.0;
  for (std::uint32_t c : counts) {
    const double d = c - mean;
    ss += d * d;
  }
  const double variance = counts.size() > 1 ? ss / (m - 1.0) : 0.0;
  return fit_beta_binomial_moments(mean, variance, trials_n);
}

ZScore z_significance(double observed, const BetaBinomialFit& fit, double sd_floor) {
  if (fit.kind == NullFitKind::degenerate || !(fit.sd_violations > 0.0)) {
    if (!(sd_floor > 0.0)) throw DomainError("sd floor must be positive for a degenerate null");
    return {(observed - fit.mean_violations) / sd_floor, true};
  }
  return {(observed - fit.mean_violations) / fit.sd_violations, false};
}

}  // namespace lgosc
