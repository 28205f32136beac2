#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace lgosc {

enum class NullFitKind {
  beta_binomial,  // overdispersed: moment-matched alpha, beta
  binomial,       // variance at or below binomial: plain binomial with p = mean / n
  degenerate,     // all counts equal: point mass, no spread
};

std::string_view to_string(NullFitKind kind);

struct BetaBinomialFit {
  double alpha = 0.0;  // infinite for the binomial fallback
  double beta = 0.0;
  std::uint64_t trials_n = 0;
  double mean_violations = 0.0;
  double sd_violations = 0.0;
  NullFitKind kind = NullFitKind::degenerate;

  double p_hat() const { return trials_n == 0 ? 0.0 : mean_violations / trials_n; }
};

// Method-of-moments fit from a sample mean and (unbiased) variance.
BetaBinomialFit fit_beta_binomial_moments(double mean, double variance, std::uint64_t trials_n);

BetaBinomialFit fit_beta_binomial(std::span<const std::uint32_t> counts, std::uint64_t trials_n);

struct ZScore {
  double z = 0.0;
  bool used_sd_floor = false;
};

// (observed - mean) / sd. A degenerate fit divides by `sd_floor` instead.
ZScore z_significance(double observed, const BetaBinomialFit& fit, double sd_floor);

}  // namespace lgosc
