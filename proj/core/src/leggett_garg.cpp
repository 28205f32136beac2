#include "lgosc/leggett_garg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "lgosc/error.hpp"
#include "lgosc/oscillation.hpp"

namespace lgosc {
namespace {

void require_order(int n) {
  if (n < 3) throw DomainError("Leggett-Garg order must be at least 3, got " + std::to_string(n));
}

void require_correlation(double c) {
  if (!(c >= -1.0 && c <= 1.0)) {
    throw DomainError("correlation must lie in [-1, 1], got " + std::to_string(c));
  }
}

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("probability must lie in [0, 1], got " + std::to_string(p));
  }
}

void require_arity(std::size_t sequential) {
  if (sequential < 2) {
    throw DomainError("K_n needs at least two sequential correlations, got " +
                      std::to_string(sequential));
  }
}

}  // namespace

BlochObservable::BlochObservable(const std::array<double, 3>& b) : b_(b) {
  const double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  if (!(std::abs(norm - 1.0) <= 1e-12)) {
    throw DomainError("Bloch vector must have unit length, got |b| = " + std::to_string(norm));
  }
}

BlochObservable BlochObservable::flavor() { return BlochObservable({0.0, 0.0, 1.0}); }

BlochObservable evolve_flavor_observable(const std::array<double, 3>& axis, double psi) {
  // Rotation of z-hat by -2 psi about `axis` (Rodrigues).
  const double angle = -2.0 * psi;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const auto& k = axis;
  const std::array<double, 3> z{0.0, 0.0, 1.0};
  const std::array<double, 3> k_cross_z{k[1], -k[0], 0.0};
  const double k_dot_z = k[2];
  std::array<double, 3> b{};
  for (int i = 0; i < 3; ++i) {
    b[i] = z[i] * c + k_cross_z[i] * s + k[i] * k_dot_z * (1.0 - c);
  }
  const double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  for (auto& x : b) x /= norm;
  return BlochObservable(b);
}

std::string_view to_string(KKind kind) {
  switch (kind) {
    case KKind::quantum_from_data: return "quantum_from_data";
    case KKind::quantum_theory: return "quantum_theory";
    case KKind::classical_null: return "classical_null";
  }
  return "unknown";
}

void KValue::validate() const {
  require_order(n);
  if (!phases.empty() && phases.size() != static_cast<std::size_t>(n - 1)) {
    throw DomainError("K_" + std::to_string(n) + " carries " + std::to_string(phases.size()) +
                      " phases, expected " + std::to_string(n - 1));
  }
  if (!std::isfinite(value)) throw DomainError("K value is not finite");
  if (kind == KKind::classical_null && value > lgi_bound(n)) {
    throw DomainError("classical K_n exceeds n - 2");
  }
  if (!(uncertainty >= 0.0)) throw DomainError("K uncertainty must be non-negative");
}

double correlation_bloch(const BlochObservable& b_i, const BlochObservable& b_j) {
  const auto& x = b_i.vector();
  const auto& y = b_j.vector();
  const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
  return std::clamp(dot, -1.0, 1.0);
}

KValue k_n_from_correlations(std::span<const double> sequential, double end_to_end,
                             KKind kind) {
  require_arity(sequential.size());
  for (double c : sequential) require_correlation(c);
  require_correlation(end_to_end);
  KValue k;
  k.n = static_cast<int>(sequential.size()) + 1;
  k.kind = kind;
  k.value = std::accumulate(sequential.begin(), sequential.end(), 0.0) - end_to_end;
  return k;
}

KValue k_n_quantum_from_survival(std::span<const double> probs, double prob_sum, int n,
                                 std::span<const double> sigmas, double sigma_sum,
                                 KKind kind) {
  require_order(n);
  if (probs.size() != static_cast<std::size_t>(n - 1)) {
    throw DomainError("K_" + std::to_string(n) + " needs " + std::to_string(n - 1) +
                      " survival probabilities, got " + std::to_string(probs.size()));
  }
  for (double p : probs) require_probability(p);
  require_probability(prob_sum);

  KValue k;
  k.n = n;
  k.kind = kind;
  k.value = (2.0 - n) + 2.0 * std::accumulate(probs.begin(), probs.end(), 0.0) - 2.0 * prob_sum;

  if (!sigmas.empty()) {
    if (sigmas.size() != probs.size()) {
      throw DomainError("uncertainty list does not match survival probabilities");
    }
    double var = 4.0 * sigma_sum * sigma_sum;
    for (double s : sigmas) var += 4.0 * s * s;
    k.uncertainty = std::sqrt(var);
  }
  return k;
}

KValue k_n_classical(std::span<const double> sequential) {
  require_arity(sequential.size());
  for (double c : sequential) require_correlation(c);

  // Accumulate the slack (n-2) - K_n^C with x_i = 1 - C_i >= 0:
  //   slack_2 = x_1 x_2,   slack_{m+1} = slack_m + x_{m+1} (1 - prod_{i<=m} C_i).
  // Every term is non-negative in floating point, so K_n^C <= n - 2 holds
  // exactly rather than up to rounding.
  double product = sequential[0] * sequential[1];
  double slack = (1.0 - sequential[0]) * (1.0 - sequential[1]);
  for (std::size_t i = 2; i < sequential.size(); ++i) {
    slack += (1.0 - sequential[i]) * (1.0 - product);
    product *= sequential[i];
  }

  KValue k;
  k.n = static_cast<int>(sequential.size()) + 1;
  k.kind = KKind::classical_null;
  k.value = lgi_bound(k.n) - slack;
  return k;
}

double lgi_bound(int n) {
  require_order(n);
  return n - 2.0;
}

double quantum_bound(int n) {
  require_order(n);
  return n * std::cos(std::numbers::pi / n);
}

KValue k_n_quantum_theory(double sin2_2theta, std::span<const double> phases) {
  const int n = static_cast<int>(phases.size()) + 1;
  require_order(n);
  std::vector<double> probs;
  probs.reserve(phases.size());
  for (double psi : phases) probs.push_back(survival_probability(sin2_2theta, psi));
  const double total = std::accumulate(phases.begin(), phases.end(), 0.0);
  KValue k = k_n_quantum_from_survival(probs, survival_probability(sin2_2theta, total), n, {},
                                       0.0, KKind::quantum_theory);
  k.phases.assign(phases.begin(), phases.end());
  return k;
}

}  // namespace lgosc
