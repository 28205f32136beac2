#pragma once

// Leggett-Garg parameters K_n built from two-time correlations of a
// dichotomic observable, in quantum, classical (commuting) and
// survival-probability forms, plus the Bloch-vector correlation route.

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace lgosc {

// Heisenberg-picture observable Q(t) = b . sigma with |b| = 1.
class BlochObservable {
 public:
  // Throws DomainError if |b| deviates from 1 by more than 1e-12.
  explicit BlochObservable(const std::array<double, 3>& b);

  // sigma_z: the flavor measurement (+1 for nu_mu, -1 for nu_e).
  static BlochObservable flavor();

  const std::array<double, 3>& vector() const noexcept { return b_; }

 private:
  std::array<double, 3> b_;
};

// sigma_z evolved for phase psi under U = cos(psi) - i sin(psi) axis.sigma,
// i.e. U^dagger sigma_z U = b . sigma. `axis` must be a unit vector.
BlochObservable evolve_flavor_observable(const std::array<double, 3>& axis, double psi);

enum class KKind { quantum_from_data, quantum_theory, classical_null };

std::string_view to_string(KKind kind);

struct KValue {
  int n = 3;
  double value = 0.0;
  KKind kind = KKind::quantum_theory;
  std::vector<double> phases;  // n - 1 component phases, or empty when unknown
  double uncertainty = 0.0;

  // Throws DomainError when n < 3, phases has the wrong length, value is not
  // finite, or a classical value exceeds n - 2.
  void validate() const;
};

// C_ij = b_i . b_j.
double correlation_bloch(const BlochObservable& b_i, const BlochObservable& b_j);

// K_n = sum_i C_{i,i+1} - C_{n,1}, with n = sequential.size() + 1.
KValue k_n_from_correlations(std::span<const double> sequential, double end_to_end,
                             KKind kind = KKind::quantum_theory);

// K_n^Q = (2 - n) + 2 sum_a P(psi_a) - 2 P(sum_a psi_a).
// If `sigmas` is non-empty it must match `probs`; the uncertainty is then the
// independent-Gaussian quadrature sqrt(4 sum sigma_a^2 + 4 sigma_sum^2).
KValue k_n_quantum_from_survival(std::span<const double> probs, double prob_sum, int n,
                                 std::span<const double> sigmas = {}, double sigma_sum = 0.0,
                                 KKind kind = KKind::quantum_from_data);

// K_n^C = sum_i C_{i,i+1} - prod_i C_{i,i+1}.
KValue k_n_classical(std::span<const double> sequential);

double lgi_bound(int n);
double quantum_bound(int n);

// K_n^Q on an ideal two-flavor curve: components at `phases`, end point at
// their sum.
KValue k_n_quantum_theory(double sin2_2theta, std::span<const double> phases);

}  // namespace lgosc
