#pragma once

// Photon-number series for the three-mode family built from a two-mode
// squeezed vacuum on (B, C) with B mixed into a vacuum mode A. Counting
// photons on C leaves n photons on the beamsplitter, i.e. the binomial state
// 2^{-n/2} sum_k sqrt(C(n,k)) |k, n-k>.

#include <cstddef>
#include <vector>

namespace gle::fock {

struct FockCutoff {
  std::size_t n_max = 0;
  /// Probability mass beyond n_max: lambda^{2(n_max + 1)}.
  double tail_bound = 0.0;
};

/// Smallest cutoff with lambda^{2(n_max+1)} <= tail.
FockCutoff probability_cutoff(double lambda, double tail);

/// Smallest cutoff whose neglected sum_{n > n_max} p_n S_n is provably below
/// `error` (uses S_n <= log2(n+1) and its tangent bound).
FockCutoff non_gaussian_cutoff(double lambda, double error = 1e-8);

/// Smallest cutoff whose neglected Schmidt-entropy mass is below `error`;
/// the tail of -sum p_n log2 p_n has a closed form.
FockCutoff entropy_series_cutoff(double lambda, double error = 1e-10);

/// p_n = (1 - lambda^2) lambda^{2n}, n = 0..n_max.
std::vector<double> photon_number_probabilities(double lambda, const FockCutoff& cutoff);

/// S_n = -2^{-n} sum_k C(n,k) log2(2^{-n} C(n,k)).
double binomial_state_entropy(std::size_t n);

/// sum_{n <= n_max} p_n S_n: photon counting on C.
double localizable_non_gaussian(double lambda, const FockCutoff& cutoff);
double localizable_non_gaussian(double lambda);

/// Best Gaussian value for the same family: thermal entropy at
/// n_A = (1 - lambda^4)^{-1/2} / 2 - 1/2.
double localizable_gaussian_fig3(double lambda);

/// -sum p_n log2 p_n truncated at the cutoff.
double tmsv_entropy_series(double lambda, const FockCutoff& cutoff);
double tmsv_entropy_series(double lambda);

}  // namespace gle::fock
