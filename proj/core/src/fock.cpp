#include "gle/fock.hpp"

#include "gle/entanglement.hpp"
#include "gle/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace gle::fock {

namespace {

constexpr std::size_t kMaxCutoff = 10'000'000;

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("fock: lambda must lie in [0, 1)");
}

// Smallest n_max for which bound(n_max, tail) <= target.
FockCutoff search_cutoff(double lambda, const std::function<double(std::size_t, double)>& bound,
                         double target) {
  require_lambda(lambda);
  if (!(target > 0.0)) throw DomainError("fock: cutoff target must be positive");
  const double l2 = lambda * lambda;
  double tail = l2;  // lambda^{2(n_max+1)} at n_max = 0
  for (std::size_t n = 0; n < kMaxCutoff; ++n) {
    if (bound(n, tail) <= target) return {n, tail};
    tail *= l2;
  }
  throw SizeError("fock: cutoff exceeds the supported photon number");
}

}  // namespace

FockCutoff probability_cutoff(double lambda, double tail) {
  return search_cutoff(lambda, [](std::size_t, double t) { return t; }, tail);
}

FockCutoff non_gaussian_cutoff(double lambda, double error) {
  const double l2 = lambda * lambda;
  const double mean_excess = l2 / (1.0 - l2);
  return search_cutoff(
      lambda,
      [mean_excess](std::size_t n, double t) {
        const double m = static_cast<double>(n) + 2.0;
        return t * (std::log2(m) + mean_excess / (m * std::numbers::ln2));
      },
      error);
}

FockCutoff entropy_series_cutoff(double lambda, double error) {
  const double l2 = lambda * lambda;
  const double mean_excess = l2 / (1.0 - l2);
  const double head = -std::log2(1.0 - l2);
  const double slope = lambda > 0.0 ? -2.0 * std::log2(lambda) : 0.0;
  return search_cutoff(
      lambda,
      [=](std::size_t n, double t) {
        const double neglected =
            t * head + slope * t * (static_cast<double>(n) + 1.0 + mean_excess);
        return std::max(neglected, t);
      },
      error);
}

std::vector<double> photon_number_probabilities(double lambda, const FockCutoff& cutoff) {
  require_lambda(lambda);
  const double l2 = lambda * lambda;
  std::vector<double> p(cutoff.n_max + 1);
  double power = 1.0;
  for (auto& pn : p) {
    pn = (1.0 - l2) * power;
    power *= l2;
  }
  return p;
}

double binomial_state_entropy(std::size_t n) {
  if (n == 0) return 0.0;
  const double nd = static_cast<double>(n);
  const double log_norm = nd * std::numbers::ln2;
  const double lg_n = std::lgamma(nd + 1.0);
  double s = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double log_q = lg_n - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) - log_norm;
    s -= std::exp(log_q) * log_q;
  }
  return s / std::numbers::ln2;
}

double localizable_non_gaussian(double lambda, const FockCutoff& cutoff) {
  const auto p = photon_number_probabilities(lambda, cutoff);
  double sum = 0.0;
  for (std::size_t n = 1; n < p.size(); ++n) sum += p[n] * binomial_state_entropy(n);
  return sum;
}

double localizable_non_gaussian(double lambda) {
  return localizable_non_gaussian(lambda, non_gaussian_cutoff(lambda));
}

double localizable_gaussian_fig3(double lambda) {
  require_lambda(lambda);
  const double l4 = std::pow(lambda, 4);
  return thermal_entropy(0.5 / std::sqrt(1.0 - l4) - 0.5);
}

double tmsv_entropy_series(double lambda, const FockCutoff& cutoff) {
  double s = 0.0;
  for (double pn : photon_number_probabilities(lambda, cutoff)) {
    if (pn > 0.0) s -= pn * std::log2(pn);
  }
  return s;
}

double tmsv_entropy_series(double lambda) {
  return tmsv_entropy_series(lambda, entropy_series_cutoff(lambda));
}

}  // namespace gle::fock
