#pragma once

// Entanglement of two-mode Gaussian states, in ebits (base-2 logarithms).

#include "gle/gaussian.hpp"

#include <optional>
#include <string_view>

namespace gle {

enum class Measure { EntropyOfEntanglement, LogNegativity };

std::string_view to_string(Measure measure);

struct EntanglementResult {
  double value = 0.0;
  Measure measure = Measure::EntropyOfEntanglement;
  std::optional<double> mu;   // LogNegativity: smallest PT symplectic eigenvalue
  std::optional<double> n_a;  // Entropy: thermal invariant of the reduced mode
};

/// Purity tolerance accepted by entropy_of_entanglement.
inline constexpr double kEntropyPurityTol = 1e-6;

/// g(n) = (n+1) log2(n+1) - n log2 n, with g(0) = 0. Negative n is clamped.
double thermal_entropy(double n);

/// n = (sqrt(det gamma) - 1) / 2 of a single-mode block.
double thermal_invariant(const Mat2& gamma);

/// Von Neumann entropy of mode 0 of a pure two-mode state. Throws
/// PreconditionError if the state is not pure within kEntropyPurityTol.
EntanglementResult entropy_of_entanglement(const GaussianState& state);

/// max(0, -log2 mu) where mu is the smallest symplectic eigenvalue of the
/// partially transposed (p_2 -> -p_2) covariance matrix.
EntanglementResult log_negativity(const GaussianState& state);

/// Partial transposition of the second mode of a two-mode covariance matrix.
Matrix partial_transpose(const Matrix& cm);

/// Smallest PT symplectic eigenvalue via the seralian invariant
///   mu^2 = (D - sqrt(D^2 - 4 det gamma)) / 2,  D = det A + det B - 2 det C.
double pt_min_symplectic_fast(const Matrix& cm);

/// min eig(gamma_a R gamma_b R^T): mu^2 of the state obtained by mixing the
/// two single-mode states on a balanced beamsplitter.
double pt_min_eig_product(const Mat2& gamma_a, const Mat2& gamma_b);

/// Measure value of a raw two-mode covariance matrix without validation.
/// Used in tight search loops; entropy reads det of the first mode block.
double entanglement_value(const Matrix& cm, Measure measure);

}  // namespace gle
