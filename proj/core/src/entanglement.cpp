#include "gle/entanglement.hpp"

#include "gle/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gle {

namespace {

void require_two_modes(const Matrix& cm, const char* what) {
  if (cm.rows() != 4 || cm.cols() != 4) {
    throw DimensionError(std::string(what) + ": expected a two-mode (4x4) covariance matrix");
  }
}

double log_neg_from_mu(double mu) { return std::max(0.0, -std::log2(mu)); }

}  // namespace

std::string_view to_string(Measure measure) {
  switch (measure) {
    case Measure::EntropyOfEntanglement:
      return "entropy";
    case Measure::LogNegativity:
      return "log-negativity";
  }
  return "unknown";
}

double thermal_entropy(double n) {
  if (n <= 0.0) return 0.0;
  return (n + 1.0) * std::log2(n + 1.0) - n * std::log2(n);
}

double thermal_invariant(const Mat2& gamma) {
  return 0.5 * (std::sqrt(std::max(gamma.determinant(), 0.0)) - 1.0);
}

EntanglementResult entropy_of_entanglement(const GaussianState& state) {
  require_two_modes(state.cm(), "entropy_of_entanglement");
  if (!state.is_pure(kEntropyPurityTol)) {
    throw PreconditionError(
        "entropy_of_entanglement: state is not pure (symplectic eigenvalues differ from 1)");
  }
  EntanglementResult out;
  out.measure = Measure::EntropyOfEntanglement;
  out.n_a = std::max(0.0, thermal_invariant(state.mode_block(0)));
  out.value = thermal_entropy(*out.n_a);
  return out;
}

Matrix partial_transpose(const Matrix& cm) {
  require_two_modes(cm, "partial_transpose");
  Matrix pt = cm;
  pt.row(3) *= -1.0;
  pt.col(3) *= -1.0;
  return pt;
}

EntanglementResult log_negativity(const GaussianState& state) {
  require_two_modes(state.cm(), "log_negativity");
  const auto nu = symplectic_eigenvalues(partial_transpose(state.cm()));
  EntanglementResult out;
  out.measure = Measure::LogNegativity;
  out.mu = nu.back();
  out.value = log_neg_from_mu(*out.mu);
  return out;
}

double pt_min_symplectic_fast(const Matrix& cm) {
  require_two_modes(cm, "pt_min_symplectic_fast");
  const double det_a = cm.block<2, 2>(0, 0).determinant();
  const double det_b = cm.block<2, 2>(2, 2).determinant();
  const double det_c = cm.block<2, 2>(0, 2).determinant();
  const double delta = det_a + det_b - 2.0 * det_c;
  const double det = cm.determinant();
  const double disc = std::max(delta * delta - 4.0 * det, 0.0);
  // Stable form of (delta - sqrt(disc)) / 2 = 2 det / (delta + sqrt(disc)).
  return std::sqrt(2.0 * det / (delta + std::sqrt(disc)));
}

double pt_min_eig_product(const Mat2& gamma_a, const Mat2& gamma_b) {
  for (const Mat2* g : {&gamma_a, &gamma_b}) {
    if (std::abs((*g)(0, 1) - (*g)(1, 0)) > kSymmetryTol * std::max(1.0, g->cwiseAbs().maxCoeff()) ||
        (*g)(0, 0) <= 0.0 || g->determinant() <= 0.0) {
      throw DomainError("pt_min_eig_product: inputs must be symmetric positive definite");
    }
  }
  const Mat2 r = rotation_r();
  const Mat2 x = gamma_a * r * gamma_b * r.transpose();
  // Product of two PD matrices: real positive spectrum.
  const double half_tr = 0.5 * x.trace();
  const double det = gamma_a.determinant() * gamma_b.determinant();
  const double disc = std::max(half_tr * half_tr - det, 0.0);
  return det / (half_tr + std::sqrt(disc));
}

double entanglement_value(const Matrix& cm, Measure measure) {
  switch (measure) {
    case Measure::EntropyOfEntanglement:
      return thermal_entropy(thermal_invariant(cm.block<2, 2>(0, 0)));
    case Measure::LogNegativity:
      return log_neg_from_mu(pt_min_symplectic_fast(cm));
  }
  return 0.0;
}

}  // namespace gle
