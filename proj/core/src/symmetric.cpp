#include "gle/error.hpp"
#include "gle/localize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gle {

Matrix SymmetricStateSpec::covariance() const {
  if (n < 3) throw DomainError("symmetric state: need N >= 3 modes");
  if (!std::isfinite(b) || !std::isfinite(eps1) || !std::isfinite(eps2)) {
    throw DomainError("symmetric state: parameters must be finite");
  }
  const auto dim = static_cast<Eigen::Index>(2 * n);
  Matrix cm = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; i += 2) {
    for (Eigen::Index j = 0; j < dim; j += 2) {
      cm(i, j) = i == j ? b : eps1;
      cm(i + 1, j + 1) = i == j ? b : eps2;
    }
  }
  return cm;
}

GaussianState SymmetricStateSpec::state() const { return GaussianState(covariance()); }

void SymmetricStateSpec::validate() const { (void)state(); }

std::optional<SymmetricStateSpec> detect_symmetric(const GaussianState& state, double tol) {
  const std::size_t n = state.n_modes();
  if (n < 3) return std::nullopt;
  const Matrix& cm = state.cm();
  SymmetricStateSpec spec{n, cm(0, 0), cm(0, 2), cm(1, 3)};
  const double scale = std::max(1.0, cm.cwiseAbs().maxCoeff());
  if ((cm - spec.covariance()).cwiseAbs().maxCoeff() > tol * scale) return std::nullopt;
  return spec;
}

SymmetricReduction reduce_symmetric(const SymmetricStateSpec& spec) {
  spec.validate();
  const Mat2 beta = Vec2(spec.b, spec.b).asDiagonal();
  const Mat2 eps = Vec2(spec.eps1, spec.eps2).asDiagonal();
  const double nm2 = static_cast<double>(spec.n) - 2.0;

  SymmetricReduction out;
  out.gamma_ac1.resize(4, 4);
  out.gamma_ac1.block<2, 2>(0, 0) = beta + eps;
  out.gamma_ac1.block<2, 2>(0, 2) = std::sqrt(2.0 * nm2) * eps;
  out.gamma_ac1.block<2, 2>(2, 0) = std::sqrt(2.0 * nm2) * eps;
  out.gamma_ac1.block<2, 2>(2, 2) = beta + (nm2 - 1.0) * eps;
  out.gamma_b_in = beta - eps;
  return out;
}

Mat2 symmetric_gamma_a_in(const SymmetricReduction& reduction, const MeasurementSpec& spec) {
  const Conditioner conditioner(GaussianState(reduction.gamma_ac1), ModePartition{{0}, {1}});
  const MeasurementSpec specs[] = {spec};
  return conditioner.conditional_cm(specs);
}

Matrix mix_on_balanced_beamsplitter(const Mat2& gamma_a, const Mat2& gamma_b) {
  Matrix cm = Matrix::Zero(4, 4);
  cm.block<2, 2>(0, 0) = gamma_a;
  cm.block<2, 2>(2, 2) = gamma_b;
  const Matrix s = beamsplitter(0.5).matrix();
  return s * cm * s.transpose();
}

GaussianState symmetric_reduced_state(const SymmetricStateSpec& spec) {
  const auto red = reduce_symmetric(spec);
  Matrix cm = Matrix::Zero(6, 6);
  cm.block<2, 2>(0, 0) = red.gamma_ac1.block<2, 2>(0, 0);
  cm.block<2, 2>(0, 4) = red.gamma_ac1.block<2, 2>(0, 2);
  cm.block<2, 2>(4, 0) = red.gamma_ac1.block<2, 2>(2, 0);
  cm.block<2, 2>(4, 4) = red.gamma_ac1.block<2, 2>(2, 2);
  cm.block<2, 2>(2, 2) = red.gamma_b_in;
  // The balanced beamsplitter is an involution, so this maps the decoupled
  // (A, B) frame back onto the original pair.
  return apply(beamsplitter(0.5, 0, 1, 3), GaussianState(std::move(cm)));
}

LocalizationResult optimize_symmetric(const SymmetricStateSpec& spec) {
  const auto red = reduce_symmetric(spec);

  double best_theta = 0.0;
  double best_mu2 = 0.0;
  bool first = true;
  for (double theta : {0.0, std::numbers::pi / 2}) {
    const Mat2 gamma_a = symmetric_gamma_a_in(red, Homodyne{theta});
    const double mu2 = pt_min_eig_product(gamma_a, red.gamma_b_in);
    if (first || mu2 < best_mu2) {
      best_mu2 = mu2;
      best_theta = theta;
      first = false;
    }
  }

  LocalizationResult out;
  out.method = Method::SymmetricReduction;
  out.measure = Measure::LogNegativity;
  out.partition = ModePartition::complement(spec.n, {0, 1});
  std::vector<MeasurementSpec> specs;
  for (auto m : out.partition.measured) {
    out.optimal_specs.push_back({m, Homodyne{best_theta}});
    specs.emplace_back(Homodyne{best_theta});
  }
  out.mu = std::sqrt(best_mu2);
  out.value = std::max(0.0, -std::log2(*out.mu));
  out.conditional_cm = Conditioner(spec.state(), out.partition).conditional_cm(specs);
  return out;
}

}  // namespace gle
