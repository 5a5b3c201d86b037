#include "gle/conditioning.hpp"

#include "gle/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gle {

namespace {

constexpr double kPinvCutoff = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Moore-Penrose inverse of a symmetric PSD matrix.
Matrix pinv_symmetric(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector& ev = es.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) > kPinvCutoff * largest) inv(i) = 1.0 / ev(i);
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// T with T gamma_M T^T = I: rows e^{r} u^T and e^{-r} v^T. Working in this
// frame keeps every intermediate bounded instead of forming e^{2r}.
Mat2 projector_whitening(const GaussianProjector& p) {
  const Vec2 u = quadrature_direction(p.theta);
  const Vec2 v(-u.y(), u.x());
  Mat2 t;
  t.row(0) = std::exp(p.r) * u.transpose();
  t.row(1) = std::exp(-p.r) * v.transpose();
  return t;
}

}  // namespace

Vec2 quadrature_direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

Mat2 projector_cm(const GaussianProjector& projector) {
  const Vec2 u = quadrature_direction(projector.theta);
  const Vec2 v(-u.y(), u.x());
  const double squeezed = std::exp(-2.0 * projector.r);
  const double anti = std::exp(2.0 * projector.r);
  return squeezed * u * u.transpose() + anti * v * v.transpose();
}

void validate_spec(const MeasurementSpec& spec) {
  std::visit(overloaded{
                 [](const GaussianProjector& p) {
                   if (!std::isfinite(p.theta)) throw DomainError("projector: theta not finite");
                   if (!std::isfinite(p.r) || p.r < 0.0) {
                     throw DomainError("projector: squeezing r must be finite and >= 0");
                   }
                 },
                 [](const Homodyne& h) {
                   if (!std::isfinite(h.theta)) throw DomainError("homodyne: theta not finite");
                 },
             },
             spec);
}

Conditioner::Conditioner(const GaussianState& state, ModePartition partition)
    : partition_(std::move(partition)) {
  partition_.validate(state.n_modes());
  if (partition_.kept.empty()) throw DimensionError("conditioning: no kept modes");
  const auto ki = quadrature_indices(partition_.kept);
  const auto mi = quadrature_indices(partition_.measured);
  kept_ = state.cm()(ki, ki);
  cross_ = state.cm()(ki, mi);
  measured_ = state.cm()(mi, mi);
}

Matrix Conditioner::conditional_cm(std::span<const MeasurementSpec> specs) const {
  const std::size_t n_meas = partition_.measured.size();
  if (specs.size() != n_meas) {
    throw DimensionError("conditioning: expected " + std::to_string(n_meas) +
                         " measurement specs, got " + std::to_string(specs.size()));
  }
  if (n_meas == 0) return kept_;

  std::vector<Eigen::Index> proj;  // measured-local quadrature indices
  std::vector<Eigen::Index> hom;
  std::vector<Mat2> proj_frames;
  std::vector<Vec2> hom_dirs;
  for (std::size_t j = 0; j < n_meas; ++j) {
    validate_spec(specs[j]);
    const auto base = static_cast<Eigen::Index>(2 * j);
    if (const auto* p = std::get_if<GaussianProjector>(&specs[j])) {
      proj.push_back(base);
      proj.push_back(base + 1);
      proj_frames.push_back(projector_whitening(*p));
    } else {
      hom.push_back(base);
      hom.push_back(base + 1);
      hom_dirs.push_back(quadrature_direction(std::get<Homodyne>(specs[j]).theta));
    }
  }

  Matrix a = kept_;
  Matrix c_hom = cross_(Eigen::all, hom);
  Matrix b_hom = measured_(hom, hom);

  if (!proj.empty()) {
    // (B + gamma_M)^{-1} = T^T (T B T^T + I)^{-1} T, and T B T^T + I >= I.
    const auto np = static_cast<Eigen::Index>(proj.size());
    Matrix t = Matrix::Zero(np, np);
    for (Eigen::Index k = 0; k < np / 2; ++k) {
      t.block<2, 2>(2 * k, 2 * k) = proj_frames[static_cast<std::size_t>(k)];
    }
    const Matrix m = t * measured_(proj, proj) * t.transpose() + Matrix::Identity(np, np);
    const Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success || !m.allFinite()) {
      throw NumericalError("conditioning: projector block is not finite positive definite");
    }
    const Matrix kp = cross_(Eigen::all, proj) * t.transpose();
    a -= kp * llt.solve(kp.transpose());
    if (!hom.empty()) {
      const Matrix hp = measured_(hom, proj) * t.transpose();
      c_hom -= kp * llt.solve(hp.transpose());
      b_hom -= hp * llt.solve(hp.transpose());
    }
  }

  if (!hom.empty()) {
    const auto k = static_cast<Eigen::Index>(hom_dirs.size());
    Matrix u = Matrix::Zero(2 * k, k);
    for (Eigen::Index j = 0; j < k; ++j) u.block<2, 1>(2 * j, j) = hom_dirs[static_cast<std::size_t>(j)];
    const Matrix cu = c_hom * u;
    a -= cu * pinv_symmetric(u.transpose() * b_hom * u) * cu.transpose();
  }
  if (!a.allFinite()) throw NumericalError("conditioning: conditional covariance is not finite");
  return 0.5 * (a + a.transpose());
}

GaussianState condition_gaussian(const GaussianState& state, const ModePartition& partition,
                                 std::span<const MeasurementSpec> specs) {
  if (partition.measured.empty()) {
    partition.validate(state.n_modes());
    if (!specs.empty()) throw DimensionError("conditioning: specs given but no measured modes");
    return reduce(state, partition.kept);
  }
  return GaussianState(Conditioner(state, partition).conditional_cm(specs));
}

GaussianState condition_sequence(const GaussianState& state,
                                 std::span<const ModeMeasurement> measurements) {
  std::vector<std::size_t> remaining(state.n_modes());
  for (std::size_t m = 0; m < remaining.size(); ++m) remaining[m] = m;
  GaussianState current = state;
  for (const auto& step : measurements) {
    const auto it = std::find(remaining.begin(), remaining.end(), step.mode);
    if (it == remaining.end()) {
      throw DimensionError("condition_sequence: mode " + std::to_string(step.mode) +
                           " is out of range or already measured");
    }
    const auto local = static_cast<std::size_t>(it - remaining.begin());
    remaining.erase(it);
    if (remaining.empty()) throw DimensionError("condition_sequence: cannot measure every mode");
    std::vector<std::size_t> kept;
    for (std::size_t m = 0; m < current.n_modes(); ++m) {
      if (m != local) kept.push_back(m);
    }
    const MeasurementSpec spec[] = {step.spec};
    current = condition_gaussian(current, ModePartition{std::move(kept), {local}}, spec);
  }
  return current;
}

}  // namespace gle
