#include "gle/gaussian.hpp"

#include "gle/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gle {

namespace {

void require_square_even(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty 2N x 2N matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

std::vector<double> pair_up(std::vector<double> squares) {
  std::sort(squares.begin(), squares.end());
  std::vector<double> nu;
  nu.reserve(squares.size() / 2);
  for (std::size_t k = 0; k + 1 < squares.size(); k += 2) {
    nu.push_back(std::sqrt(std::max(0.0, 0.5 * (squares[k] + squares[k + 1]))));
  }
  std::sort(nu.begin(), nu.end(), std::greater<>());
  return nu;
}

}  // namespace

Matrix symplectic_form(std::size_t n_modes) {
  Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

Mat2 rotation_r() {
  Mat2 r;
  r << 0.0, 1.0, -1.0, 0.0;
  return r;
}

Mat2 phase_rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 w;
  w << c, s, -s, c;
  return w;
}

Mat2 squeezed_cm(double r) {
  return Vec2(std::exp(2.0 * r), std::exp(-2.0 * r)).asDiagonal();
}

double symmetry_residual(const Matrix& cm) {
  const double scale = std::max(cm.cwiseAbs().maxCoeff(), 1.0);
  return (cm - cm.transpose()).cwiseAbs().maxCoeff() / scale;
}

std::vector<double> symplectic_eigenvalues(const Matrix& cm) {
  require_square_even(cm, "symplectic_eigenvalues");
  if (symmetry_residual(cm) > kSymmetryTol) {
    throw DimensionError("symplectic_eigenvalues: matrix is not symmetric");
  }
  const Matrix sym = 0.5 * (cm + cm.transpose());
  const auto n = static_cast<std::size_t>(sym.rows() / 2);
  const Matrix omega = symplectic_form(n);

  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() == Eigen::Success) {
    // L^T Omega L is antisymmetric and similar to Omega gamma; its square has
    // eigenvalues -nu_k^2, each twice.
    const Matrix l = llt.matrixL();
    const Matrix k = l.transpose() * omega * l;
    Eigen::SelfAdjointEigenSolver<Matrix> es(k.transpose() * k, Eigen::EigenvaluesOnly);
    const Vector ev = es.eigenvalues();
    return pair_up(std::vector<double>(ev.data(), ev.data() + ev.size()));
  }

  // Not positive definite: fall back to the general spectrum of Omega gamma.
  Eigen::EigenSolver<Matrix> es(omega * sym, false);
  std::vector<double> squares;
  squares.reserve(static_cast<std::size_t>(sym.rows()));
  for (Eigen::Index i = 0; i < sym.rows(); ++i) {
    squares.push_back(std::norm(es.eigenvalues()(i)));
  }
  return pair_up(std::move(squares));
}

GaussianState::GaussianState(Matrix cm) {
  require_square_even(cm, "GaussianState");
  const double asym = symmetry_residual(cm);
  if (asym > kSymmetryTol) {
    throw DimensionError("GaussianState: covariance matrix is not symmetric (residual " +
                         std::to_string(asym) + ")");
  }
  n_modes_ = static_cast<std::size_t>(cm.rows() / 2);
  cm_ = 0.5 * (cm + cm.transpose());
  if (Eigen::LLT<Matrix>(cm_).info() != Eigen::Success) {
    throw PhysicalityError("GaussianState: covariance matrix is not positive definite");
  }
  const auto nu = gle::symplectic_eigenvalues(cm_);
  if (nu.back() < 1.0 - kPhysicalityTol) {
    throw PhysicalityError("GaussianState: symplectic eigenvalue " + std::to_string(nu.back()) +
                           " < 1 violates the uncertainty principle");
  }
}

GaussianState GaussianState::vacuum(std::size_t n_modes) {
  if (n_modes == 0) throw DimensionError("vacuum: need at least one mode");
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return GaussianState(Matrix::Identity(dim, dim));
}

Mat2 GaussianState::mode_block(std::size_t mode) const {
  if (mode >= n_modes_) throw DimensionError("mode_block: mode index out of range");
  const auto i = static_cast<Eigen::Index>(2 * mode);
  return cm_.block<2, 2>(i, i);
}

std::vector<double> GaussianState::symplectic_eigenvalues() const {
  return gle::symplectic_eigenvalues(cm_);
}

bool GaussianState::is_pure(double tol) const {
  const auto nu = symplectic_eigenvalues();
  return std::all_of(nu.begin(), nu.end(), [tol](double v) { return std::abs(v - 1.0) <= tol; });
}

SymplecticTransform::SymplecticTransform(Matrix s) {
  require_square_even(s, "SymplecticTransform");
  n_modes_ = static_cast<std::size_t>(s.rows() / 2);
  s_ = std::move(s);
  const double scale = std::max(1.0, s_.cwiseAbs().maxCoeff() * s_.cwiseAbs().maxCoeff());
  const double res = symplectic_residual();
  if (res > kSymplecticTol * scale) {
    throw DomainError("SymplecticTransform: S Omega S^T != Omega (residual " +
                      std::to_string(res) + ")");
  }
}

SymplecticTransform SymplecticTransform::identity(std::size_t n_modes) {
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return SymplecticTransform(Matrix::Identity(dim, dim));
}

double SymplecticTransform::symplectic_residual() const {
  const Matrix omega = symplectic_form(n_modes_);
  return (s_ * omega * s_.transpose() - omega).cwiseAbs().maxCoeff();
}

SymplecticTransform SymplecticTransform::inverse() const {
  // S^{-1} = -Omega S^T Omega for symplectic S.
  const Matrix omega = symplectic_form(n_modes_);
  return SymplecticTransform(-omega * s_.transpose() * omega);
}

SymplecticTransform operator*(const SymplecticTransform& a, const SymplecticTransform& b) {
  if (a.n_modes_ != b.n_modes_) throw DimensionError("compose: mode count mismatch");
  return SymplecticTransform(a.s_ * b.s_);
}

SymplecticTransform SymplecticTransform::embed(std::span<const std::size_t> modes,
                                               std::size_t n_modes) const {
  if (modes.size() != n_modes_) throw DimensionError("embed: wrong number of target modes");
  ModePartition{std::vector<std::size_t>(modes.begin(), modes.end()), {}}.validate(n_modes);
  const auto idx = quadrature_indices(modes);
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  Matrix full = Matrix::Identity(dim, dim);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      full(idx[i], idx[j]) = s_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return SymplecticTransform(std::move(full));
}

SymplecticTransform rotation(double theta) {
  return SymplecticTransform(phase_rotation(theta));
}

SymplecticTransform squeezer(double r) {
  if (!std::isfinite(r)) throw DomainError("squeezer: r must be finite");
  return SymplecticTransform(Matrix(Vec2(std::exp(r), std::exp(-r)).asDiagonal()));
}

SymplecticTransform beamsplitter(double transmittance) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw DomainError("beamsplitter: transmittance must lie in [0, 1]");
  }
  const double t = std::sqrt(transmittance);
  const double r = std::sqrt(1.0 - transmittance);
  Eigen::Matrix2d mix;
  mix << t, r, r, -t;
  return passive(mix);
}

SymplecticTransform beamsplitter(double transmittance, std::size_t first, std::size_t second,
                                 std::size_t n_modes) {
  const std::size_t modes[] = {first, second};
  return beamsplitter(transmittance).embed(modes, n_modes);
}

SymplecticTransform passive(const Matrix& orthogonal) {
  if (orthogonal.rows() != orthogonal.cols()) throw DimensionError("passive: matrix not square");
  const Eigen::Index n = orthogonal.rows();
  if ((orthogonal * orthogonal.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() >
      kSymplecticTol) {
    throw DomainError("passive: mode matrix is not orthogonal");
  }
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      s(2 * i, 2 * j) = orthogonal(i, j);
      s(2 * i + 1, 2 * j + 1) = orthogonal(i, j);
    }
  }
  return SymplecticTransform(std::move(s));
}

SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b) {
  const Eigen::Index da = a.matrix().rows();
  const Eigen::Index db = b.matrix().rows();
  Matrix s = Matrix::Zero(da + db, da + db);
  s.topLeftCorner(da, da) = a.matrix();
  s.bottomRightCorner(db, db) = b.matrix();
  return SymplecticTransform(std::move(s));
}

GaussianState apply(const SymplecticTransform& transform, const GaussianState& state) {
  if (transform.n_modes() != state.n_modes()) {
    throw DimensionError("apply: transform acts on " + std::to_string(transform.n_modes()) +
                         " modes, state has " + std::to_string(state.n_modes()));
  }
  const Matrix& s = transform.matrix();
  return GaussianState(s * state.cm() * s.transpose());
}

std::vector<Eigen::Index> quadrature_indices(std::span<const std::size_t> modes) {
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * modes.size());
  for (auto m : modes) {
    idx.push_back(static_cast<Eigen::Index>(2 * m));
    idx.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  return idx;
}

GaussianState reduce(const GaussianState& state, std::span<const std::size_t> modes) {
  if (modes.empty()) throw DimensionError("reduce: empty mode list");
  ModePartition{std::vector<std::size_t>(modes.begin(), modes.end()), {}}.validate(
      state.n_modes());
  const auto idx = quadrature_indices(modes);
  return GaussianState(state.cm()(idx, idx));
}

GaussianState direct_sum(const GaussianState& a, const GaussianState& b) {
  const Eigen::Index da = a.cm().rows();
  const Eigen::Index db = b.cm().rows();
  Matrix cm = Matrix::Zero(da + db, da + db);
  cm.topLeftCorner(da, da) = a.cm();
  cm.bottomRightCorner(db, db) = b.cm();
  return GaussianState(std::move(cm));
}

GaussianState two_mode_squeezed(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw DomainError("two_mode_squeezed: lambda must lie in [0, 1)");
  }
  const double l2 = lambda * lambda;
  const double ch = (1.0 + l2) / (1.0 - l2);  // cosh 2r
  const double sh = 2.0 * lambda / (1.0 - l2);  // sinh 2r
  Matrix cm(4, 4);
  cm << ch, 0, sh, 0,
        0, ch, 0, -sh,
        sh, 0, ch, 0,
        0, -sh, 0, ch;
  return GaussianState(std::move(cm));
}

GaussianState fig3_state(double lambda) {
  const auto state = direct_sum(GaussianState::vacuum(1), two_mode_squeezed(lambda));
  return apply(beamsplitter(0.5, 0, 1, 3), state);
}

ModePartition ModePartition::complement(std::size_t n_modes, std::vector<std::size_t> kept) {
  ModePartition p{std::move(kept), {}};
  for (std::size_t m = 0; m < n_modes; ++m) {
    if (std::find(p.kept.begin(), p.kept.end(), m) == p.kept.end()) p.measured.push_back(m);
  }
  p.validate(n_modes);
  return p;
}

void ModePartition::validate(std::size_t n_modes) const {
  std::vector<bool> seen(n_modes, false);
  auto check = [&](std::size_t m) {
    if (m >= n_modes) {
      throw DimensionError("mode index " + std::to_string(m) + " out of range for " +
                           std::to_string(n_modes) + "-mode state");
    }
    if (seen[m]) throw DimensionError("mode index " + std::to_string(m) + " listed twice");
    seen[m] = true;
  };
  std::for_each(kept.begin(), kept.end(), check);
  std::for_each(measured.begin(), measured.end(), check);
}

}  // namespace gle
