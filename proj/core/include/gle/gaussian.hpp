#pragma once

// Phase-space representation of zero-mean Gaussian states.
//
// Conventions used throughout the library:
//   * quadratures are interleaved (x_1, p_1, ..., x_N, p_N), so the 2x2 block
//     of mode k lives at rows/cols 2k, 2k+1;
//   * the vacuum covariance matrix is the identity;
//   * a SymplecticTransform S acts on quadrature operators as q -> S q and on
//     covariance matrices as gamma -> S gamma S^T.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace gle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPhysicalityTol = 1e-9;
inline constexpr double kSymplecticTol = 1e-10;

/// Standard symplectic form: block diagonal of [[0, 1], [-1, 0]].
Matrix symplectic_form(std::size_t n_modes);

/// The constant 2x2 matrix R = [[0, 1], [-1, 0]].
Mat2 rotation_r();

/// W(theta) = [[cos, sin], [-sin, cos]].
Mat2 phase_rotation(double theta);

/// V(r) = diag(e^{2r}, e^{-2r}), the covariance matrix of a squeezed vacuum.
Mat2 squeezed_cm(double r);

/// Symplectic eigenvalues of an arbitrary 2N x 2N symmetric matrix, sorted
/// descending. Works for non-physical input too (used by validation).
std::vector<double> symplectic_eigenvalues(const Matrix& cm);

/// Largest |gamma_ij - gamma_ji| relative to max |gamma_ij|.
double symmetry_residual(const Matrix& cm);

class GaussianState {
 public:
  /// Validates shape, symmetry and physicality; the stored matrix is
  /// symmetrized.
  explicit GaussianState(Matrix cm);

  static GaussianState vacuum(std::size_t n_modes);

  std::size_t n_modes() const noexcept { return n_modes_; }
  const Matrix& cm() const noexcept { return cm_; }

  /// 2x2 covariance block of a single mode.
  Mat2 mode_block(std::size_t mode) const;

  std::vector<double> symplectic_eigenvalues() const;
  bool is_pure(double tol = kPhysicalityTol) const;

 private:
  std::size_t n_modes_;
  Matrix cm_;
};

class SymplecticTransform {
 public:
  /// Validates S Omega S^T = Omega to kSymplecticTol (relative to |S|^2).
  explicit SymplecticTransform(Matrix s);

  static SymplecticTransform identity(std::size_t n_modes);

  std::size_t n_modes() const noexcept { return n_modes_; }
  const Matrix& matrix() const noexcept { return s_; }

  SymplecticTransform inverse() const;

  /// Composition: (a * b) applies b first.
  friend SymplecticTransform operator*(const SymplecticTransform& a,
                                       const SymplecticTransform& b);

  /// Embeds a k-mode transform acting on `modes` into an n-mode identity.
  SymplecticTransform embed(std::span<const std::size_t> modes,
                            std::size_t n_modes) const;

  /// Residual |S Omega S^T - Omega|_max.
  double symplectic_residual() const;

 private:
  std::size_t n_modes_;
  Matrix s_;
};

/// Single-mode phase rotation W(theta): x -> cos x + sin p, p -> -sin x + cos p.
SymplecticTransform rotation(double theta);

/// Single-mode squeezer x -> e^r x, p -> e^{-r} p. Maps vacuum onto V(r).
SymplecticTransform squeezer(double r);

/// Two-mode beamsplitter acting identically on x and p with mode matrix
/// [[sqrt(T), sqrt(1-T)], [sqrt(1-T), -sqrt(T)]]. At T = 1/2 this is
/// (q1, q2) -> ((q1+q2)/sqrt2, (q1-q2)/sqrt2), which is its own inverse.
SymplecticTransform beamsplitter(double transmittance);

/// Beamsplitter between modes `first` and `second` of an n-mode system.
SymplecticTransform beamsplitter(double transmittance, std::size_t first,
                                 std::size_t second, std::size_t n_modes);

/// Passive transform q_k -> sum_j O_kj q_j for a real orthogonal O.
SymplecticTransform passive(const Matrix& orthogonal);

/// Direct sum of transforms on consecutive mode groups.
SymplecticTransform direct_sum(const SymplecticTransform& a,
                               const SymplecticTransform& b);

/// gamma -> S gamma S^T.
GaussianState apply(const SymplecticTransform& transform,
                    const GaussianState& state);

/// Principal submatrix on the listed modes, in the listed order.
GaussianState reduce(const GaussianState& state,
                     std::span<const std::size_t> modes);

/// Direct sum of two states (modes of `b` follow those of `a`).
GaussianState direct_sum(const GaussianState& a, const GaussianState& b);

/// Two-mode squeezed vacuum with Schmidt parameter lambda = tanh r, 0 <= lambda < 1.
GaussianState two_mode_squeezed(double lambda);

/// Three-mode state: two-mode squeezed vacuum on modes (1, 2), vacuum on
/// mode 0, then a balanced beamsplitter on modes (0, 1).
GaussianState fig3_state(double lambda);

/// Which modes are kept (the pair A, B) and which are measured.
struct ModePartition {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> measured;

  /// Kept = `kept`, measured = every other mode in increasing order.
  static ModePartition complement(std::size_t n_modes,
                                  std::vector<std::size_t> kept);

  /// Throws DimensionError on duplicate or out-of-range indices.
  void validate(std::size_t n_modes) const;
};

/// Quadrature row/col indices for a list of modes.
std::vector<Eigen::Index> quadrature_indices(std::span<const std::size_t> modes);

}  // namespace gle
