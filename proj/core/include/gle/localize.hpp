#pragma once

// Gaussian localizable entanglement: the largest entanglement between a pair
// of modes (A, B) that local Gaussian measurements on every other mode can
// leave behind. Because conditional covariance matrices do not depend on
// measurement outcomes, the outcome average collapses to a single
// conditional state, and everything below is an optimization over
// measurement settings only.

#include "gle/conditioning.hpp"
#include "gle/entanglement.hpp"
#include "gle/gaussian.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace gle {

using ModePair = std::array<std::size_t, 2>;

enum class Method { AnalyticThreeMode, MultimodePhaseSearch, SymmetricReduction, GridOracle };

std::string_view to_string(Method method);

struct LocalizationResult {
  double value = 0.0;
  Measure measure = Measure::EntropyOfEntanglement;
  Method method = Method::AnalyticThreeMode;
  /// One entry per measured mode, in partition order.
  std::vector<ModeMeasurement> optimal_specs;
  ModePartition partition;
  /// Conditional covariance matrix of (A, B) under optimal_specs.
  Matrix conditional_cm;
  std::optional<double> mu;   // LogNegativity only
  std::optional<double> n_a;  // EntropyOfEntanglement only
};

// ---------------------------------------------------------------------------
// Pure three-mode states.

/// Normal form of a pure three-mode state with respect to the AB|C split:
///   gamma = (S_AB + S_C) (TMSV(lambda)_AC + I_B) (S_AB + S_C)^T.
/// The quantity to maximize is det gamma_A = (det S_AA)^2 + (det T_AB)^2 +
/// Tr[gamma~_A M], where gamma~_A is the squeezed state that measuring C
/// prepares on A in the normal-form frame.
struct ThreeModeReduction {
  double lambda = 0.0;
  /// e^{2 s_max} = (1 + lambda^2) / (1 - lambda^2).
  double s_max = 0.0;
  Mat2 s_aa, t_ab, t_ba, s_bb;
  /// M = S_AA^T R T_AB T_AB^T R^T S_AA.
  Mat2 m_matrix;
  /// W(theta0) M W(theta0)^T = diag(m_xx, m_pp), theta0 in [0, pi).
  double theta0 = 0.0;
  double m_xx = 0.0;
  double m_pp = 0.0;
  /// Local symplectic on C with gamma_C = sqrt(det gamma_C) S_C S_C^T.
  Mat2 s_c;
  /// Symplectic on (A, B), 4x4.
  Matrix s_ab;
  /// max |reconstructed - input| of the decomposition.
  double reconstruction_residual = 0.0;

  // Input, for re-conditioning.
  Matrix cm;  // 6x6 in (A, B, C) order
  ModePartition partition;
};

/// Objective of the measured-mode optimization in the M-diagonal frame:
///   f(s, theta) = e^{2s}(m_xx cos^2 + m_pp sin^2) + e^{-2s}(m_xx sin^2 + m_pp cos^2).
double three_mode_objective(double s, double theta, double m_xx, double m_pp);

/// Purity tolerance for pure-state optimizers (conditioning output carries
/// accumulated rounding).
inline constexpr double kPureInputTol = 1e-6;

ThreeModeReduction decompose_three_mode(const GaussianState& state, ModePair kept,
                                        std::size_t measured);

/// Analytic optimum: homodyne detection of a single quadrature of C.
LocalizationResult optimize_three_mode(const ThreeModeReduction& reduction);

// ---------------------------------------------------------------------------
// Pure N-mode states.

struct MultimodeOptions {
  /// Random starting phase vectors.
  std::size_t restarts = 8;
  std::uint64_t seed = 20070101;
  std::size_t max_sweeps = 100;
  double tolerance = 1e-10;
  /// The phase landscape can hold several local maxima on narrow ridges.
  /// When grid_steps^(N-2) <= grid_budget, the objective is also scanned on
  /// a uniform phase grid and the best grid_seeds points become extra starts.
  std::size_t grid_steps = 24;
  std::size_t grid_budget = 20'000;
  std::size_t grid_seeds = 4;
};

struct MultimodeTrace {
  /// Objective (det gamma_A) after every coordinate step of every start
  /// (grid seeds first, then random restarts).
  std::vector<std::vector<double>> steps;
};

/// Coordinate ascent over homodyne phases; every coordinate update is the
/// exact three-mode optimum given the other phases.
LocalizationResult optimize_multimode_pure(const GaussianState& state, ModePair kept,
                                           const MultimodeOptions& options = {},
                                           MultimodeTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Permutation-symmetric mixed states, beta = b I, epsilon = diag(eps1, eps2).

struct SymmetricStateSpec {
  std::size_t n = 3;
  double b = 1.0;
  double eps1 = 0.0;
  double eps2 = 0.0;

  Matrix covariance() const;
  /// Throws DomainError / PhysicalityError.
  GaussianState state() const;
  void validate() const;
};

/// Recognizes a covariance matrix of the symmetric diagonal form.
std::optional<SymmetricStateSpec> detect_symmetric(const GaussianState& state,
                                                   double tol = 1e-12);

/// After mixing the C modes into one collective mode C1 and the pair (A, B)
/// on a balanced beamsplitter, B decouples and only (A, C1) stay correlated.
struct SymmetricReduction {
  Matrix gamma_ac1;  // 4x4
  Mat2 gamma_b_in;   // beta - epsilon
};

SymmetricReduction reduce_symmetric(const SymmetricStateSpec& spec);

/// Covariance of A after measuring C1 in the reduced model:
///   beta + eps - 2(N-2) eps [beta + (N-3) eps + gamma_M]^{-1} eps.
Mat2 symmetric_gamma_a_in(const SymmetricReduction& reduction, const MeasurementSpec& spec);

/// Two-mode CM of (A, B) obtained by mixing gamma_a and gamma_b on a balanced
/// beamsplitter.
Matrix mix_on_balanced_beamsplitter(const Mat2& gamma_a, const Mat2& gamma_b);

/// Three-mode (A, B, C1) state of the reduced model.
GaussianState symmetric_reduced_state(const SymmetricStateSpec& spec);

/// Homodyne of x or p on every C_j, whichever gives the smaller PT
/// symplectic eigenvalue. Kept modes are (0, 1).
LocalizationResult optimize_symmetric(const SymmetricStateSpec& spec);

// ---------------------------------------------------------------------------
// Exhaustive search over single-mode Gaussian projections.

struct GridSpec {
  std::size_t theta_steps = 180;
  std::vector<double> r_values = default_r_values();
  bool include_homodyne = true;
  std::size_t max_measured = 3;
  std::size_t max_evaluations = 20'000'000;
  /// 0 = use GLE_THREADS or the hardware concurrency.
  unsigned threads = 0;

  static std::vector<double> default_r_values();
  /// {0, step, 2 step, ..., r_max}.
  static std::vector<double> r_range(double r_max, double step);
};

/// Candidate measurement settings for a single mode. r = 0 is listed once.
std::vector<MeasurementSpec> grid_candidates(const GridSpec& grid);

/// Thread count honoring the GLE_THREADS cap.
unsigned resolve_threads(unsigned requested);

LocalizationResult grid_oracle(const GaussianState& state, ModePair kept, Measure measure,
                               const GridSpec& grid = {});

// ---------------------------------------------------------------------------

/// Re-conditions `state` with result.optimal_specs and checks the
/// conditional CM and entanglement value; returns the larger residual.
double self_consistency_residual(const GaussianState& state, const LocalizationResult& result);

}  // namespace gle
