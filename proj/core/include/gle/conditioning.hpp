#pragma once

// Conditional covariance matrix after Gaussian measurements on a subset of
// modes. Only the covariance matrix is tracked: for Gaussian measurements it
// does not depend on the outcome, so there is no outcome argument anywhere.

#include "gle/gaussian.hpp"

#include <span>
#include <variant>
#include <vector>

namespace gle {

/// Projection onto the pure squeezed vacuum whose x_theta quadrature has
/// variance e^{-2r}. r = 0 is the vacuum (heterodyne-like); r -> infinity
/// converges to Homodyne{theta}.
struct GaussianProjector {
  double theta = 0.0;
  double r = 0.0;
};

/// Ideal homodyne detection of x_theta = cos(theta) x + sin(theta) p.
struct Homodyne {
  double theta = 0.0;
};

using MeasurementSpec = std::variant<GaussianProjector, Homodyne>;

struct ModeMeasurement {
  std::size_t mode = 0;
  MeasurementSpec spec;
};

/// Unit vector (cos theta, sin theta) selecting x_theta.
Vec2 quadrature_direction(double theta);

/// 2x2 covariance matrix of the projector state of a GaussianProjector.
Mat2 projector_cm(const GaussianProjector& projector);

/// Throws DomainError for non-finite angles or negative/non-finite r.
void validate_spec(const MeasurementSpec& spec);

/// Precomputed block split of a state for repeated conditioning with
/// different measurement settings on the same partition.
class Conditioner {
 public:
  Conditioner(const GaussianState& state, ModePartition partition);

  const ModePartition& partition() const noexcept { return partition_; }

  /// Conditional covariance matrix of the kept modes (in partition order).
  /// Not validated for physicality; see condition_gaussian for that.
  Matrix conditional_cm(std::span<const MeasurementSpec> specs) const;

 private:
  ModePartition partition_;
  Matrix kept_;      // A
  Matrix cross_;     // C (kept x measured)
  Matrix measured_;  // B
};

/// gamma_kept - C (B + gamma_M)^{-1} C^T, with homodyne modes handled as the
/// exact infinite-squeezing limit via a pseudo-inverse. An empty measured set
/// returns reduce(state, kept).
GaussianState condition_gaussian(const GaussianState& state, const ModePartition& partition,
                                 std::span<const MeasurementSpec> specs);

/// Conditions one mode at a time in the given order. The result holds every
/// unmeasured mode, in increasing original index order.
GaussianState condition_sequence(const GaussianState& state,
                                 std::span<const ModeMeasurement> measurements);

}  // namespace gle
