#include "gle/conditioning.hpp"
#include "gle/error.hpp"
#include "support/random_states.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace gle {
namespace {

using testing::Rng;
using testing::uniform;

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

MeasurementSpec random_pure_spec(Rng& rng) {
  if (uniform(rng, 0, 1) < 0.4) return Homodyne{uniform(rng, 0, kPi)};
  return GaussianProjector{uniform(rng, 0, kPi), uniform(rng, 0, 3)};
}

TEST(ProjectorCm, IsPureAndSqueezedAlongTheta) {
  const GaussianProjector p{0.3, 0.8};
  const Mat2 cm = projector_cm(p);
  EXPECT_NEAR(cm.determinant(), 1.0, 1e-13);
  const Vec2 u = quadrature_direction(0.3);
  EXPECT_NEAR(u.dot(cm * u), std::exp(-1.6), 1e-14);
  EXPECT_LT((projector_cm({0.0, 0.0}) - Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(ConditionGaussian, TmsvHomodyneXLeavesMaximallySqueezedMode) {
  for (double lambda : {0.2, 0.5, 0.8}) {
    const double ch = (1 + lambda * lambda) / (1 - lambda * lambda);
    const MeasurementSpec spec[] = {Homodyne{0.0}};
    const auto out = condition_gaussian(two_mode_squeezed(lambda), {{0}, {1}}, spec);
    EXPECT_NEAR(out.cm()(0, 0), 1.0 / ch, 1e-13);
    EXPECT_NEAR(out.cm()(1, 1), ch, 1e-13);
    EXPECT_NEAR(out.cm()(0, 1), 0.0, 1e-14);
    // e^{2 s_max} = (1 + lambda^2) / (1 - lambda^2).
    EXPECT_NEAR(std::sqrt(out.cm()(1, 1) / out.cm()(0, 0)), ch, 1e-12);
    EXPECT_TRUE(out.is_pure());
  }
}

TEST(ConditionGaussian, TmsvVacuumProjectionMatchesSchurOracle) {
  const double lambda = 0.5;
  const double ch = (1 + lambda * lambda) / (1 - lambda * lambda);
  const double sh = 2 * lambda / (1 - lambda * lambda);
  const MeasurementSpec spec[] = {GaussianProjector{0.9, 0.0}};
  const auto out = condition_gaussian(two_mode_squeezed(lambda), {{0}, {1}}, spec);
  const double expected = ch - sh * sh / (1.0 + ch);
  EXPECT_LT(max_abs_diff(out.cm(), expected * Matrix::Identity(2, 2)), 1e-13);
}

TEST(ConditionGaussian, EmptyMeasuredSetIsReduce) {
  Rng rng(1);
  const auto state = testing::random_mixed_state(rng, 4);
  const ModePartition p{{3, 1}, {}};
  const auto out = condition_gaussian(state, p, {});
  EXPECT_EQ(max_abs_diff(out.cm(), reduce(state, p.kept).cm()), 0.0);
}

TEST(ConditionGaussian, Errors) {
  const auto state = GaussianState::vacuum(3);
  const MeasurementSpec one[] = {Homodyne{0.0}};
  EXPECT_THROW(condition_gaussian(state, {{0, 1}, {2, 0}}, one), DimensionError);
  EXPECT_THROW(condition_gaussian(state, {{0}, {1, 2}}, one), DimensionError);
  const MeasurementSpec bad[] = {GaussianProjector{0.0, -1.0}};
  EXPECT_THROW(condition_gaussian(state, {{0, 1}, {2}}, bad), DomainError);
}

TEST(ConditionGaussian, StrongSqueezingStaysPure) {
  // A strongly squeezed input with projectors up to e^{40} anti-squeezing:
  // the output must remain a valid pure state.
  const auto state = two_mode_squeezed(0.999);
  for (double r : {5.0, 10.0, 20.0}) {
    const MeasurementSpec proj[] = {GaussianProjector{0.3, r}};
    const auto out = condition_gaussian(state, {{0}, {1}}, proj);
    EXPECT_TRUE(out.is_pure(1e-9)) << r;
  }
  const MeasurementSpec hom[] = {Homodyne{0.3}};
  EXPECT_TRUE(condition_gaussian(state, {{0}, {1}}, hom).is_pure(1e-9));
}

TEST(ConditionGaussian, OverflowingSqueezingIsNumericalError) {
  const MeasurementSpec spec[] = {GaussianProjector{0.0, 400.0}};
  EXPECT_THROW(condition_gaussian(two_mode_squeezed(0.5), {{0}, {1}}, spec), NumericalError);
}

TEST(ConditionSequence, SingleStepEqualsJoint) {
  Rng rng(2);
  const auto state = testing::random_pure_state(rng, 3);
  const MeasurementSpec spec = Homodyne{0.4};
  const ModeMeasurement seq[] = {{2, spec}};
  const MeasurementSpec joint[] = {spec};
  EXPECT_LT(max_abs_diff(condition_sequence(state, seq).cm(),
                         condition_gaussian(state, {{0, 1}, {2}}, joint).cm()),
            1e-14);
}

TEST(ConditionSequence, JointEqualsSequentialOnRandomStates) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto state = i % 2 ? testing::random_pure_state(rng, 4) : testing::random_mixed_state(rng, 4);
    const MeasurementSpec a = random_pure_spec(rng);
    const MeasurementSpec b = random_pure_spec(rng);
    const MeasurementSpec joint[] = {a, b};
    const ModeMeasurement seq[] = {{2, a}, {3, b}};
    const ModeMeasurement reversed[] = {{3, b}, {2, a}};
    const Matrix j = condition_gaussian(state, {{0, 1}, {2, 3}}, joint).cm();
    EXPECT_LT(max_abs_diff(j, condition_sequence(state, seq).cm()), 1e-10);
    EXPECT_LT(max_abs_diff(j, condition_sequence(state, reversed).cm()), 1e-10);
  }
}

TEST(ConditionSequence, Errors) {
  const auto state = GaussianState::vacuum(2);
  const ModeMeasurement twice[] = {{1, Homodyne{}}, {1, Homodyne{}}};
  EXPECT_THROW(condition_sequence(state, twice), DimensionError);
  const ModeMeasurement all[] = {{0, Homodyne{}}, {1, Homodyne{}}};
  EXPECT_THROW(condition_sequence(state, all), DimensionError);
}

// ---- properties ----------------------------------------------------------

TEST(Properties, PurityPreservedUnderPureProjections) {
  Rng rng(404);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 3 + static_cast<std::size_t>(i % 3);
    const auto state = testing::random_pure_state(rng, n, 2, 0.8);
    const auto p = ModePartition::complement(n, {0, 1});
    std::vector<MeasurementSpec> specs;
    for (std::size_t j = 0; j < p.measured.size(); ++j) specs.push_back(random_pure_spec(rng));
    const auto out = condition_gaussian(state, p, specs);
    for (double nu : out.symplectic_eigenvalues()) ASSERT_NEAR(nu, 1.0, 1e-8) << "case " << i;
  }
}

TEST(Properties, OutputIsPhysicalForMixedStates) {
  Rng rng(505);
  for (int i = 0; i < 200; ++i) {
    const auto state = testing::random_mixed_state(rng, 4);
    const MeasurementSpec specs[] = {random_pure_spec(rng), random_pure_spec(rng)};
    EXPECT_NO_THROW(condition_gaussian(state, {{1, 3}, {0, 2}}, specs));
  }
}

TEST(Properties, HomodyneIsTheInfiniteSqueezingLimit) {
  Rng rng(606);
  int checked = 0;
  while (checked < 100) {
    const auto state = testing::random_pure_state(rng, 3, 2, 0.6);
    if (state.cm().lpNorm<Eigen::Infinity>() > 10.0) continue;
    ++checked;
    const double theta = uniform(rng, 0, kPi);
    const MeasurementSpec hom[] = {Homodyne{theta}};
    const Matrix limit = condition_gaussian(state, {{0, 1}, {2}}, hom).cm();
    double previous = std::numeric_limits<double>::infinity();
    for (double r : {2.0, 4.0, 6.0, 8.0}) {
      const MeasurementSpec proj[] = {GaussianProjector{theta, r}};
      const double gap = max_abs_diff(condition_gaussian(state, {{0, 1}, {2}}, proj).cm(), limit);
      EXPECT_LT(gap, previous);
      previous = gap;
    }
    EXPECT_LT(previous, 1e-5);
  }
}

TEST(Properties, MixedProjectorAndHomodyneJointMatchesSequential) {
  Rng rng(707);
  for (int i = 0; i < 100; ++i) {
    const auto state = testing::random_mixed_state(rng, 5);
    const MeasurementSpec a = GaussianProjector{uniform(rng, 0, kPi), uniform(rng, 0, 2)};
    const MeasurementSpec b = Homodyne{uniform(rng, 0, kPi)};
    const MeasurementSpec c = Homodyne{uniform(rng, 0, kPi)};
    const MeasurementSpec joint[] = {a, b, c};
    const ModeMeasurement seq[] = {{4, c}, {2, a}, {3, b}};
    EXPECT_LT(max_abs_diff(condition_gaussian(state, {{0, 1}, {2, 3, 4}}, joint).cm(),
                           condition_sequence(state, seq).cm()),
              1e-10);
  }
}

}  // namespace
}  // namespace gle
