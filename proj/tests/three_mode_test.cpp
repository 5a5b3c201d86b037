#include "gle/error.hpp"
#include "gle/localize.hpp"
#include "support/random_states.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace gle {
namespace {

using testing::Rng;
using testing::uniform;

constexpr double kPi = std::numbers::pi;

double fig3_closed_form(double lambda) {
  return thermal_entropy(0.5 / std::sqrt(1.0 - std::pow(lambda, 4)) - 0.5);
}

double circular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kPi);
  return std::min(d, kPi - d);
}

LocalizationResult analytic(const GaussianState& state) {
  return optimize_three_mode(decompose_three_mode(state, {0, 1}, 2));
}

TEST(ThreeMode, Fig3MatchesClosedForm) {
  for (int i = 1; i <= 9; ++i) {
    const double lambda = 0.1 * i;
    const auto red = decompose_three_mode(fig3_state(lambda), {0, 1}, 2);
    EXPECT_NEAR(red.lambda, lambda, 1e-12);
    const auto res = optimize_three_mode(red);
    EXPECT_NEAR(res.value, fig3_closed_form(lambda), 1e-12);
    EXPECT_NEAR(std::get<Homodyne>(res.optimal_specs[0].spec).theta, kPi / 2, 1e-9);
  }
}

TEST(ThreeMode, PairAlreadyEntangledWithVacuumC) {
  const auto state = direct_sum(two_mode_squeezed(0.6), GaussianState::vacuum(1));
  const auto red = decompose_three_mode(state, {0, 1}, 2);
  EXPECT_EQ(red.lambda, 0.0);
  const auto res = optimize_three_mode(red);
  EXPECT_NEAR(res.value, entropy_of_entanglement(two_mode_squeezed(0.6)).value, 1e-10);
  EXPECT_LT(self_consistency_residual(state, res), 1e-10);
}

TEST(ThreeMode, NothingToLocalizeWhenCOnlyTalksToA) {
  // TMSV on (A, C), vacuum B: M = 0 and the optimum is zero.
  const std::size_t order[] = {0, 2, 1};
  const auto state = reduce(direct_sum(two_mode_squeezed(0.7), GaussianState::vacuum(1)), order);
  const auto red = decompose_three_mode(state, {0, 1}, 2);
  EXPECT_NEAR(red.lambda, 0.7, 1e-12);
  EXPECT_LT(red.m_matrix.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(optimize_three_mode(red).value, 0.0, 1e-12);
}

TEST(ThreeMode, ArbitraryModeLabels) {
  Rng rng(21);
  const auto state = testing::random_pure_state(rng, 3);
  const std::size_t order[] = {2, 0, 1};
  const auto permuted = reduce(state, order);
  // Mode 2 of `state` is mode 0 of `permuted`, etc.
  const auto a = optimize_three_mode(decompose_three_mode(state, {0, 1}, 2));
  const auto b = optimize_three_mode(decompose_three_mode(permuted, {1, 2}, 0));
  EXPECT_NEAR(a.value, b.value, 1e-10);
  EXPECT_EQ(b.optimal_specs[0].mode, 0u);
  EXPECT_LT(self_consistency_residual(permuted, b), 1e-9);
}

TEST(ThreeMode, ReconstructionIsAccurate) {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const auto red = decompose_three_mode(testing::random_pure_state(rng, 3, 3, 1.0), {0, 1}, 2);
    EXPECT_LT(red.reconstruction_residual, 1e-8);
    // S_AB is symplectic and S_C has unit determinant.
    EXPECT_LT(SymplecticTransform(red.s_ab).symplectic_residual(), 1e-8);
    EXPECT_NEAR(red.s_c.determinant(), 1.0, 1e-10);
    EXPECT_GE(red.m_xx, red.m_pp);
  }
}

TEST(ThreeMode, SelfConsistentOnRandomStates) {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const auto state = testing::random_pure_state(rng, 3);
    EXPECT_LT(self_consistency_residual(state, analytic(state)), 1e-9) << "case " << i;
  }
}

TEST(ThreeMode, BeatsRandomGaussianProjections) {
  Rng rng(24);
  for (int i = 0; i < 100; ++i) {
    const auto state = testing::random_pure_state(rng, 3);
    const double best = analytic(state).value;
    for (int k = 0; k < 20; ++k) {
      const MeasurementSpec spec[] = {GaussianProjector{uniform(rng, 0, kPi), uniform(rng, 0, 4)}};
      const auto out = condition_gaussian(state, {{0, 1}, {2}}, spec);
      EXPECT_LE(entanglement_value(out.cm(), Measure::EntropyOfEntanglement), best + 1e-10);
    }
  }
}

TEST(ThreeMode, OptimalPhaseFollowsRotationsOfC) {
  Rng rng(25);
  int checked = 0;
  while (checked < 100) {
    const auto state = testing::random_pure_state(rng, 3);
    const auto red = decompose_three_mode(state, {0, 1}, 2);
    // Skip near-degenerate optima where the phase is ill defined.
    if (red.m_xx - red.m_pp < 1e-3 || red.s_max < 1e-2) continue;
    ++checked;
    const double phi = uniform(rng, 0, 2 * kPi);
    const std::size_t c[] = {2};
    const auto rotated = apply(rotation(phi).embed(c, 3), state);
    const auto a = optimize_three_mode(red);
    const auto b = analytic(rotated);
    EXPECT_NEAR(a.value, b.value, 1e-9);
    const double ta = std::get<Homodyne>(a.optimal_specs[0].spec).theta;
    const double tb = std::get<Homodyne>(b.optimal_specs[0].spec).theta;
    EXPECT_LT(circular_distance(tb, ta - phi), 1e-7) << "phi " << phi;
  }
}

TEST(ThreeMode, Errors) {
  EXPECT_THROW(decompose_three_mode(GaussianState::vacuum(4), {0, 1}, 2), DimensionError);
  EXPECT_THROW(decompose_three_mode(GaussianState::vacuum(3), {0, 0}, 2), DimensionError);
  EXPECT_THROW(decompose_three_mode(GaussianState::vacuum(3), {0, 1}, 3), DimensionError);
  const Matrix thermal = 1.2 * Matrix::Identity(6, 6);
  EXPECT_THROW(decompose_three_mode(GaussianState(thermal), {0, 1}, 2), PreconditionError);
}

TEST(ThreeMode, VacuumEdgeCase) {
  const auto res = analytic(GaussianState::vacuum(3));
  EXPECT_EQ(res.value, 0.0);
  EXPECT_LT(self_consistency_residual(GaussianState::vacuum(3), res), 1e-14);
}

// ---- properties ----------------------------------------------------------

TEST(Properties, InteriorNeverBeatsEndpoints) {
  Rng rng(1001);
  for (int i = 0; i < 1000; ++i) {
    const double mxx = uniform(rng, 0, 5);
    const double mpp = uniform(rng, 0, 5);
    const double s_max = uniform(rng, 0, 3);
    const double theta = uniform(rng, 0, kPi);
    const double ends = std::max(three_mode_objective(s_max, theta, mxx, mpp),
                                 three_mode_objective(-s_max, theta, mxx, mpp));
    for (int k = 1; k < 200; ++k) {
      const double s = -s_max + 2.0 * s_max * k / 200.0;
      ASSERT_LE(three_mode_objective(s, theta, mxx, mpp), ends + 1e-12 * std::max(1.0, ends));
    }
  }
}

// det gamma_A = (det S_AA)^2 + (det T_AB)^2 + Tr[gamma~_A M] for any pure
// projection on C, where gamma~_A is the state prepared on A of the
// normal-form TMSV.
TEST(Properties, DeterminantIdentity) {
  Rng rng(1002);
  for (int i = 0; i < 500; ++i) {
    const auto state = testing::random_pure_state(rng, 3);
    const auto red = decompose_three_mode(state, {0, 1}, 2);
    const GaussianProjector proj{uniform(rng, 0, kPi), uniform(rng, 0, 3)};
    const double predicted = testing::predicted_det_a(red, proj);
    const MeasurementSpec spec[] = {proj};
    const double actual =
        condition_gaussian(state, {{0, 1}, {2}}, spec).cm().block<2, 2>(0, 0).determinant();
    ASSERT_NEAR(predicted, actual, 1e-9 * actual) << "case " << i;
  }
}

}  // namespace
}  // namespace gle
