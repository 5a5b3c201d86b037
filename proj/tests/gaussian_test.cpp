#include "gle/error.hpp"
#include "gle/gaussian.hpp"
#include "support/random_states.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace gle {
namespace {

using testing::Rng;
using testing::uniform;

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(SymplecticEigenvalues, VacuumIsAllOnes) {
  const auto nu = GaussianState::vacuum(3).symplectic_eigenvalues();
  ASSERT_EQ(nu.size(), 3u);
  for (double v : nu) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(SymplecticEigenvalues, SingleThermalMode) {
  const auto nu = GaussianState(3.0 * Matrix::Identity(2, 2)).symplectic_eigenvalues();
  ASSERT_EQ(nu.size(), 1u);
  EXPECT_NEAR(nu[0], 3.0, 1e-14);
}

TEST(SymplecticEigenvalues, SingleModeEqualsSqrtDet) {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto s = testing::random_single_mode(rng);
    const double n = uniform(rng, 1.0, 5.0);
    const Matrix cm = n * s.matrix() * s.matrix().transpose();
    EXPECT_NEAR(symplectic_eigenvalues(cm)[0], std::sqrt(cm.determinant()), 1e-10);
  }
}

TEST(SymplecticEigenvalues, SortedDescendingForMixedInputs) {
  Matrix cm = Matrix::Identity(6, 6);
  cm.block<2, 2>(0, 0) *= 2.0;
  cm.block<2, 2>(4, 4) *= 5.0;
  const auto nu = symplectic_eigenvalues(cm);
  ASSERT_EQ(nu.size(), 3u);
  EXPECT_NEAR(nu[0], 5.0, 1e-13);
  EXPECT_NEAR(nu[1], 2.0, 1e-13);
  EXPECT_NEAR(nu[2], 1.0, 1e-13);
}

TEST(SymplecticEigenvalues, RejectsBadShapes) {
  EXPECT_THROW(symplectic_eigenvalues(Matrix::Identity(3, 3)), DimensionError);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 0.3;
  EXPECT_THROW(symplectic_eigenvalues(asym), DimensionError);
}

TEST(GaussianState, RejectsUnphysicalCovariance) {
  EXPECT_THROW(GaussianState(0.5 * Matrix::Identity(2, 2)), PhysicalityError);
  EXPECT_THROW(GaussianState(-Matrix::Identity(4, 4)), PhysicalityError);
}

TEST(GaussianState, RejectsAsymmetricCovariance) {
  Matrix cm = Matrix::Identity(4, 4);
  cm(0, 2) = 0.1;
  EXPECT_THROW((GaussianState(cm)), DimensionError);
}

TEST(TwoModeSqueezed, ZeroLambdaIsTwoVacua) {
  EXPECT_LT(max_abs_diff(two_mode_squeezed(0.0).cm(), Matrix::Identity(4, 4)), 1e-15);
}

TEST(TwoModeSqueezed, BlocksMatchCoshSinh) {
  const double lambda = 0.5;
  const double r = std::atanh(lambda);
  const Matrix cm = two_mode_squeezed(lambda).cm();
  EXPECT_NEAR(cm(0, 0), std::cosh(2 * r), 1e-14);
  EXPECT_NEAR(cm(1, 1), std::cosh(2 * r), 1e-14);
  EXPECT_NEAR(cm(0, 2), std::sinh(2 * r), 1e-14);
  EXPECT_NEAR(cm(1, 3), -std::sinh(2 * r), 1e-14);
  EXPECT_NEAR(cm(0, 3), 0.0, 1e-15);
}

TEST(TwoModeSqueezed, LambdaDeterminantRelation) {
  for (int k = 1; k <= 9; ++k) {
    const double lambda = 0.1 * k;
    const auto state = two_mode_squeezed(lambda);
    const double d = std::sqrt(state.mode_block(1).determinant());
    EXPECT_NEAR(lambda * lambda, (d - 1.0) / (d + 1.0), 1e-12) << "lambda=" << lambda;
    EXPECT_TRUE(state.is_pure());
  }
}

TEST(TwoModeSqueezed, DomainErrors) {
  EXPECT_THROW(two_mode_squeezed(1.0), DomainError);
  EXPECT_THROW(two_mode_squeezed(-0.1), DomainError);
}

TEST(Constructors, RotationAtZeroIsIdentity) {
  EXPECT_LT(max_abs_diff(rotation(0.0).matrix(), Matrix::Identity(2, 2)), 1e-16);
}

TEST(Constructors, SqueezerOnVacuumGivesV) {
  for (double r : {-1.3, 0.0, 0.4, 2.0}) {
    const auto s = apply(squeezer(r), GaussianState::vacuum(1));
    EXPECT_LT(max_abs_diff(s.cm(), squeezed_cm(r)), 1e-12 * std::exp(2 * std::abs(r)));
  }
}

TEST(Constructors, RotationsCompose) {
  const auto id = rotation(0.7) * rotation(-0.7);
  EXPECT_LT(max_abs_diff(id.matrix(), Matrix::Identity(2, 2)), 1e-15);
}

TEST(Constructors, BalancedBeamsplitterConvention) {
  const Matrix s = beamsplitter(0.5).matrix();
  const double h = 1.0 / std::sqrt(2.0);
  // x1' = (x1 + x2)/sqrt2, x2' = (x1 - x2)/sqrt2; same for p.
  EXPECT_NEAR(s(0, 0), h, 1e-15);
  EXPECT_NEAR(s(0, 2), h, 1e-15);
  EXPECT_NEAR(s(2, 0), h, 1e-15);
  EXPECT_NEAR(s(2, 2), -h, 1e-15);
  EXPECT_NEAR(s(1, 3), h, 1e-15);
  EXPECT_NEAR(s(3, 3), -h, 1e-15);
  EXPECT_LT(max_abs_diff(s * s, Matrix::Identity(4, 4)), 1e-15);
}

TEST(Constructors, BeamsplitterMixesVacuumWithTmsvHalf) {
  // Oracle: explicit second moments of ((a+b)/sqrt2, (a-b)/sqrt2, c).
  const double lambda = 0.6;
  const double ch = (1 + lambda * lambda) / (1 - lambda * lambda);
  const double sh = 2 * lambda / (1 - lambda * lambda);
  const Matrix cm = fig3_state(lambda).cm();
  const double h = 1.0 / std::sqrt(2.0);
  Matrix expected = Matrix::Zero(6, 6);
  for (int q = 0; q < 2; ++q) {
    const double sign = q == 0 ? 1.0 : -1.0;
    expected(q, q) = expected(2 + q, 2 + q) = 0.5 * (1 + ch);
    expected(q, 2 + q) = expected(2 + q, q) = 0.5 * (1 - ch);
    expected(4 + q, 4 + q) = ch;
    expected(q, 4 + q) = expected(4 + q, q) = sign * sh * h;
    expected(2 + q, 4 + q) = expected(4 + q, 2 + q) = -sign * sh * h;
  }
  EXPECT_LT(max_abs_diff(cm, expected), 1e-13);
}

TEST(Constructors, DomainAndIndexErrors) {
  EXPECT_THROW(beamsplitter(1.5), DomainError);
  EXPECT_THROW(beamsplitter(-0.1), DomainError);
  EXPECT_THROW(beamsplitter(0.5, 0, 3, 3), DimensionError);
  EXPECT_THROW(beamsplitter(0.5, 1, 1, 3), DimensionError);
  Matrix not_symplectic = Matrix::Identity(2, 2);
  not_symplectic(0, 0) = 2.0;
  EXPECT_THROW((SymplecticTransform(not_symplectic)), DomainError);
}

TEST(Apply, IdentityLeavesStateUnchanged) {
  Rng rng(3);
  const auto state = testing::random_mixed_state(rng, 3);
  const auto out = apply(SymplecticTransform::identity(3), state);
  EXPECT_LT(max_abs_diff(out.cm(), state.cm()), 1e-15);
}

TEST(Apply, DimensionMismatch) {
  EXPECT_THROW(apply(rotation(0.1), GaussianState::vacuum(2)), DimensionError);
}

TEST(Apply, InverseUndoesTransform) {
  Rng rng(11);
  const auto s = testing::random_circuit(rng, 3);
  const auto state = testing::random_mixed_state(rng, 3);
  const auto back = apply(s.inverse(), apply(s, state));
  EXPECT_LT(max_abs_diff(back.cm(), state.cm()), 1e-10);
}

TEST(Reduce, TmsvHalfIsThermal) {
  const double lambda = 0.7;
  const double ch = (1 + lambda * lambda) / (1 - lambda * lambda);
  const std::size_t mode[] = {0};
  EXPECT_LT(max_abs_diff(reduce(two_mode_squeezed(lambda), mode).cm(), ch * Matrix::Identity(2, 2)),
            1e-14);
}

TEST(Reduce, VacuumStaysVacuum) {
  const std::size_t modes[] = {3, 1};
  EXPECT_LT(max_abs_diff(reduce(GaussianState::vacuum(4), modes).cm(), Matrix::Identity(4, 4)), 1e-16);
}

TEST(Reduce, ComposesAsIndexComposition) {
  Rng rng(5);
  const auto state = testing::random_mixed_state(rng, 4);
  const std::size_t outer[] = {2, 0, 3};
  const std::size_t inner[] = {1, 2};
  const std::size_t composed[] = {0, 3};
  EXPECT_LT(max_abs_diff(reduce(reduce(state, outer), inner).cm(), reduce(state, composed).cm()), 1e-16);
}

TEST(Reduce, IndexErrors) {
  const std::size_t out_of_range[] = {0, 5};
  const std::size_t dup[] = {1, 1};
  EXPECT_THROW(reduce(GaussianState::vacuum(3), out_of_range), DimensionError);
  EXPECT_THROW(reduce(GaussianState::vacuum(3), dup), DimensionError);
}

TEST(ModePartition, Complement) {
  const auto p = ModePartition::complement(5, {3, 1});
  EXPECT_EQ(p.kept, (std::vector<std::size_t>{3, 1}));
  EXPECT_EQ(p.measured, (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_THROW(ModePartition::complement(3, {0, 0}), DimensionError);
}

// ---- properties ----------------------------------------------------------

TEST(Properties, ConstructorsPreserveSymplecticForm) {
  Rng rng(101);
  for (int i = 0; i < 500; ++i) {
    const double scale_r = uniform(rng, -2.0, 2.0);
    for (const auto& s : {rotation(uniform(rng, -10, 10)), squeezer(scale_r),
                          beamsplitter(uniform(rng, 0, 1)),
                          beamsplitter(uniform(rng, 0, 1), 0, 2, 3)}) {
      const double scale = std::max(1.0, std::pow(s.matrix().cwiseAbs().maxCoeff(), 2));
      EXPECT_LT(s.symplectic_residual(), 1e-10 * scale);
    }
  }
}

TEST(Properties, CircuitsOnVacuumArePure) {
  Rng rng(202);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 4);
    const auto state = testing::random_pure_state(rng, n, 3, 1.0);
    for (double nu : state.symplectic_eigenvalues()) ASSERT_NEAR(nu, 1.0, 1e-9);
  }
}

TEST(Properties, DeterminantOfSumIdentity) {
  // det(X+Y) = det X + det Y + Tr[X R Y R^T] for symmetric 2x2 X, Y.
  Rng rng(303);
  const Mat2 r = rotation_r();
  for (int i = 0; i < 1000; ++i) {
    const Mat2 x = testing::random_symmetric2(rng);
    const Mat2 y = testing::random_symmetric2(rng);
    const double lhs = (x + y).determinant();
    const double rhs = x.determinant() + y.determinant() + (x * r * y * r.transpose()).trace();
    ASSERT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

}  // namespace
}  // namespace gle
