#include "gle/error.hpp"
#include "gle/localize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gle {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_half_turn(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

Matrix tmsv_ac_vacuum_b(double lambda) {
  // TMSV(lambda) on (A, C) and vacuum on B, in (A, B, C) order.
  const Matrix tmsv = two_mode_squeezed(lambda).cm();
  Matrix g = Matrix::Identity(6, 6);
  g.block<2, 2>(0, 0) = tmsv.block<2, 2>(0, 0);
  g.block<2, 2>(0, 4) = tmsv.block<2, 2>(0, 2);
  g.block<2, 2>(4, 0) = tmsv.block<2, 2>(2, 0);
  g.block<2, 2>(4, 4) = tmsv.block<2, 2>(2, 2);
  return g;
}

Matrix reconstruct(const Matrix& s_ab, const Mat2& s_c, double lambda) {
  Matrix s = Matrix::Zero(6, 6);
  s.topLeftCorner(4, 4) = s_ab;
  s.bottomRightCorner(2, 2) = s_c;
  return s * tmsv_ac_vacuum_b(lambda) * s.transpose();
}

// Positive square root of a symmetric PD matrix. For a pure-state CM this is
// itself symplectic.
Matrix sqrtm_spd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

// S_AB = [P | Q] with P fixed by the AB-C correlations and Q completing the
// vacuum part of mode B.
Matrix s_ab_from_correlations(const Matrix& gamma_ab, const Matrix& k, double lambda) {
  const double l2 = lambda * lambda;
  const double ch = (1.0 + l2) / (1.0 - l2);
  const double sh = 2.0 * lambda / (1.0 - l2);
  const Mat2 z = Vec2(1.0, -1.0).asDiagonal();
  const Matrix p = k * z / sh;
  const Matrix g = gamma_ab - ch * p * p.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.transpose()));
  Matrix q(4, 2);
  for (int j = 0; j < 2; ++j) {
    q.col(j) = es.eigenvectors().col(3 - j) * std::sqrt(std::max(es.eigenvalues()(3 - j), 0.0));
  }
  Matrix s(4, 4);
  s << p, q;
  const Matrix omega = symplectic_form(2);
  if ((s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() > 1e-6) {
    // Q is fixed up to an orthogonal 2x2 factor; a reflection flips the sign
    // of its symplectic part.
    s.col(3) *= -1.0;
  }
  return s;
}

}  // namespace

double three_mode_objective(double s, double theta, double m_xx, double m_pp) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  return std::exp(2.0 * s) * (m_xx * c2 + m_pp * s2) + std::exp(-2.0 * s) * (m_xx * s2 + m_pp * c2);
}

ThreeModeReduction decompose_three_mode(const GaussianState& state, ModePair kept,
                                        std::size_t measured) {
  if (state.n_modes() != 3) {
    throw DimensionError("decompose_three_mode: expected 3 modes, got " +
                         std::to_string(state.n_modes()));
  }
  ModePartition partition{{kept[0], kept[1]}, {measured}};
  partition.validate(3);
  if (!state.is_pure(kPureInputTol)) {
    throw PreconditionError("decompose_three_mode: state is not pure");
  }
  const std::size_t order[] = {kept[0], kept[1], measured};
  const Matrix g = reduce(state, order).cm();

  ThreeModeReduction red;
  red.cm = g;
  red.partition = partition;

  const Mat2 gamma_c = g.block<2, 2>(4, 4);
  const double d = std::sqrt(gamma_c.determinant());
  const double l2 = std::max(0.0, (d - 1.0) / (d + 1.0));
  red.lambda = std::sqrt(l2);
  red.s_max = 0.5 * std::log(std::max(d, 1.0));

  // Williamson form of mode C: gamma_C / d = O diag(e^{2t}, e^{-2t}) O^T.
  Eigen::SelfAdjointEigenSolver<Mat2> es_c(gamma_c / d);
  Mat2 o;
  o.col(0) = es_c.eigenvectors().col(1);
  o.col(1) = es_c.eigenvectors().col(0);
  if (o.determinant() < 0.0) o.col(1) *= -1.0;
  const double e2t = std::max(es_c.eigenvalues()(1), 1.0);
  red.s_c = o * Vec2(std::sqrt(e2t), 1.0 / std::sqrt(e2t)).asDiagonal();

  const Mat2 s_c_inv = red.s_c.inverse();
  const Matrix gamma_ab = g.topLeftCorner(4, 4);
  const Matrix k = g.topRightCorner(4, 2) * s_c_inv.transpose();

  // Near lambda = 0 the correlation route divides by ~lambda; compare with
  // the uncorrelated normal form and keep whichever reconstructs better.
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  double best_residual = std::numeric_limits<double>::infinity();
  if (red.lambda > 0.0) {
    red.s_ab = s_ab_from_correlations(gamma_ab, k, red.lambda);
    best_residual = (reconstruct(red.s_ab, red.s_c, red.lambda) - g).cwiseAbs().maxCoeff();
  }
  if (red.lambda < 1e-4) {
    const Matrix s0 = sqrtm_spd(gamma_ab);
    const double r0 = (reconstruct(s0, red.s_c, 0.0) - g).cwiseAbs().maxCoeff();
    if (r0 < best_residual) {
      best_residual = r0;
      red.s_ab = s0;
      red.lambda = 0.0;
      red.s_max = 0.0;
    }
  }
  red.reconstruction_residual = best_residual;
  if (!(best_residual <= 1e-6 * scale)) {
    throw NumericalError("decompose_three_mode: normal-form reconstruction failed (residual " +
                         std::to_string(best_residual) + ")");
  }

  red.s_aa = red.s_ab.block<2, 2>(0, 0);
  red.t_ab = red.s_ab.block<2, 2>(0, 2);
  red.t_ba = red.s_ab.block<2, 2>(2, 0);
  red.s_bb = red.s_ab.block<2, 2>(2, 2);

  const Mat2 r = rotation_r();
  Mat2 m = red.s_aa.transpose() * r * red.t_ab * red.t_ab.transpose() * r.transpose() * red.s_aa;
  red.m_matrix = 0.5 * (m + m.transpose());

  Eigen::SelfAdjointEigenSolver<Mat2> es_m(red.m_matrix);
  red.m_pp = std::max(es_m.eigenvalues()(0), 0.0);
  red.m_xx = std::max(es_m.eigenvalues()(1), 0.0);
  // W(theta0)^T has the m_xx eigenvector (cos theta0, sin theta0) as first column.
  const Vec2 v = es_m.eigenvectors().col(1);
  red.theta0 = wrap_half_turn(std::atan2(v.y(), v.x()));
  return red;
}

LocalizationResult optimize_three_mode(const ThreeModeReduction& red) {
  struct Candidate {
    double s, theta;
  };
  const Candidate candidates[] = {
      {red.s_max, 0.0}, {red.s_max, kPi / 2}, {-red.s_max, 0.0}, {-red.s_max, kPi / 2}};
  Candidate best = candidates[0];
  double best_f = three_mode_objective(best.s, best.theta, red.m_xx, red.m_pp);
  for (const auto& c : candidates) {
    const double f = three_mode_objective(c.s, c.theta, red.m_xx, red.m_pp);
    if (f > best_f) {
      best_f = f;
      best = c;
    }
  }

  const double m_scale = std::max(1.0, red.s_ab.cwiseAbs().maxCoeff());
  const bool measurement_irrelevant =
      red.lambda == 0.0 || red.m_matrix.cwiseAbs().maxCoeff() <= 1e-14 * m_scale * m_scale;

  double theta_opt = 0.0;
  if (!measurement_irrelevant) {
    // Squeezed direction of gamma~_A = W(-theta) V(s) W(-theta)^T in the
    // M-diagonal frame, then back to the original A frame.
    const double ct = std::cos(best.theta);
    const double st = std::sin(best.theta);
    const Vec2 v_frame = best.s >= 0.0 ? Vec2(-st, ct) : Vec2(ct, st);
    const Vec2 v = phase_rotation(red.theta0).transpose() * v_frame;
    // Homodyne of u on the TMSV half squeezes A along Z u.
    const Vec2 u(v.x(), -v.y());
    // Undo the local symplectic on C: measure w^T q with w = S_C^{-T} u.
    const Vec2 w = red.s_c.inverse().transpose() * u;
    theta_opt = wrap_half_turn(std::atan2(w.y(), w.x()));
  }

  const double det_a = std::pow(red.s_aa.determinant(), 2) + std::pow(red.t_ab.determinant(), 2) + best_f;

  LocalizationResult out;
  out.method = Method::AnalyticThreeMode;
  out.measure = Measure::EntropyOfEntanglement;
  out.partition = red.partition;
  out.optimal_specs = {ModeMeasurement{red.partition.measured[0], Homodyne{theta_opt}}};
  out.n_a = std::max(0.0, 0.5 * (std::sqrt(det_a) - 1.0));
  out.value = thermal_entropy(*out.n_a);

  const Matrix& g = red.cm;
  const Vec2 u = quadrature_direction(theta_opt);
  const Matrix cu = g.topRightCorner(4, 2) * u;
  out.conditional_cm = g.topLeftCorner(4, 4) - cu * cu.transpose() / (u.dot(g.block<2, 2>(4, 4) * u));
  return out;
}

}  // namespace gle
