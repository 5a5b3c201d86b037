#include "gle/error.hpp"
#include "gle/localize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

namespace gle {

namespace {

struct Best {
  double value = -1.0;
  std::size_t index = 0;
};

std::vector<MeasurementSpec> decode(std::size_t index, std::size_t n_meas,
                                    const std::vector<MeasurementSpec>& candidates) {
  std::vector<MeasurementSpec> specs(n_meas);
  for (std::size_t j = n_meas; j-- > 0;) {
    specs[j] = candidates[index % candidates.size()];
    index /= candidates.size();
  }
  return specs;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::AnalyticThreeMode:
      return "three-mode";
    case Method::MultimodePhaseSearch:
      return "multimode";
    case Method::SymmetricReduction:
      return "symmetric";
    case Method::GridOracle:
      return "oracle";
  }
  return "unknown";
}

std::vector<double> GridSpec::default_r_values() { return r_range(6.0, 0.5); }

std::vector<double> GridSpec::r_range(double r_max, double step) {
  if (!(r_max >= 0.0) || !(step > 0.0) || !std::isfinite(r_max)) {
    throw DomainError("grid: r_max must be >= 0 and r_step > 0");
  }
  std::vector<double> r;
  const auto count = static_cast<std::size_t>(std::floor(r_max / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) r.push_back(static_cast<double>(i) * step);
  return r;
}

std::vector<MeasurementSpec> grid_candidates(const GridSpec& grid) {
  if (grid.theta_steps == 0) throw DomainError("grid: theta_steps must be positive");
  std::vector<MeasurementSpec> out;
  const double dtheta = std::numbers::pi / static_cast<double>(grid.theta_steps);
  for (double r : grid.r_values) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("grid: r values must be finite and >= 0");
    if (r == 0.0) {
      out.emplace_back(GaussianProjector{0.0, 0.0});
      continue;
    }
    for (std::size_t i = 0; i < grid.theta_steps; ++i) {
      out.emplace_back(GaussianProjector{static_cast<double>(i) * dtheta, r});
    }
  }
  if (grid.include_homodyne) {
    for (std::size_t i = 0; i < grid.theta_steps; ++i) {
      out.emplace_back(Homodyne{static_cast<double>(i) * dtheta});
    }
  }
  if (out.empty()) throw DomainError("grid: no candidate measurements");
  return out;
}

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GLE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

LocalizationResult grid_oracle(const GaussianState& state, ModePair kept, Measure measure,
                               const GridSpec& grid) {
  const auto partition = ModePartition::complement(state.n_modes(), {kept[0], kept[1]});
  const std::size_t n_meas = partition.measured.size();
  if (n_meas > grid.max_measured) {
    throw SizeError("grid_oracle: " + std::to_string(n_meas) + " measured modes exceeds the limit of " +
                    std::to_string(grid.max_measured));
  }
  if (measure == Measure::EntropyOfEntanglement && !state.is_pure(kPureInputTol)) {
    throw PreconditionError("grid_oracle: entropy of entanglement requires a pure state");
  }
  const auto candidates = grid_candidates(grid);
  std::size_t total = 1;
  for (std::size_t j = 0; j < n_meas; ++j) {
    if (total > grid.max_evaluations / candidates.size()) {
      throw SizeError("grid_oracle: search space exceeds " + std::to_string(grid.max_evaluations) +
                      " evaluations");
    }
    total *= candidates.size();
  }

  const Conditioner conditioner(state, partition);
  auto evaluate = [&](std::size_t index) {
    return entanglement_value(conditioner.conditional_cm(decode(index, n_meas, candidates)), measure);
  };

  const unsigned n_threads = static_cast<unsigned>(
      std::min<std::size_t>(resolve_threads(grid.threads), total));
  std::vector<Best> partial(n_threads);
  auto worker = [&](unsigned t) {
    const std::size_t lo = total * t / n_threads;
    const std::size_t hi = total * (t + 1) / n_threads;
    Best b;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = evaluate(i);
      if (v > b.value) b = {v, i};
    }
    partial[t] = b;
  };
  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
  }
  // Chunks are ordered, so strict '>' keeps the lowest index on ties.
  Best best = partial[0];
  for (const auto& b : partial) {
    if (b.value > best.value) best = b;
  }

  LocalizationResult out;
  out.method = Method::GridOracle;
  out.measure = measure;
  out.partition = partition;
  const auto specs = decode(best.index, n_meas, candidates);
  for (std::size_t j = 0; j < n_meas; ++j) out.optimal_specs.push_back({partition.measured[j], specs[j]});
  out.conditional_cm = conditioner.conditional_cm(specs);
  out.value = best.value;
  if (measure == Measure::LogNegativity) {
    out.mu = pt_min_symplectic_fast(out.conditional_cm);
  } else {
    out.n_a = std::max(0.0, thermal_invariant(out.conditional_cm.block<2, 2>(0, 0)));
  }
  return out;
}

double self_consistency_residual(const GaussianState& state, const LocalizationResult& result) {
  std::vector<MeasurementSpec> specs;
  for (const auto& m : result.optimal_specs) specs.push_back(m.spec);
  const Matrix cm = Conditioner(state, result.partition).conditional_cm(specs);
  const double cm_residual = (cm - result.conditional_cm).cwiseAbs().maxCoeff();
  const GaussianState ab(cm);
  const double value = result.measure == Measure::LogNegativity ? log_negativity(ab).value
                                                                : entropy_of_entanglement(ab).value;
  return std::max(cm_residual, std::abs(value - result.value));
}

}  // namespace gle
