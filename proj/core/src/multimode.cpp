#include "gle/error.hpp"
#include "gle/localize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

namespace gle {

namespace {

std::vector<MeasurementSpec> homodynes(const std::vector<double>& phases) {
  std::vector<MeasurementSpec> specs;
  specs.reserve(phases.size());
  for (double t : phases) specs.emplace_back(Homodyne{t});
  return specs;
}

double det_first_mode(const Matrix& cm) { return cm.block<2, 2>(0, 0).determinant(); }

}  // namespace

LocalizationResult optimize_multimode_pure(const GaussianState& state, ModePair kept,
                                           const MultimodeOptions& options,
                                           MultimodeTrace* trace) {
  const std::size_t n = state.n_modes();
  if (n < 3) throw DimensionError("optimize_multimode_pure: need at least 3 modes");
  const auto partition = ModePartition::complement(n, {kept[0], kept[1]});
  if (!state.is_pure(kPureInputTol)) {
    throw PreconditionError("optimize_multimode_pure: state is not pure");
  }
  const std::size_t n_meas = partition.measured.size();
  const Conditioner full(state, partition);

  // For coordinate j: condition every other measured mode, leaving (A, B, C_j).
  std::vector<Conditioner> partial;
  partial.reserve(n_meas);
  for (std::size_t j = 0; j < n_meas; ++j) {
    ModePartition p{{kept[0], kept[1], partition.measured[j]}, {}};
    for (std::size_t k = 0; k < n_meas; ++k) {
      if (k != j) p.measured.push_back(partition.measured[k]);
    }
    partial.emplace_back(state, std::move(p));
  }

  auto coordinate_optimum = [&](std::size_t j, const std::vector<double>& phases) {
    std::vector<double> others;
    for (std::size_t k = 0; k < n_meas; ++k) {
      if (k != j) others.push_back(phases[k]);
    }
    const GaussianState reduced(partial[j].conditional_cm(homodynes(others)));
    return optimize_three_mode(decompose_three_mode(reduced, {0, 1}, 2));
  };

  auto objective = [&](const std::vector<double>& phases) {
    return det_first_mode(full.conditional_cm(homodynes(phases)));
  };

  // Starting points: best cells of a coarse phase grid, then random vectors.
  std::vector<std::vector<double>> starts;
  std::size_t cells = 1;
  for (std::size_t j = 0; j < n_meas && cells <= options.grid_budget; ++j) cells *= options.grid_steps;
  if (options.grid_seeds > 0 && options.grid_steps > 0 && cells <= options.grid_budget) {
    const double step = std::numbers::pi / static_cast<double>(options.grid_steps);
    auto cell_phases = [&](std::size_t index) {
      std::vector<double> phases(n_meas);
      for (std::size_t j = n_meas; j-- > 0;) {
        phases[j] = static_cast<double>(index % options.grid_steps) * step;
        index /= options.grid_steps;
      }
      return phases;
    };
    std::vector<std::pair<double, std::size_t>> scored(cells);
    for (std::size_t i = 0; i < cells; ++i) scored[i] = {-objective(cell_phases(i)), i};
    const std::size_t keep = std::min(options.grid_seeds, cells);
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end());
    for (std::size_t k = 0; k < keep; ++k) starts.push_back(cell_phases(scored[k].second));
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> phase(0.0, std::numbers::pi);
  for (std::size_t r = 0; r < options.restarts || starts.empty(); ++r) {
    std::vector<double> phases(n_meas);
    for (auto& t : phases) t = phase(rng);
    starts.push_back(std::move(phases));
  }

  std::vector<double> best_phases;
  double best_det = -1.0;
  if (trace) trace->steps.clear();

  for (auto& phases : starts) {
    double current = objective(phases);
    std::vector<double> history{current};

    for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
      const double before = current;
      for (std::size_t j = 0; j < n_meas; ++j) {
        const auto step = coordinate_optimum(j, phases);
        phases[j] = std::get<Homodyne>(step.optimal_specs[0].spec).theta;
        current = objective(phases);
        history.push_back(current);
      }
      if (current - before < options.tolerance) break;
    }
    if (trace) trace->steps.push_back(std::move(history));
    if (current > best_det) {
      best_det = current;
      best_phases = phases;
    }
  }

  LocalizationResult out;
  out.method = Method::MultimodePhaseSearch;
  out.measure = Measure::EntropyOfEntanglement;
  out.partition = partition;
  for (std::size_t j = 0; j < n_meas; ++j) {
    out.optimal_specs.push_back({partition.measured[j], Homodyne{best_phases[j]}});
  }
  out.conditional_cm = full.conditional_cm(homodynes(best_phases));
  out.n_a = std::max(0.0, thermal_invariant(out.conditional_cm.block<2, 2>(0, 0)));
  out.value = thermal_entropy(*out.n_a);
  return out;
}

}  // namespace gle
