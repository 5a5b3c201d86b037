#include "gle/cli.hpp"

#include "gle/error.hpp"
#include "gle/fock.hpp"
#include "gle/localize.hpp"
#include "gle/state_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace gle::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string state_path;
  std::string kept = "0,1";
  std::string method = "auto";
  std::string measure;
  std::string symmetric;
  std::size_t theta_steps = 180;
  double r_max = 6.0;
  double r_step = 0.5;
  std::optional<std::size_t> cutoff;
  std::uint64_t seed = MultimodeOptions{}.seed;
  std::size_t restarts = MultimodeOptions{}.restarts;
  std::string out_path;
  std::string format;
  // curve-fig3
  double lambda_min = 0.0;
  double lambda_max = 0.99;
  std::size_t steps = 100;
  // gen
  std::string kind;
  double lambda = 0.5;
  std::size_t modes = 2;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string(what) + ": '" + s + "' is not a number");
}

std::size_t to_index(const std::string& s, const char* what) {
  const double v = to_double(s, what);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw UsageError(std::string(what) + ": '" + s + "' is not a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

ModePair parse_kept(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("--kept expects two mode indices, e.g. 0,1");
  return {to_index(parts[0], "--kept"), to_index(parts[1], "--kept")};
}

SymmetricStateSpec parse_symmetric(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw UsageError("--symmetric expects N,b,eps1,eps2");
  return {to_index(parts[0], "--symmetric"), to_double(parts[1], "--symmetric"),
          to_double(parts[2], "--symmetric"), to_double(parts[3], "--symmetric")};
}

GridSpec grid_from(const Options& o) {
  GridSpec g;
  g.theta_steps = o.theta_steps;
  g.r_values = GridSpec::r_range(o.r_max, o.r_step);
  return g;
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out_path, std::ios::binary);
  if (!file) throw ParseError("cannot write output file '" + o.out_path + "'");
  file << text;
}

// ---- inputs ---------------------------------------------------------------

struct Input {
  GaussianState state;
  std::optional<SymmetricStateSpec> symmetric;  // set when given by flags or detected
  bool symmetric_from_flags = false;
};

Input load_input(const Options& o) {
  if (!o.symmetric.empty() && !o.state_path.empty()) {
    throw UsageError("give either --state or --symmetric, not both");
  }
  if (!o.symmetric.empty()) {
    const auto spec = parse_symmetric(o.symmetric);
    return {spec.state(), spec, true};
  }
  if (o.state_path.empty()) throw UsageError("missing --state (or --symmetric)");
  auto state = read_state(o.state_path);
  auto detected = detect_symmetric(state);
  return {std::move(state), detected, false};
}

Method choose_method(const Options& o, const Input& in) {
  if (o.method == "three-mode") return Method::AnalyticThreeMode;
  if (o.method == "multimode") return Method::MultimodePhaseSearch;
  if (o.method == "symmetric") return Method::SymmetricReduction;
  if (o.method == "oracle") return Method::GridOracle;
  if (in.symmetric_from_flags) return Method::SymmetricReduction;
  const bool pure = in.state.is_pure(kPureInputTol);
  if (pure && in.state.n_modes() == 3) return Method::AnalyticThreeMode;
  if (pure && in.state.n_modes() > 3) return Method::MultimodePhaseSearch;
  if (in.symmetric) return Method::SymmetricReduction;
  return Method::GridOracle;
}

Measure choose_measure(const Options& o, const GaussianState& state) {
  if (o.measure == "entropy") return Measure::EntropyOfEntanglement;
  if (o.measure == "log-negativity") return Measure::LogNegativity;
  return state.is_pure(kPureInputTol) ? Measure::EntropyOfEntanglement : Measure::LogNegativity;
}

// By permutation symmetry every pair is equivalent to (0, 1); re-express the
// optimum on the requested pair.
LocalizationResult symmetric_for_pair(const SymmetricStateSpec& spec, ModePair kept) {
  auto res = optimize_symmetric(spec);
  const MeasurementSpec hom = res.optimal_specs.front().spec;
  res.partition = ModePartition::complement(spec.n, {kept[0], kept[1]});
  res.partition.validate(spec.n);
  res.optimal_specs.clear();
  for (auto m : res.partition.measured) res.optimal_specs.push_back({m, hom});
  const std::vector<MeasurementSpec> specs(res.partition.measured.size(), hom);
  res.conditional_cm = Conditioner(spec.state(), res.partition).conditional_cm(specs);
  return res;
}

LocalizationResult localize_with(Method method, const Options& o, const Input& in, ModePair kept) {
  const auto& state = in.state;
  switch (method) {
    case Method::AnalyticThreeMode: {
      if (state.n_modes() != 3) {
        throw PreconditionError("three-mode method requires a 3-mode state, got " +
                                std::to_string(state.n_modes()));
      }
      const auto p = ModePartition::complement(3, {kept[0], kept[1]});
      p.validate(3);
      return optimize_three_mode(decompose_three_mode(state, kept, p.measured.at(0)));
    }
    case Method::MultimodePhaseSearch: {
      MultimodeOptions mo;
      mo.seed = o.seed;
      mo.restarts = o.restarts;
      return optimize_multimode_pure(state, kept, mo);
    }
    case Method::SymmetricReduction:
      if (!in.symmetric) {
        throw PreconditionError(
            "symmetric method requires --symmetric N,b,eps1,eps2 or a state of the symmetric "
            "diagonal form");
      }
      return symmetric_for_pair(*in.symmetric, kept);
    case Method::GridOracle:
      return grid_oracle(state, kept, choose_measure(o, state), grid_from(o));
  }
  throw UsageError("unknown method");
}

// ---- output ---------------------------------------------------------------

json measurement_json(const ModeMeasurement& m) {
  json j;
  j["mode"] = m.mode;
  if (const auto* p = std::get_if<GaussianProjector>(&m.spec)) {
    j["kind"] = "projector";
    j["theta"] = p->theta;
    j["r"] = p->r;
  } else {
    j["kind"] = "homodyne";
    j["theta"] = std::get<Homodyne>(m.spec).theta;
  }
  return j;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

json result_json(const LocalizationResult& r) {
  json j;
  j["measure"] = std::string(to_string(r.measure));
  j["value"] = r.value;
  if (r.mu) j["mu"] = *r.mu;
  if (r.n_a) j["n_a"] = *r.n_a;
  j["method"] = std::string(to_string(r.method));
  j["kept"] = r.partition.kept;
  json specs = json::array();
  for (const auto& m : r.optimal_specs) specs.push_back(measurement_json(m));
  j["measurements"] = specs;
  j["conditional_cm"] = matrix_json(r.conditional_cm);
  return j;
}

std::string fmt12(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---- commands -------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out) {
  if (o.state_path.empty()) throw UsageError("missing --state");
  const auto doc = read_state_document(o.state_path);
  const Matrix sym = 0.5 * (doc.cm + doc.cm.transpose());
  std::ostringstream text;
  text << "modes: " << doc.modes << "\n";
  text << "symmetry residual: " << format_double(symmetry_residual(doc.cm), 12) << "\n";
  text << "symplectic eigenvalues: [";
  const auto nu = symplectic_eigenvalues(sym);
  for (std::size_t i = 0; i < nu.size(); ++i) text << (i ? ", " : "") << format_double(nu[i], 12);
  text << "]\n";
  int code = kOk;
  try {
    const GaussianState state(doc.cm);
    text << "verdict: " << (state.is_pure() ? "pure" : "mixed") << "\n";
  } catch (const Error& e) {
    text << "verdict: unphysical (" << e.what() << ")\n";
    code = kValidation;
  }
  emit(text.str(), o, out);
  return code;
}

int cmd_localize(const Options& o, std::ostream& out) {
  const auto in = load_input(o);
  const auto kept = parse_kept(o.kept);
  const auto result = localize_with(choose_method(o, in), o, in, kept);
  emit(result_json(result).dump(2) + "\n", o, out);
  return kOk;
}

int cmd_oracle_compare(const Options& o, std::ostream& out) {
  const auto in = load_input(o);
  const auto kept = parse_kept(o.kept);
  const bool pure = in.state.is_pure(kPureInputTol);
  const auto grid = grid_from(o);

  LocalizationResult analytic;
  LocalizationResult oracle;
  if (in.symmetric && (in.symmetric_from_flags || !pure)) {
    // The collective-mode reduction leaves a 3-mode model whatever N is.
    analytic = symmetric_for_pair(*in.symmetric, kept);
    oracle = grid_oracle(symmetric_reduced_state(*in.symmetric), {0, 1}, Measure::LogNegativity, grid);
  } else if (pure && in.state.n_modes() >= 3) {
    const Method m = in.state.n_modes() == 3 ? Method::AnalyticThreeMode : Method::MultimodePhaseSearch;
    analytic = localize_with(m, o, in, kept);
    oracle = grid_oracle(in.state, kept, Measure::EntropyOfEntanglement, grid);
  } else {
    throw PreconditionError(
        "oracle-compare needs a pure state with at least 3 modes or a symmetric state");
  }

  json j;
  j["measure"] = std::string(to_string(analytic.measure));
  j["method"] = std::string(to_string(analytic.method));
  j["analytic"] = analytic.value;
  j["oracle"] = oracle.value;
  j["gap"] = analytic.value - oracle.value;
  emit(j.dump(2) + "\n", o, out);
  return kOk;
}

int cmd_curve_fig3(const Options& o, std::ostream& out) {
  if (!(o.lambda_min >= 0.0 && o.lambda_min < o.lambda_max && o.lambda_max < 1.0)) {
    throw UsageError("curve-fig3 requires 0 <= lambda-min < lambda-max < 1");
  }
  if (o.steps < 2) throw UsageError("curve-fig3 requires --steps >= 2");
  const bool as_json = o.format == "json";

  std::ostringstream text;
  json rows = json::array();
  if (!as_json) text << "lambda,E_LG,E_LNG\n";
  for (std::size_t i = 0; i < o.steps; ++i) {
    const double lambda = o.lambda_min + (o.lambda_max - o.lambda_min) * static_cast<double>(i) /
                                             static_cast<double>(o.steps - 1);
    const double g = fock::localizable_gaussian_fig3(lambda);
    const double ng = o.cutoff
                          ? fock::localizable_non_gaussian(lambda, fock::FockCutoff{*o.cutoff, 0.0})
                          : fock::localizable_non_gaussian(lambda);
    if (as_json) {
      rows.push_back({{"lambda", lambda}, {"E_LG", g}, {"E_LNG", ng}});
    } else {
      text << fmt12(lambda) << ',' << fmt12(g) << ',' << fmt12(ng) << '\n';
    }
  }
  emit(as_json ? rows.dump(2) + "\n" : text.str(), o, out);
  return kOk;
}

int cmd_gen(const Options& o, std::ostream& out) {
  std::optional<GaussianState> state;
  if (o.kind == "vacuum") {
    if (o.modes == 0) throw UsageError("--modes must be positive");
    state = GaussianState::vacuum(o.modes);
  } else if (o.kind == "tmsv") {
    state = two_mode_squeezed(o.lambda);
  } else if (o.kind == "fig3") {
    state = fig3_state(o.lambda);
  } else {
    if (o.symmetric.empty()) throw UsageError("gen symmetric requires --symmetric N,b,eps1,eps2");
    state = parse_symmetric(o.symmetric).state();
  }
  emit(format_state(*state), o, out);
  return kOk;
}

void add_grid_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--theta-steps", o.theta_steps, "Oracle phase steps over [0, pi)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--r-max", o.r_max, "Largest oracle squeezing")->capture_default_str();
  cmd->add_option("--r-step", o.r_step, "Oracle squeezing step")->capture_default_str();
}

void add_input_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--state", o.state_path, "State file (JSON)");
  cmd->add_option("--symmetric", o.symmetric, "Symmetric state N,b,eps1,eps2");
  cmd->add_option("--kept", o.kept, "Pair of kept modes i,j")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Gaussian localizable entanglement", "gle"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check symmetry and physicality of a state file");
  validate->add_option("--state", o.state_path, "State file (JSON)")->required();
  validate->add_option("--out", o.out_path, "Write the report here instead of stdout");

  auto* localize = app.add_subcommand("localize", "Optimize local measurements on the other modes");
  add_input_flags(localize, o);
  localize->add_option("--method", o.method, "Optimizer")
      ->check(CLI::IsMember({"auto", "three-mode", "multimode", "symmetric", "oracle"}))
      ->capture_default_str();
  localize->add_option("--measure", o.measure, "Oracle measure (default: entropy if pure)")
      ->check(CLI::IsMember({"entropy", "log-negativity"}));
  add_grid_flags(localize, o);
  localize->add_option("--seed", o.seed, "Seed for multimode restarts")->capture_default_str();
  localize->add_option("--restarts", o.restarts, "Multimode restarts")->capture_default_str();
  localize->add_option("--out", o.out_path, "Write JSON here instead of stdout");

  auto* curve = app.add_subcommand("curve-fig3", "Gaussian and photon-counting curves versus lambda");
  curve->add_option("--lambda-min", o.lambda_min)->capture_default_str();
  curve->add_option("--lambda-max", o.lambda_max)->capture_default_str();
  curve->add_option("--steps", o.steps)->capture_default_str();
  curve->add_option("--cutoff", o.cutoff, "Photon-number cutoff (default: tail below 1e-8)");
  curve->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  curve->add_option("--out", o.out_path, "Write here instead of stdout");

  auto* compare = app.add_subcommand("oracle-compare", "Analytic optimum versus grid oracle");
  add_input_flags(compare, o);
  add_grid_flags(compare, o);
  compare->add_option("--seed", o.seed, "Seed for multimode restarts")->capture_default_str();
  compare->add_option("--restarts", o.restarts, "Multimode restarts")->capture_default_str();
  compare->add_option("--out", o.out_path, "Write JSON here instead of stdout");

  auto* gen = app.add_subcommand("gen", "Emit a canonical test state");
  gen->add_option("kind", o.kind, "vacuum, tmsv, fig3 or symmetric")
      ->required()
      ->check(CLI::IsMember({"vacuum", "tmsv", "fig3", "symmetric"}));
  gen->add_option("--lambda", o.lambda, "Squeezing parameter lambda = tanh r")->capture_default_str();
  gen->add_option("--modes", o.modes, "Number of vacuum modes")->capture_default_str();
  gen->add_option("--symmetric", o.symmetric, "N,b,eps1,eps2");
  gen->add_option("--out", o.out_path, "Write here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(o, out);
    if (*localize) return cmd_localize(o, out);
    if (*curve) return cmd_curve_fig3(o, out);
    if (*compare) return cmd_oracle_compare(o, out);
    return cmd_gen(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace gle::cli
