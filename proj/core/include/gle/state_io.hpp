#pragma once

// JSON state files:
//   {"modes": N, "ordering": "xp-interleaved", "convention": "vacuum-identity",
//    "cm": [[...], ...]}
// The cm is row-major 2N x 2N; numbers are written with 17 significant digits.

#include "gle/conditioning.hpp"
#include "gle/gaussian.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <span>
#include <string_view>
#include <vector>

namespace gle {

/// Raw contents of a state file before physicality checks.
struct StateDocument {
  std::size_t modes = 0;
  Matrix cm;
};

/// Parses and checks structure (keys, ordering/convention tags, shape).
/// Throws ParseError with line/column context on malformed JSON.
StateDocument parse_state_document(std::string_view text);

/// Parse + symmetry + physicality.
GaussianState parse_state(std::string_view text);

GaussianState read_state(const std::filesystem::path& path);
StateDocument read_state_document(const std::filesystem::path& path);

std::string format_state(const GaussianState& state);
void write_state(std::ostream& out, const GaussianState& state);
void write_state(const std::filesystem::path& path, const GaussianState& state);

/// Measurement settings: a single object or an array of
///   {"mode": k, "kind": "projector"|"homodyne", "theta": t, "r": r}
/// ("r" only for projectors).
std::vector<ModeMeasurement> parse_measurements(std::string_view text);
std::string format_measurements(std::span<const ModeMeasurement> measurements);

/// %.17g, with "-0" normalized to "0".
std::string format_double(double value, int significant_digits = 17);

}  // namespace gle
