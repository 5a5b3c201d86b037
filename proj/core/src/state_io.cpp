#include "gle/state_io.hpp"

#include "gle/error.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace gle {

namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open state file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_double(double value, int significant_digits) {
  if (value == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return buf;
}

StateDocument parse_state_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "at line L, column C" in its message.
    throw ParseError(std::string("state file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("state file: top level must be an object");
  for (const char* key : {"modes", "cm"}) {
    if (!doc.contains(key)) throw ParseError(std::string("state file: missing key '") + key + "'");
  }
  if (doc.contains("ordering") && doc["ordering"] != "xp-interleaved") {
    throw ParseError("state file: unsupported ordering (expected \"xp-interleaved\")");
  }
  if (doc.contains("convention") && doc["convention"] != "vacuum-identity") {
    throw ParseError("state file: unsupported convention (expected \"vacuum-identity\")");
  }
  if (!doc["modes"].is_number_integer() || doc["modes"].get<long long>() <= 0) {
    throw ParseError("state file: 'modes' must be a positive integer");
  }
  StateDocument out;
  out.modes = doc["modes"].get<std::size_t>();
  const auto dim = static_cast<Eigen::Index>(2 * out.modes);
  const json& rows = doc["cm"];
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim) {
    throw ParseError("state file: 'cm' must have " + std::to_string(dim) + " rows");
  }
  out.cm.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      throw ParseError("state file: row " + std::to_string(i) + " of 'cm' must have " +
                       std::to_string(dim) + " entries");
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) {
        throw ParseError("state file: cm[" + std::to_string(i) + "][" + std::to_string(j) +
                         "] is not a number");
      }
      out.cm(i, j) = v.get<double>();
    }
  }
  return out;
}

GaussianState parse_state(std::string_view text) {
  return GaussianState(parse_state_document(text).cm);
}

StateDocument read_state_document(const std::filesystem::path& path) {
  return parse_state_document(slurp(path));
}

GaussianState read_state(const std::filesystem::path& path) {
  return parse_state(slurp(path));
}

std::string format_state(const GaussianState& state) {
  std::ostringstream out;
  write_state(out, state);
  return out.str();
}

void write_state(std::ostream& out, const GaussianState& state) {
  const Matrix& cm = state.cm();
  out << "{\"modes\": " << state.n_modes()
      << ", \"ordering\": \"xp-interleaved\", \"convention\": \"vacuum-identity\", \"cm\": [";
  for (Eigen::Index i = 0; i < cm.rows(); ++i) {
    out << (i ? ",\n  [" : "\n  [");
    for (Eigen::Index j = 0; j < cm.cols(); ++j) {
      out << (j ? ", " : "") << format_double(cm(i, j));
    }
    out << "]";
  }
  out << "\n]}\n";
}

void write_state(const std::filesystem::path& path, const GaussianState& state) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write state file '" + path.string() + "'");
  write_state(out, state);
}

namespace {

ModeMeasurement measurement_from_json(const json& m) {
  if (!m.is_object()) throw ParseError("measurement: expected an object");
  for (const char* key : {"mode", "kind", "theta"}) {
    if (!m.contains(key)) throw ParseError(std::string("measurement: missing key '") + key + "'");
  }
  if (!m["mode"].is_number_integer() || m["mode"].get<long long>() < 0) {
    throw ParseError("measurement: 'mode' must be a non-negative integer");
  }
  if (!m["theta"].is_number()) throw ParseError("measurement: 'theta' must be a number");
  ModeMeasurement out;
  out.mode = m["mode"].get<std::size_t>();
  const double theta = m["theta"].get<double>();
  const std::string kind = m["kind"].is_string() ? m["kind"].get<std::string>() : "";
  if (kind == "homodyne") {
    out.spec = Homodyne{theta};
  } else if (kind == "projector") {
    if (!m.contains("r") || !m["r"].is_number()) {
      throw ParseError("measurement: projector needs a numeric 'r'");
    }
    out.spec = GaussianProjector{theta, m["r"].get<double>()};
  } else {
    throw ParseError("measurement: 'kind' must be \"projector\" or \"homodyne\"");
  }
  validate_spec(out.spec);
  return out;
}

}  // namespace

std::vector<ModeMeasurement> parse_measurements(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("measurement file: ") + e.what());
  }
  std::vector<ModeMeasurement> out;
  if (doc.is_array()) {
    for (const auto& m : doc) out.push_back(measurement_from_json(m));
  } else {
    out.push_back(measurement_from_json(doc));
  }
  return out;
}

std::string format_measurements(std::span<const ModeMeasurement> measurements) {
  json arr = json::array();
  for (const auto& m : measurements) {
    json obj;
    obj["mode"] = m.mode;
    if (const auto* p = std::get_if<GaussianProjector>(&m.spec)) {
      obj["kind"] = "projector";
      obj["theta"] = p->theta;
      obj["r"] = p->r;
    } else {
      obj["kind"] = "homodyne";
      obj["theta"] = std::get<Homodyne>(m.spec).theta;
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump();
}

}  // namespace gle
