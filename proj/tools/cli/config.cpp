#include "cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "gaussbounds/jet_io.hpp"
#include "json.hpp"

namespace gaussbounds::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw UsageError(fmt::format("{}: '{}' is not a number", what, text));
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool is_fixed(const BuiltinModel& m, const std::string& name) {
  for (const auto& [k, v] : m.fixed) {
    if (k == name) return true;
  }
  return false;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    out[i] = i == count - 1 ? stop : start + (stop - start) * static_cast<double>(i) / (count - 1);
  }
  return out;
}

ReportOptions RunConfig::report_options() const {
  ReportOptions o;
  o.epsilon = epsilon;
  o.extrapolate = extrapolate;
  o.verify = verify;
  return o;
}

ParamMap parse_assignments(const std::string& text, const std::string& flag) {
  ParamMap out;
  if (trim(text).empty()) return out;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw UsageError(fmt::format("{}: expected name=value, got '{}'", flag, item));
    }
    const std::string key = trim(item.substr(0, eq));
    if (key.empty()) throw UsageError(fmt::format("{}: empty parameter name in '{}'", flag, item));
    if (out.contains(key)) throw UsageError(fmt::format("{}: '{}' assigned twice", flag, key));
    out[key] = parse_double(item.substr(eq + 1), fmt::format("{} {}", flag, key));
  }
  return out;
}

SweepAxis parse_sweep(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) throw UsageError(fmt::format("--sweep: expected name:start:stop:count, got '{}'", text));
  SweepAxis ax;
  ax.name = trim(parts[0]);
  if (ax.name.empty()) throw UsageError("--sweep: empty parameter name");
  ax.start = parse_double(parts[1], "--sweep start");
  ax.stop = parse_double(parts[2], "--sweep stop");
  const double c = parse_double(parts[3], "--sweep count");
  if (c != std::floor(c) || c < 2 || c > 1e6) {
    throw UsageError(fmt::format("--sweep: count must be an integer >= 2, got '{}'", trim(parts[3])));
  }
  ax.count = static_cast<int>(c);
  return ax;
}

WeightMatrix load_weight(const std::string& spec, int p) {
  if (spec == "identity") return WeightMatrix::identity(p);
  std::ifstream in(spec);
  if (!in) throw UsageError(fmt::format("--weight: cannot open '{}' (use 'identity' or a JSON matrix file)", spec));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(fmt::format("--weight {}: {}", spec, e.what()));
  }
  if (!j.is_array() || static_cast<int>(j.size()) != p) {
    throw UsageError(fmt::format("--weight {}: expected a {}x{} array of arrays", spec, p, p));
  }
  Mat W(p, p);
  for (int a = 0; a < p; ++a) {
    if (!j[a].is_array() || static_cast<int>(j[a].size()) != p) {
      throw UsageError(fmt::format("--weight {}: row {} must have {} entries", spec, a, p));
    }
    for (int b = 0; b < p; ++b) {
      if (!j[a][b].is_number()) throw UsageError(fmt::format("--weight {}: entry [{}][{}] is not a number", spec, a, b));
      W(a, b) = j[a][b].get<double>();
    }
  }
  try {
    return WeightMatrix(W);
  } catch (const std::invalid_argument& e) {
    throw UsageError(fmt::format("--weight {}: {}", spec, e.what()));
  }
}

void validate(const RunConfig& c) {
  if (c.model.has_value() == c.jet_file.has_value()) {
    throw UsageError("exactly one of --model or --jet is required");
  }
  if (c.jet_file && (!c.fixed.empty() || !c.at.empty())) {
    throw UsageError("--fixed and --at apply to builtin models only");
  }
  if (c.jet_file && c.sweep) throw UsageError("--sweep needs a builtin model; a jet file has no parametrization");
  if (c.format != "table" && c.format != "json") {
    throw UsageError(fmt::format("--format: expected 'table' or 'json', got '{}'", c.format));
  }
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw UsageError(fmt::format("--epsilon {} outside (0, 1)", c.epsilon));
  if (c.jobs < 1) throw UsageError(fmt::format("--jobs must be >= 1, got {}", c.jobs));
  if (c.model) {
    const BuiltinModel& m = find_builtin(*c.model);
    resolve_params(m, c.fixed, c.at);
    if (c.sweep) {
      bool known = is_fixed(m, c.sweep->name);
      for (const auto& [k, v] : m.point) known = known || k == c.sweep->name;
      if (!known) throw UsageError(fmt::format("--sweep: model '{}' has no parameter '{}'", m.name, c.sweep->name));
    }
  }
}

ParamMap model_params(const RunConfig& c, const ParamMap& overrides) {
  const BuiltinModel& m = find_builtin(*c.model);
  ParamMap fixed = c.fixed;
  ParamMap at = c.at;
  for (const auto& [k, v] : overrides) (is_fixed(m, k) ? fixed : at)[k] = v;
  return resolve_params(m, fixed, at);
}

ModelJet make_jet(const RunConfig& c, const ParamMap& overrides) {
  if (c.jet_file) return load_jet_file(*c.jet_file);
  const BuiltinModel& m = find_builtin(*c.model);
  const ParamMap all = model_params(c, overrides);
  return m.make(all).jet(point_vector(m, all));
}

}  // namespace gaussbounds::cli
