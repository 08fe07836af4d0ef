#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaussbounds/models.hpp"
#include "gaussbounds/report.hpp"

namespace gaussbounds::cli {

// Bad flags or inputs; maps to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum ExitCode : int { kOk = 0, kError = 1, kInaccurate = 2, kViolation = 3 };

struct SweepAxis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int count = 0;

  std::vector<double> values() const;
};

struct RunConfig {
  std::optional<std::string> model;
  std::optional<std::filesystem::path> jet_file;
  ParamMap fixed;
  ParamMap at;
  std::optional<SweepAxis> sweep;
  std::string weight = "identity";
  double epsilon = 1e-6;
  bool extrapolate = false;
  bool verify = false;
  bool oracle = false;
  std::string format = "table";
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> svg;
  std::optional<std::filesystem::path> dump_jet;
  int jobs = 1;

  ReportOptions report_options() const;
};

// "k=v,k=v"
ParamMap parse_assignments(const std::string& text, const std::string& flag);
// "name:start:stop:count"
SweepAxis parse_sweep(const std::string& text);
// "identity" or a JSON file holding a p x p array of arrays.
WeightMatrix load_weight(const std::string& spec, int p);

void validate(const RunConfig& config);

// Jet for the configured model or jet file. For builtin models, overrides
// replace fixed or estimated parameters by name.
ModelJet make_jet(const RunConfig& config, const ParamMap& overrides = {});

// All parameter values (fixed and estimated) of a builtin model after overrides.
ParamMap model_params(const RunConfig& config, const ParamMap& overrides = {});

}  // namespace gaussbounds::cli
