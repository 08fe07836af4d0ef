#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaussbounds/hcrb.hpp"

namespace gaussbounds {

struct ReportOptions {
  double epsilon = 1e-6;
  bool extrapolate = false;
  bool verify = false;
  SolverOptions solver = default_solver_options();
};

struct BoundsReport {
  std::vector<std::string> names;
  Mat JS;
  CMat JR;
  Mat uhlmann;
  double R = 0.0;
  double CS = 0.0;
  double CR = 0.0;
  double CHbar = 0.0;
  double CH = 0.0;
  std::optional<double> CH_error_bar;
  SolverStatus status = SolverStatus::solver_error;
  std::string message;
  double epsilon = 0.0;  // 0 when the state needed no regularization
  bool unstable = false;
  Mat X_opt;  // z x p
  double unbiasedness_residual = 0.0;
  int iterations = 0;
};

// All bounds are evaluated on the same regularized jet. With extrapolate, the
// scalar bounds (not the matrices) are Richardson-extrapolated over eps, eps/2.
BoundsReport compute_bounds(const ModelJet& jet, const WeightMatrix& W, const ReportOptions& options = {});

struct ChainCheck {
  bool ok = true;
  double worst = 0.0;  // largest violation relative to CS
  std::vector<std::string> violations;
};

// max(CS, CR) <= CH <= CHbar <= 2 CS with slack rel_slack * CS, and R in [0, 1].
ChainCheck check_chain(const BoundsReport& report, double rel_slack = 1e-5);

// Report as JSON; the "jet" member follows the jet-file schema. Numbers are
// rounded to 12 significant digits except inside "jet".
std::string report_to_json(const BoundsReport& report, const ModelJet& jet, int indent = 2);
std::string report_to_table(const BoundsReport& report);

// "%.12g" without locale influence.
std::string format_number(double x);

}  // namespace gaussbounds
