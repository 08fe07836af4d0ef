#include "gaussbounds/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "gaussbounds/jet_io.hpp"
#include "json.hpp"

namespace gaussbounds {
namespace {

using nlohmann::json;

struct Scalars {
  double CS, CR, CHbar, R;
};

Scalars scalars_of(const InformationBundle& info, const WeightMatrix& W) {
  Scalars s{};
  s.CS = sld_crb(info.JS, W);
  s.CR = info.JR.size() > 0 ? rld_crb(info.JR, W) : std::numeric_limits<double>::quiet_NaN();
  s.CHbar = hcrb_upper(info.JS, info.uhlmann, W);
  s.R = incompatibility_R(info.JS, info.uhlmann).value;
  return s;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  const std::string s = fmt::format("{:.12g}", x);
  double out = x;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

json number_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

json real_matrix_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(number_json(M(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", x);
}

BoundsReport compute_bounds(const ModelJet& jet, const WeightMatrix& W, const ReportOptions& options) {
  if (W.size() != jet.params()) {
    throw std::invalid_argument(
        fmt::format("weight matrix is {}x{} but the model has {} parameters", W.size(), W.size(), jet.params()));
  }
  HcrbOptions hopt;
  hopt.epsilon = options.epsilon;
  hopt.extrapolate = options.extrapolate;
  hopt.verify = options.verify;
  hopt.solver = options.solver;

  const RegularizedJet base = regularize_jet(jet, options.epsilon);
  const InformationBundle info = information(base.jet);
  Scalars s = scalars_of(info, W);
  if (base.applied && options.extrapolate) {
    const Scalars half = scalars_of(information(regularize_jet(jet, 0.5 * options.epsilon).jet), W);
    s.CS = 2.0 * half.CS - s.CS;
    s.CR = 2.0 * half.CR - s.CR;
    s.CHbar = 2.0 * half.CHbar - s.CHbar;
    s.R = std::clamp(2.0 * half.R - s.R, 0.0, 1.0);
  }

  BoundsReport rep;
  rep.names = jet.names();
  rep.JS = info.JS;
  rep.JR = info.JR;
  rep.uhlmann = info.uhlmann;
  rep.CS = s.CS;
  rep.CR = s.CR;
  rep.CHbar = s.CHbar;
  rep.R = s.R;
  rep.epsilon = base.applied ? options.epsilon : 0.0;
  if (info.JR.size() == 0) rep.message = "RLD information unavailable: S is singular or ill-conditioned";

  const HcrbSolution sol = solve_hcrb(jet, W, hopt);
  rep.status = sol.status;
  rep.CH = sol.value;
  rep.CH_error_bar = sol.error_bar;
  rep.unstable = sol.unstable;
  rep.X_opt = sol.Xbar;
  rep.unbiasedness_residual = sol.unbiasedness_residual;
  rep.iterations = sol.iterations;
  if (!sol.message.empty()) rep.message += (rep.message.empty() ? "" : "; ") + sol.message;
  if (sol.status != SolverStatus::optimal && sol.status != SolverStatus::inaccurate) {
    rep.CH = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

ChainCheck check_chain(const BoundsReport& r, double rel_slack) {
  ChainCheck out;
  const double slack = rel_slack * std::abs(r.CS);
  auto le = [&](double lhs, double rhs, const char* what) {
    if (std::isnan(lhs) || std::isnan(rhs)) return;
    const double excess = lhs - rhs;
    if (excess > slack) {
      out.ok = false;
      out.violations.push_back(
          fmt::format("{}: {} > {} by {:.3e}", what, format_number(lhs), format_number(rhs), excess));
    }
    out.worst = std::max(out.worst, excess / std::abs(r.CS));
  };
  le(r.CS, r.CH, "CS <= CH");
  le(r.CR, r.CH, "CR <= CH");
  le(r.CH, r.CHbar, "CH <= CHbar");
  le(r.CHbar, 2.0 * r.CS, "CHbar <= 2 CS");
  if (!(r.R >= 0.0 && r.R <= 1.0)) {
    out.ok = false;
    out.violations.push_back(fmt::format("R = {} outside [0, 1]", format_number(r.R)));
  }
  return out;
}

std::string report_to_json(const BoundsReport& r, const ModelJet& jet, int indent) {
  json root;
  root["params"] = r.names;
  root["JS"] = real_matrix_json(r.JS);
  if (r.JR.size() > 0) {
    root["JR"] = {{"re", real_matrix_json(r.JR.real())}, {"im", real_matrix_json(r.JR.imag())}};
  } else {
    root["JR"] = nullptr;
  }
  root["uhlmann"] = real_matrix_json(r.uhlmann);
  root["R"] = number_json(r.R);
  root["CS"] = number_json(r.CS);
  root["CR"] = number_json(r.CR);
  root["CHbar"] = number_json(r.CHbar);
  root["CH"] = number_json(r.CH);
  root["CH_error_bar"] = r.CH_error_bar ? number_json(*r.CH_error_bar) : json(nullptr);
  root["status"] = to_string(r.status);
  root["epsilon"] = r.epsilon;
  root["unstable"] = r.unstable;
  root["iterations"] = r.iterations;
  root["unbiasedness_residual"] = number_json(r.unbiasedness_residual);
  root["X_opt"] = real_matrix_json(r.X_opt);
  if (!r.message.empty()) root["message"] = r.message;
  root["jet"] = json::parse(jet_to_json(jet, -1));
  return root.dump(indent);
}

std::string report_to_table(const BoundsReport& r) {
  std::ostringstream os;
  auto line = [&](const std::string& k, const std::string& v) { os << fmt::format("{:<10} {}\n", k, v); };
  auto matrix = [&](const std::string& k, const Mat& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      std::string row;
      for (Eigen::Index j = 0; j < M.cols(); ++j) row += fmt::format("{:>20}", format_number(M(i, j)));
      line(i == 0 ? k : "", row);
    }
  };
  std::string names;
  for (const auto& n : r.names) names += (names.empty() ? "" : ", ") + n;
  line("params", names);
  matrix("JS", r.JS);
  if (r.JR.size() > 0) {
    matrix("Re JR", r.JR.real());
    matrix("Im JR", r.JR.imag());
  } else {
    line("JR", "unavailable");
  }
  matrix("uhlmann", r.uhlmann);
  line("R", format_number(r.R));
  line("CS", format_number(r.CS));
  line("CR", format_number(r.CR));
  line("CHbar", format_number(r.CHbar));
  line("CH", format_number(r.CH) + (r.CH_error_bar ? " +/- " + format_number(*r.CH_error_bar) : ""));
  line("status", std::string(to_string(r.status)) + (r.unstable ? " (unstable under eps/2)" : ""));
  line("epsilon", format_number(r.epsilon));
  if (!r.message.empty()) line("message", r.message);
  return os.str();
}

}  // namespace gaussbounds
