#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "cli/svg.hpp"
#include "gaussbounds/fock.hpp"
#include "gaussbounds/jet_io.hpp"

namespace gaussbounds::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError(fmt::format("cannot write '{}'", path.string()));
  f << text;
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.output) {
    write_file(*c.output, text);
  } else {
    out << text;
  }
}

std::string describe(const ParamMap& p) {
  std::string s;
  for (const auto& [k, v] : p) s += fmt::format("{}{}={}", s.empty() ? "" : ", ", k, format_number(v));
  return s;
}

int status_code(SolverStatus s) { return s == SolverStatus::optimal ? kOk : kInaccurate; }

// Check grid over the estimated parameters of each builtin model.
std::vector<ParamMap> default_grid(const std::string& model) {
  std::vector<ParamMap> out;
  if (model == "phase-loss") {
    for (double phi : {0.0, 0.4}) {
      for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9}) out.push_back({{"phi", phi}, {"eta", eta}});
    }
  } else {
    for (double are : {0.0, 0.5}) {
      for (double aim : {0.0, -0.3}) {
        for (double r : {0.0, 0.3, 0.6}) out.push_back({{"alpha_re", are}, {"alpha_im", aim}, {"r", r}});
      }
    }
  }
  return out;
}

double rel_dev(double a, double ref) { return std::abs(a - ref) / std::max(std::abs(ref), 1e-300); }

struct Tally {
  double worst = 0.0;
  int count = 0;
  std::string where;

  void add(double dev, const std::string& point) {
    ++count;
    if (dev > worst || where.empty()) {
      worst = std::max(worst, dev);
      where = point;
    }
  }
};

}  // namespace

std::vector<SweepRow> run_sweep(const RunConfig& c) {
  if (!c.sweep) throw UsageError("sweep: --sweep name:start:stop:count is required");
  const std::vector<double> xs = c.sweep->values();
  std::vector<SweepRow> rows(xs.size());
  const ReportOptions opts = c.report_options();

  auto work = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.theta = xs[i];
    try {
      const ModelJet jet = make_jet(c, {{c.sweep->name, xs[i]}});
      const BoundsReport rep = compute_bounds(jet, load_weight(c.weight, jet.params()), opts);
      row.CS = rep.CS;
      row.CR = rep.CR;
      row.CHbar = rep.CHbar;
      row.CH = rep.CH;
      row.R = rep.R;
      row.status = to_string(rep.status);
    } catch (const std::exception& e) {
      row.CS = row.CR = row.CHbar = row.CH = row.R = kNaN;
      row.status = "error";
      row.error = e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < xs.size(); i = next++) work(i);
  };
  const int n = std::min<int>(c.jobs, static_cast<int>(xs.size()));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "theta,CS,CR,CHbar,CH,R,status\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", format_number(r.theta), format_number(r.CS), format_number(r.CR),
                       format_number(r.CHbar), format_number(r.CH), format_number(r.R), r.status);
  }
  return out;
}

int cmd_bounds(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate(c);
  if (c.sweep) throw UsageError("bounds: --sweep belongs to the sweep subcommand");
  const ModelJet jet = make_jet(c);
  if (c.dump_jet) write_file(*c.dump_jet, jet_to_json(jet) + "\n");
  const BoundsReport rep = compute_bounds(jet, load_weight(c.weight, jet.params()), c.report_options());
  emit(c, out, c.format == "json" ? report_to_json(rep, jet) + "\n" : report_to_table(rep));
  if (rep.unstable) err << "warning: CH moved by more than 1e-3 relative when epsilon was halved\n";
  if (rep.status != SolverStatus::optimal) err << fmt::format("warning: solver status {}: {}\n", to_string(rep.status), rep.message);
  return status_code(rep.status);
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate(c);
  if (!c.sweep) throw UsageError("sweep: --sweep name:start:stop:count is required");
  const std::vector<SweepRow> rows = run_sweep(c);
  emit(c, out, sweep_csv(rows));

  bool failed = false, inaccurate = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].status == "error") {
      err << fmt::format("row {} ({}={}): {}\n", i, c.sweep->name, format_number(rows[i].theta), rows[i].error);
      failed = true;
    } else if (rows[i].status != "optimal") {
      inaccurate = true;
    }
  }
  const int code = failed ? kError : inaccurate ? kInaccurate : kOk;

  if (c.svg) {
    static const char* labels[] = {"CS", "CR", "CHbar", "CH"};
    static const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728", "#000000"};
    std::vector<Series> series(4);
    for (int k = 0; k < 4; ++k) {
      series[k].label = labels[k];
      series[k].color = colors[k];
    }
    for (const auto& r : rows) {
      const double ys[] = {r.CS, r.CR, r.CHbar, r.CH};
      for (int k = 0; k < 4; ++k) {
        series[k].x.push_back(r.theta);
        series[k].y.push_back(ys[k]);
      }
    }
    PlotSpec spec;
    spec.title = fmt::format("{} bounds", c.model.value_or("model"));
    spec.x_label = c.sweep->name;
    spec.y_label = "bound";
    write_file(*c.svg, render_svg(series, spec));
  }
  return code;
}

int cmd_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate(c);
  if (c.sweep) throw UsageError("check: --sweep belongs to the sweep subcommand");
  const ReportOptions opts = c.report_options();
  const bool identity_weight = c.weight == "identity";

  std::vector<ParamMap> points;
  if (c.jet_file || !c.at.empty()) {
    points.push_back({});
  } else {
    points = default_grid(*c.model);
  }

  std::ostringstream os;
  const std::string subject = c.model ? *c.model : c.jet_file->string();
  os << fmt::format("check {}: {} point(s)\n", subject, points.size());

  Tally chain;
  Tally closed[4];
  Tally oracle_js, oracle_jr, oracle_u, oracle_ch, oracle_res;
  int oracle_skipped = 0;
  std::string oracle_note;
  std::vector<std::string> violations;
  int code = kOk;

  for (const ParamMap& pt : points) {
    const std::string where = c.model ? describe(model_params(c, pt)) : subject;
    const ModelJet jet = make_jet(c, pt);
    const WeightMatrix W = load_weight(c.weight, jet.params());
    const BoundsReport rep = compute_bounds(jet, W, opts);
    if (rep.status != SolverStatus::optimal) {
      code = std::max<int>(code, kInaccurate);
      err << fmt::format("warning: solver status {} at {}\n", to_string(rep.status), where);
    }

    const ChainCheck cc = check_chain(rep, 1e-5);
    chain.add(cc.worst, where);
    for (const auto& v : cc.violations) violations.push_back(fmt::format("chain {} at {}", v, where));

    if (c.model && identity_weight) {
      const ParamMap all = model_params(c, pt);
      const double ours[] = {rep.CS, rep.CR, rep.CHbar, rep.CH};
      for (int k = 0; k < 4; ++k) {
        const auto kind = static_cast<BoundKind>(k);
        double ref = 0.0;
        try {
          ref = closed_form_bounds(*c.model, all, kind);
        } catch (const std::domain_error&) {
          continue;
        }
        // Regularized states carry an O(eps) bias unless extrapolated.
        double tol = kind == BoundKind::CH ? 1e-3 : 1e-6;
        if (rep.epsilon > 0.0 && !c.extrapolate) tol = std::max(tol, 100.0 * rep.epsilon);
        const double dev = std::abs(ours[k] - ref) / std::max(std::abs(ref), std::abs(rep.CS));
        closed[k].add(dev, where);
        if (dev > tol) {
          violations.push_back(fmt::format("closed-form {} = {} vs {} (rel {:.3e} > {:.0e}) at {}", to_string(kind),
                                           format_number(ours[k]), format_number(ref), dev, tol, where));
        }
      }
    }

    if (c.oracle) {
      const GaussianState& st = jet.state();
      if (st.modes() > 2) {
        ++oracle_skipped;
        oracle_note = "more than two modes";
        continue;
      }
      if (needs_regularization(st)) {
        ++oracle_skipped;
        oracle_note = "pure normal modes (RLD undefined in Fock space)";
        continue;
      }
      try {
        const int start = st.modes() == 1 ? 60 : 30;
        const int cutoff = fock_cutoff_for(st, start, kFockTraceTol, 10, st.modes() == 1 ? 200 : 40);
        const FockJet fj = fock_jet(jet, cutoff);
        const FockQfims q = fock_qfims(fj.state.rho, fj.drho);
        const double js_norm = rep.JS.norm();
        oracle_js.add((q.JS - rep.JS).norm() / js_norm, where);
        if (rep.JR.size() > 0) oracle_jr.add((q.JR - rep.JR).norm() / rep.JR.norm(), where);
        oracle_u.add((q.uhlmann - rep.uhlmann).norm() / js_norm, where);
        oracle_res.add(std::max(q.sld_residual, q.rld_residual), where);
        const double fh = fock_hcrb(fj.state, fj.drho, W);
        oracle_ch.add(rel_dev(fh, rep.CH), where);
      } catch (const std::logic_error& e) {
        ++oracle_skipped;
        oracle_note = e.what();
      }
    }
  }

  os << fmt::format("  chain inequalities: worst excess {:.3e} CS over {} point(s)\n", chain.worst, chain.count);
  for (int k = 0; k < 4; ++k) {
    if (closed[k].count == 0) continue;
    os << fmt::format("  closed-form {}: max rel deviation {:.3e} over {} point(s) (at {})\n",
                      to_string(static_cast<BoundKind>(k)), closed[k].worst, closed[k].count, closed[k].where);
  }
  if (c.oracle) {
    auto line = [&](const char* what, const Tally& t) {
      if (t.count > 0) os << fmt::format("  oracle {}: max deviation {:.3e} (at {})\n", what, t.worst, t.where);
    };
    line("JS", oracle_js);
    line("JR", oracle_jr);
    line("uhlmann", oracle_u);
    line("CH", oracle_ch);
    line("residual", oracle_res);
    if (oracle_skipped > 0) os << fmt::format("  oracle skipped at {} point(s): {}\n", oracle_skipped, oracle_note);
    const Tally* checks[] = {&oracle_js, &oracle_jr, &oracle_u, &oracle_ch};
    for (const Tally* t : checks) {
      if (t->count > 0 && t->worst > 1e-3) {
        violations.push_back(fmt::format("oracle deviation {:.3e} > 1e-3 at {}", t->worst, t->where));
      }
    }
  }

  for (const auto& v : violations) os << "  VIOLATION " << v << "\n";
  os << (violations.empty() ? "result: ok\n" : "result: invariant violation\n");
  emit(c, out, os.str());
  return violations.empty() ? code : kViolation;
}

}  // namespace gaussbounds::cli
