// Runs acceptance criteria 1-12 and prints one PASS/FAIL line per criterion.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cli/commands.hpp"
#include "gaussbounds/fock.hpp"
#include "gaussbounds/hcrb.hpp"
#include "gaussbounds/models.hpp"
#include "gaussbounds/report.hpp"
#include "random_jets.hpp"

using namespace gaussbounds;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Tracks the worst relative deviation and where it happened.
struct Worst {
  double value = 0.0;
  std::string where;

  void add(double dev, const std::string& at) {
    if (!(dev <= value)) {
      value = dev;
      where = at;
    }
  }
};

double rel(double a, double ref) { return std::abs(a - ref) / std::abs(ref); }

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

ModelJet phase_loss_jet(double are, double aim, double r, double phi, double eta) {
  return phase_loss_model(are, aim, r).jet(vec2(phi, eta));
}

ModelJet ds_jet(int modes, double n, double are, double aim, double r) {
  const ParametricModel m = modes == 1 ? disp_squeeze_single_model(n) : disp_squeeze_two_model(n);
  return m.jet(vec3(are, aim, r));
}

ParamMap phase_params(double are, double aim, double r, double phi, double eta) {
  return {{"alpha_re", are}, {"alpha_im", aim}, {"r", r}, {"phi", phi}, {"eta", eta}};
}

ParamMap ds_params(double n, double are, double aim, double r) {
  return {{"n", n}, {"alpha_re", are}, {"alpha_im", aim}, {"r", r}};
}

BoundsReport bounds(const ModelJet& jet, bool extrapolate = true) {
  ReportOptions o;
  o.extrapolate = extrapolate;
  return compute_bounds(jet, WeightMatrix::identity(jet.params()), o);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

double csch2(double x) { return 1.0 / (std::sinh(x) * std::sinh(x)); }

Outcome finish(std::initializer_list<std::pair<const char*, std::pair<Worst, double>>> items) {
  Outcome o;
  for (const auto& [label, wt] : items) {
    const auto& [w, tol] = wt;
    const bool ok = w.value <= tol;
    o.pass = o.pass && ok;
    o.detail += fmt::format("{}{} {:.2e} (tol {:.0e}{}{})", o.detail.empty() ? "" : "; ", label, w.value, tol,
                            ok ? "" : " at ", ok ? "" : w.where);
  }
  return o;
}

// 1. Coherent input, eta = 1/2.
Outcome criterion1() {
  Worst cs, ch;
  for (double a : linspace(0.1, 1.0, 10)) {
    const double are = a * std::cos(0.4), aim = a * std::sin(0.4);
    const BoundsReport rep = bounds(phase_loss_jet(are, aim, 0.0, 0.3, 0.5));
    const std::string at = fmt::format("|alpha|={:.2f}", a);
    cs.add(rel(rep.CS, 1 / (a * a)), at);
    for (double c : {rep.CH, rep.CR, rep.CHbar}) ch.add(rel(c, 2 / (a * a)), at);
  }
  return finish({{"CS", {cs, 1e-4}}, {"CH,CR,CHbar", {ch, 1e-4}}});
}

// 2. Squeezed vacuum, eta = 1/2.
Outcome criterion2() {
  Worst cs, ch;
  for (double r : linspace(0.1, 2.0, 20)) {
    const BoundsReport rep = bounds(phase_loss_jet(0.0, 0.0, r, 0.3, 0.5));
    const double t = std::tanh(r);
    const std::string at = fmt::format("r={:.2f}", r);
    cs.add(rel(rep.CS, csch2(r) + t * t / 4), at);
    ch.add(rel(rep.CH, 2 * csch2(r) + t * t / 4), at);
  }
  return finish({{"CS", {cs, 1e-6}}, {"CH", {ch, 1e-4}}});
}

// 3. Coherent input, general eta.
Outcome criterion3() {
  Worst cs, ch;
  for (double a : {0.3, 0.7}) {
    for (int i = 1; i <= 9; ++i) {
      const double eta = 0.1 * i;
      const BoundsReport rep = bounds(phase_loss_jet(a, -0.5 * a, 0.0, 0.2, eta));
      const double A = 1.25 * a * a;
      const double ref = (1 + 4 * eta * eta) / (4 * eta * A);
      const std::string at = fmt::format("a={} eta={:.1f}", a, eta);
      cs.add(rel(rep.CS, ref), at);
      ch.add(rel(rep.CH, ref + 1 / A), at);
      ch.add(rel(rep.CR, ref + 1 / A), at);
    }
  }
  return finish({{"CS", {cs, 1e-4}}, {"CH,CR", {ch, 1e-4}}});
}

// 4. Single-mode displacement and squeezing.
Outcome criterion4() {
  Worst closed, ch;
  for (double n : {0.5, 2.0}) {
    for (double r : linspace(0.0, 2.0, 9)) {
      const BoundsReport rep = bounds(ds_jet(1, n, 0.3, -0.2, r));
      const ParamMap p = ds_params(n, 0.3, -0.2, r);
      const std::string at = fmt::format("n={} r={:.2f}", n, r);
      closed.add(rel(rep.CS, closed_form_bounds("disp-squeeze-1", p, BoundKind::CS)), at);
      closed.add(rel(rep.CR, closed_form_bounds("disp-squeeze-1", p, BoundKind::CR)), at);
      closed.add(rel(rep.CHbar, closed_form_bounds("disp-squeeze-1", p, BoundKind::CHbar)), at);
      ch.add(rel(rep.CH, rep.CS + 0.5), at);
    }
  }
  return finish({{"closed forms", {closed, 1e-6}}, {"CH vs CS+1/2", {ch, 1e-3}}});
}

// 5. Two-mode displacement and squeezing.
// RLD bound of a pure-state jet as the limit eps -> 0 of the regularized bound.
double rld_eps_limit(const ModelJet& jet) {
  std::vector<double> eps, vals;
  for (int i = 0; i < 4; ++i) {
    eps.push_back(1e-3 / std::pow(2.0, i));
    vals.push_back(rld_crb(information(regularize_jet(jet, eps.back()).jet).JR, WeightMatrix::identity(jet.params())));
  }
  return neville_zero(eps, vals);
}

Outcome criterion5() {
  Worst closed, cr0, large;
  for (double n : {0.0, 0.5, 2.0}) {
    for (double r : linspace(0.0, 2.0, 9)) {
      const BoundsReport rep = bounds(ds_jet(2, n, 0.3, -0.2, r));
      const ParamMap p = ds_params(n, 0.3, -0.2, r);
      const std::string at = fmt::format("n={} r={:.2f}", n, r);
      closed.add(rel(rep.CS, closed_form_bounds("disp-squeeze-2", p, BoundKind::CS)), at);
      closed.add(rel(rep.CHbar, closed_form_bounds("disp-squeeze-2", p, BoundKind::CHbar)), at);
      if (n > 0) {
        closed.add(rel(rep.CR, closed_form_bounds("disp-squeeze-2", p, BoundKind::CR)), at);
      } else if (r > 0.0) {
        cr0.add(std::abs(rld_eps_limit(ds_jet(2, n, 0.3, -0.2, r))), at);
      }
    }
  }
  const BoundsReport rep = bounds(ds_jet(2, 0.5, 0.3, -0.2, 2.0));
  large.add(std::abs(rep.CH - rep.CS) / rep.CH, "n=0.5 r=2");
  return finish({{"closed forms", {closed, 1e-6}}, {"|CR| at n=0", {cr0, 1e-9}}, {"|CH-CS|/CH at r=2", {large, 2e-2}}});
}

// Entrywise limit eps -> 0 of f(regularized jet), for pure states.
Mat eps_limit(const ModelJet& jet, const std::function<Mat(const ModelJet&)>& f) {
  std::vector<double> eps;
  std::vector<Mat> vals;
  for (int i = 0; i < 4; ++i) {
    eps.push_back(1e-3 / std::pow(2.0, i));
    vals.push_back(f(regularize_jet(jet, eps.back()).jet));
  }
  Mat out(vals[0].rows(), vals[0].cols());
  for (Eigen::Index a = 0; a < out.rows(); ++a) {
    for (Eigen::Index b = 0; b < out.cols(); ++b) {
      std::vector<double> y;
      for (const Mat& v : vals) y.push_back(v(a, b));
      out(a, b) = neville_zero(eps, y);
    }
  }
  return out;
}

double scaled_dev(const Mat& A, const Mat& ref) {
  return (A - ref).cwiseAbs().maxCoeff() / std::max(1.0, ref.cwiseAbs().maxCoeff());
}

// 6. Uhlmann curvature against the closed forms.
Outcome criterion6() {
  Worst phase, ds1, ds2;
  for (double eta : {0.1, 0.5, 0.9}) {
    for (auto [are, aim] : {std::pair{0.3, 0.0}, {0.5, 0.4}, {1.0, -0.2}}) {
      const ModelJet jet = phase_loss_jet(are, aim, 0.0, 0.3, eta);
      const Mat U = eps_limit(jet, [](const ModelJet& j) { return uhlmann_matrix(j); });
      phase.add(scaled_dev(U, uhlmann_reference("phase-loss", phase_params(are, aim, 0.0, 0.3, eta))),
                fmt::format("coherent eta={} alpha=({},{})", eta, are, aim));
    }
    for (double r : {0.3, 1.0, 2.0}) {
      const Mat U = uhlmann_matrix(phase_loss_jet(0.0, 0.0, r, 0.3, eta));
      phase.add(scaled_dev(U, uhlmann_reference("phase-loss", phase_params(0.0, 0.0, r, 0.3, eta))),
                fmt::format("squeezed eta={} r={}", eta, r));
    }
  }
  for (double n : {0.25, 0.5, 2.0}) {
    for (double r : {0.0, 0.5, 1.2}) {
      const ParamMap p = ds_params(n, 0.3, -0.2, r);
      const std::string at = fmt::format("n={} r={}", n, r);
      ds1.add(scaled_dev(uhlmann_matrix(ds_jet(1, n, 0.3, -0.2, r)), uhlmann_reference("disp-squeeze-1", p)), at);
      ds2.add(scaled_dev(uhlmann_matrix(ds_jet(2, n, 0.3, -0.2, r)), uhlmann_reference("disp-squeeze-2", p)), at);
    }
  }
  return finish({{"phase/loss", {phase, 1e-9}}, {"single-mode", {ds1, 1e-9}}, {"two-mode", {ds2, 1e-9}}});
}

double commutator_dev(const CommutatorReference& got, const CommutatorReference& ref) {
  const double scale = std::max({1.0, std::abs(ref.h0), ref.h1.cwiseAbs().maxCoeff(), ref.h2.cwiseAbs().maxCoeff()});
  const double dev = std::max({std::abs(got.h0 - ref.h0), (got.h1 - ref.h1).cwiseAbs().maxCoeff(),
                               (got.h2 - ref.h2).cwiseAbs().maxCoeff()});
  return dev / scale;
}

// Hermitian content of [L_j, L_k] = i H, plus the size of any Hermitian part
// of the commutator itself (which must vanish).
CommutatorReference hermitian_content(const QuadraticObservable& c, double& real_part) {
  CommutatorReference h;
  h.h0 = c.c0().imag();
  h.h1 = c.c1().imag();
  h.h2 = c.c2().imag();
  real_part = std::max({real_part, std::abs(c.c0().real()), c.c1().real().cwiseAbs().maxCoeff(),
                        c.c2().real().cwiseAbs().maxCoeff()});
  return h;
}

// 7. SLD commutators against the closed forms.
Outcome criterion7() {
  Worst squeezed, coherent, ds1, ds2, real;
  double real_part = 0.0;
  for (double eta : {0.2, 0.5, 0.8}) {
    for (double phi : {0.0, 0.7}) {
      for (double r : {0.3, 1.0}) {
        const ParamMap p = phase_params(0.0, 0.0, r, phi, eta);
        const auto h = hermitian_content(sld_commutator(phase_loss_jet(0.0, 0.0, r, phi, eta), 0, 1), real_part);
        squeezed.add(commutator_dev(h, commutator_reference("phase-loss", p, 0, 1)),
                     fmt::format("eta={} phi={} r={}", eta, phi, r));
      }
      for (auto [are, aim] : {std::pair{0.3, 0.0}, {0.5, -0.4}}) {
        const ParamMap p = phase_params(are, aim, 0.0, phi, eta);
        coherent.add(commutator_dev(coherent_limit_commutator(are, aim, phi, eta),
                                    commutator_reference("phase-loss", p, 0, 1)),
                     fmt::format("eta={} phi={} alpha=({},{})", eta, phi, are, aim));
      }
    }
  }
  for (double n : {0.25, 2.0}) {
    for (double r : {0.0, 0.5}) {
      const ParamMap p = ds_params(n, 0.3, -0.2, r);
      const ModelJet j1 = ds_jet(1, n, 0.3, -0.2, r), j2 = ds_jet(2, n, 0.3, -0.2, r);
      for (auto [j, k] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
        const std::string at = fmt::format("n={} r={} ({},{})", n, r, j, k);
        ds1.add(commutator_dev(hermitian_content(sld_commutator(j1, j, k), real_part),
                               commutator_reference("disp-squeeze-1", p, j, k)),
                at);
        ds2.add(commutator_dev(hermitian_content(sld_commutator(j2, j, k), real_part),
                               commutator_reference("disp-squeeze-2", p, j, k)),
                at);
      }
    }
  }
  real.add(real_part, "");
  return finish({{"squeezed phase/loss", {squeezed, 1e-9}},
                 {"coherent phase/loss (r->0)", {coherent, 1e-9}},
                 {"single-mode", {ds1, 1e-9}},
                 {"two-mode", {ds2, 1e-9}},
                 {"anti-Hermiticity", {real, 1e-9}}});
}

WeightMatrix random_weight(testkit::Rng& rng, int p) {
  Mat A(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) A(i, j) = testkit::normal(rng);
  }
  return WeightMatrix(A * A.transpose() + 0.2 * Mat::Identity(p, p));
}

// 8 and 9 share the random jets.
struct RandomSuite {
  Worst chain, r_range, sld, rld;
  int non_optimal = 0;
  int inaccurate_sdp = 0;
};

const RandomSuite& random_suite() {
  static const RandomSuite suite = [] {
    RandomSuite s;
    testkit::Rng rng(20240611);
    for (int i = 0; i < 200; ++i) {
      const ModelJet jet = testkit::random_jet(rng);
      const WeightMatrix W = random_weight(rng, jet.params());
      const std::string at = fmt::format("jet {} (m={}, p={})", i, jet.state().modes(), jet.params());
      const BoundsReport rep = compute_bounds(jet, W);
      if (rep.status != SolverStatus::optimal) ++s.non_optimal;
      s.chain.add(check_chain(rep, 1e-5).worst, at);
      s.r_range.add(rep.R < 0.0 ? -rep.R : std::max(0.0, rep.R - 1.0), at);

      const HcrbSolution sld = solve_sld_sdp(jet, W);
      const HcrbSolution rld = solve_rld_sdp(jet, W);
      auto usable = [&](const HcrbSolution& h) {
        if (h.status == SolverStatus::inaccurate) ++s.inaccurate_sdp;
        return h.status == SolverStatus::optimal || h.status == SolverStatus::inaccurate;
      };
      s.sld.add(usable(sld) ? rel(sld.value, sld_crb(rep.JS, W)) : HUGE_VAL, at);
      s.rld.add(usable(rld) ? rel(rld.value, rld_crb(rep.JR, W)) : HUGE_VAL, at);
    }
    return s;
  }();
  return suite;
}

Outcome criterion8() {
  const RandomSuite& s = random_suite();
  Worst status;
  status.add(s.non_optimal, "");
  return finish({{"chain excess / CS", {s.chain, 1e-5}}, {"R outside [0,1]", {s.r_range, 0.0}},
                 {"non-optimal HCRB solves", {status, 0.0}}});
}

Outcome criterion9() {
  const RandomSuite& s = random_suite();
  Outcome o = finish({{"SLD SDP vs tr[W JS^-1]", {s.sld, 1e-5}}, {"RLD SDP vs RLD bound", {s.rld, 1e-5}}});
  o.detail += fmt::format("; {} of 400 solves stopped as inaccurate", s.inaccurate_sdp);
  return o;
}

// 10. Truncated Fock-space oracle.
Outcome criterion10() {
  Worst js, jr, u, ch, res;
  int max_cutoff = 0;
  for (double n : {0.25, 0.6, 1.0}) {
    for (double r : {0.0, 0.3, 0.6}) {
      for (double a : {0.0, 0.5, 1.0}) {
        const double are = a * std::cos(0.7), aim = a * std::sin(0.7);
        const ModelJet jet = ds_jet(1, n, are, aim, r);
        const BoundsReport rep = bounds(jet, false);
        const int cutoff = fock_cutoff_for(jet.state(), 60);
        max_cutoff = std::max(max_cutoff, cutoff);
        const FockJet fj = fock_jet(jet, cutoff);
        const FockQfims q = fock_qfims(fj.state.rho, fj.drho);
        const std::string at = fmt::format("n={} r={} |alpha|={} N={}", n, r, a, cutoff);
        js.add((q.JS - rep.JS).norm() / rep.JS.norm(), at);
        jr.add((q.JR - rep.JR).norm() / rep.JR.norm(), at);
        u.add((q.uhlmann - rep.uhlmann).norm() / rep.uhlmann.norm(), at);
        res.add(std::max(q.sld_residual, q.rld_residual), at);
        ch.add(rel(fock_hcrb(fj.state, fj.drho, WeightMatrix::identity(3)), rep.CH), at);
      }
    }
  }
  Outcome o = finish({{"JS", {js, 1e-4}}, {"JR", {jr, 1e-4}}, {"Uhlmann", {u, 1e-4}}, {"CH", {ch, 1e-3}},
                      {"residuals", {res, 1e-6}}});
  o.detail += fmt::format("; cutoff 60, raised to {} where the trace gate required it", max_cutoff);
  return o;
}

// 11. Kernel-level properties.
Outcome criterion11() {
  testkit::Rng rng(7);
  Worst pairing, herm, psd;
  for (int s = 0; s < 50; ++s) {
    const int modes = 1 + s % 2;
    const GaussianState st = testkit::random_state(rng, modes);
    const InnerProductKernel k = build_kernel(st.sigma());
    const double scale = k.S.norm();
    herm.add((k.S - k.S.adjoint()).norm() / scale, fmt::format("state {}", s));
    const Eigen::SelfAdjointEigenSolver<CMat> es(k.S);
    psd.add(std::max(0.0, -es.eigenvalues().minCoeff() / scale), fmt::format("state {}", s));
    for (int t = 0; t < 10; ++t) {
      const QuadraticObservable A = testkit::random_observable(rng, st.dim());
      const QuadraticObservable B = testkit::random_observable(rng, st.dim());
      const CentralForm Ac = to_central_basis(A, st), Bc = to_central_basis(B, st);
      const cplx zero_mean = pairing_zero_mean(Bc.observable.bar(), Ac.observable.bar(), k);
      const cplx via_kernel = zero_mean + std::conj(Bc.mean) * Ac.mean;
      const cplx general = rld_pairing_general(B, A, st);
      pairing.add(std::abs(via_kernel - general) / std::max(1.0, std::abs(general)), fmt::format("state {} pair {}", s, t));
    }
  }
  return finish({{"pairing", {pairing, 1e-10}}, {"S Hermiticity", {herm, 1e-12}}, {"S PSD", {psd, 1e-12}}});
}

struct Row {
  double x, CS, CR, CHbar, CH;
  std::string status;
};

std::vector<Row> sweep(const std::string& model, const ParamMap& fixed, const ParamMap& at, const std::string& axis) {
  cli::RunConfig c;
  c.model = model;
  c.fixed = fixed;
  c.at = at;
  c.sweep = cli::parse_sweep(axis);
  c.jobs = 4;
  std::ostringstream out, err;
  const int code = cli::cmd_sweep(c, out, err);
  if (code != cli::kOk) throw std::runtime_error(fmt::format("sweep {} exited with {}: {}", axis, code, err.str()));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    rows.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3]), std::stod(f[4]), f[6]});
  }
  return rows;
}

// 12. Sweep command output: curve orderings and crossings.
Outcome criterion12() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  auto chain_ok = [](const Row& r) {
    const double s = 1e-5 * r.CS;
    return std::max(r.CS, r.CR) <= r.CH + s && r.CH <= r.CHbar + s && r.CHbar <= 2 * r.CS + s && r.status == "optimal";
  };

  // Phase/loss, squeezing sweep. The upper bound tracks CH more closely than the SLD bound does.
  for (const Row& r : sweep("phase-loss", {{"alpha_re", 0.3}}, {{"eta", 0.5}}, "r:0.05:2:12")) {
    const std::string at = fmt::format("loss/r r={:.3f}", r.x);
    expect(chain_ok(r), at + ": chain");
    expect(r.CHbar - r.CH <= r.CH - r.CS, at + ": CHbar further from CH than CS");
    expect((r.CH - r.CS) / r.CH > 0.1, at + ": no SLD gap");
  }
  // Phase/loss, displacement sweep.
  {
    const auto rows = sweep("phase-loss", {{"r", 0.2}}, {{"eta", 0.5}}, "alpha_re:0.05:1.5:12");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      const std::string at = fmt::format("loss/alpha alpha={:.3f}", r.x);
      expect(chain_ok(r), at + ": chain");
      expect(r.CHbar - r.CH <= r.CH - r.CS, at + ": CHbar further from CH than CS");
      expect(r.CS < r.CR, at + ": CR below CS");
      if (i > 0) expect(r.CH < rows[i - 1].CH, at + ": CH not decreasing");
    }
  }
  // Phase/loss, transmissivity sweep. CR approximates CH at small eta, CS takes over as eta -> 1.
  {
    const auto rows = sweep("phase-loss", {{"alpha_re", 0.3}, {"r", 0.2}}, {{"phi", 0.0}}, "eta:0.05:0.95:19");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      const std::string at = fmt::format("loss/eta eta={:.2f}", r.x);
      expect(chain_ok(r), at + ": chain");
      if (r.x >= 0.1 - 1e-9 && r.x <= 0.25 + 1e-9) {
        expect(r.CR > r.CS, at + ": CR not the closest lower bound");
        expect(std::abs(r.CH - r.CR) / r.CH <= 0.15, at + ": CR more than 15% below CH");
      }
      if (r.x >= 0.65 - 1e-9) expect(r.CS > r.CR, at + ": no SLD/RLD crossing");
      if (r.x >= 0.55 - 1e-9 && i > 0 && rows[i - 1].x >= 0.55 - 1e-9) {
        expect((r.CH - r.CS) / r.CH < (rows[i - 1].CH - rows[i - 1].CS) / rows[i - 1].CH, at + ": SLD gap not closing");
      }
    }
    expect((rows.back().CH - rows.back().CS) / rows.back().CH < 0.1, "loss/eta eta=0.95: CS not within 10% of CH");
  }
  // Single-mode displacement and squeezing. CH coincides with CS + 1/2; CR joins it for n = 2.
  {
    const auto lo = sweep("disp-squeeze-1", {{"n", 0.5}}, {}, "r:0:2:9");
    const auto hi = sweep("disp-squeeze-1", {{"n", 2.0}}, {}, "r:0:2:9");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      for (const Row* r : {&lo[i], &hi[i]}) {
        const std::string at = fmt::format("ds1 r={:.2f}", r->x);
        expect(chain_ok(*r), at + ": chain");
        expect(rel(r->CH, r->CHbar) < 1e-3, at + ": CH and CHbar differ");
        if (i > 0) {
          const Row& p = r == &lo[i] ? lo[i - 1] : hi[i - 1];
          expect(r->CS > p.CS && r->CR > p.CR && r->CH > p.CH, at + ": bounds not increasing in r");
        }
      }
      expect(lo[i].CH - lo[i].CR > 4 * (hi[i].CH - hi[i].CR), fmt::format("ds1 r={:.2f}: CR gap", lo[i].x));
    }
  }
  // Two-mode displacement and squeezing. Small r: CH near CHbar, above CR. Large r: CS overtakes CR and approaches CH.
  {
    const auto lo = sweep("disp-squeeze-2", {{"n", 0.5}}, {}, "r:0:2:9");
    const auto hi = sweep("disp-squeeze-2", {{"n", 2.0}}, {}, "r:0:2:9");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      const std::string at = fmt::format("ds2 r={:.2f}", lo[i].x);
      expect(chain_ok(lo[i]) && chain_ok(hi[i]), at + ": chain");
      if (lo[i].x >= 0.5) expect(lo[i].CS > lo[i].CR, at + ": CS below CR at large r");
      const auto gap = [](const Row& r) { return std::max(r.CHbar - r.CH, r.CH - r.CR) / r.CH; };
      expect(gap(hi[i]) < 0.12, at + ": n=2 bounds not close");
      if (lo[i].x <= 1.0) expect(gap(hi[i]) < gap(lo[i]), at + ": n=2 gap not smaller than n=0.5");
    }
    expect(rel(lo[0].CH, lo[0].CHbar) < 1e-3 && lo[0].CH > lo[0].CR, "ds2 r=0: CH not at CHbar above CR");
    expect((lo.back().CH - lo.back().CS) / lo.back().CH < 2e-2, "ds2 r=2 n=0.5: CS not near CH");
    expect((hi.back().CH - hi.back().CS) / hi.back().CH < 2e-2, "ds2 r=2 n=2: CS not near CH");
  }

  Outcome o;
  o.pass = failures.empty();
  o.detail = failures.empty() ? "six sweeps, orderings and crossings as described"
                              : fmt::format("{} check(s) failed, first: {}", failures.size(), failures.front());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,  criterion4,
                                                          criterion5, criterion6, criterion7,  criterion8,
                                                          criterion9, criterion10, criterion11, criterion12};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::cout << fmt::format("criterion {}: {} ({:.1f}s) {}\n", i + 1, o.pass ? "PASS" : "FAIL", secs, o.detail)
              << std::flush;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed;
}
