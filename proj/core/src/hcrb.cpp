#include "gaussbounds/hcrb.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace gaussbounds {

Mat embed_complex_psd(const CMat& H) {
  const Eigen::Index n = H.rows();
  Mat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = H.real();
  out.topRightCorner(n, n) = -H.imag();
  out.bottomLeftCorner(n, n) = H.imag();
  out.bottomRightCorner(n, n) = H.real();
  return out;
}

CMat psd_factor(const CMat& H, double tol) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (H + H.adjoint()));
  const Vec& lam = es.eigenvalues();
  const double lmax = lam.maxCoeff();
  if (!(lmax > 0.0)) throw std::runtime_error("psd_factor: matrix has no positive eigenvalues");
  std::vector<int> keep;
  for (int i = 0; i < lam.size(); ++i) {
    if (lam[i] > tol * lmax) keep.push_back(i);
  }
  CMat R(keep.size(), H.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    R.row(k) = std::sqrt(lam[keep[k]]) * es.eigenvectors().col(keep[k]).adjoint();
  }
  return R;
}

namespace {

Mat real_factor(const Mat& A, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()));
  const Vec& lam = es.eigenvalues();
  const double lmax = lam.maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < lam.size(); ++i) {
    if (lam[i] > tol * lmax) keep.push_back(i);
  }
  Mat R(keep.size(), A.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    R.row(k) = std::sqrt(lam[keep[k]]) * es.eigenvectors().col(keep[k]).transpose();
  }
  return R;
}

}  // namespace

int ConicProgram::v_index(int a, int b) const {
  if (a > b) std::swap(a, b);
  // row-major upper triangle
  return a * p - a * (a - 1) / 2 + (b - a);
}

int ConicProgram::xi_index(int j, int t, bool imag) const {
  const int nv = p * (p + 1) / 2;
  return nv + (imag ? p * q : 0) + j * q + t;
}

ConicProgram build_program(ProgramKind kind, const CMat& R, const Mat& Dq, const Mat& M0, const WeightMatrix& W) {
  ConicProgram prog;
  prog.kind = kind;
  prog.p = static_cast<int>(Dq.cols());
  prog.q = static_cast<int>(Dq.rows());
  prog.rank = static_cast<int>(R.rows());
  const int p = prog.p, q = prog.q, r = prog.rank;
  if (R.cols() != q) {
    throw std::invalid_argument(fmt::format("build_program: factor has {} columns, coefficient space has {}", R.cols(), q));
  }
  if (r == 0) throw std::invalid_argument("build_program: rank-0 kernel");
  if (W.size() != p) {
    throw std::invalid_argument(fmt::format("build_program: weight is {}x{} for {} parameters", W.size(), W.size(), p));
  }
  if (M0.size() > 0 && M0.rows() != q) throw std::invalid_argument("build_program: mean constraints size mismatch");
  const bool cplx_coeffs = kind == ProgramKind::rld;
  const bool real_block = kind == ProgramKind::sld;
  const int h = p + r;
  const int nv = p * (p + 1) / 2;
  const int nvar = nv + p * q * (cplx_coeffs ? 2 : 1);

  auto embed = [&](const CMat& H) { return real_block ? Mat(H.real()) : embed_complex_psd(H); };

  LmiProblem& lmi = prog.lmi;
  lmi.c = Vec::Zero(nvar);
  CMat H0 = CMat::Zero(h, h);
  H0.bottomRightCorner(r, r).setIdentity();
  lmi.F0 = embed(H0);
  lmi.F.resize(nvar);
  for (int a = 0; a < p; ++a) {
    for (int b = a; b < p; ++b) {
      CMat H = CMat::Zero(h, h);
      H(a, b) = 1.0;
      H(b, a) = 1.0;
      const int idx = prog.v_index(a, b);
      lmi.F[idx] = embed(H);
      lmi.c[idx] = a == b ? W.W()(a, a) : 2.0 * W.W()(a, b);
    }
  }
  for (int part = 0; part < (cplx_coeffs ? 2 : 1); ++part) {
    const cplx phase = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    for (int j = 0; j < p; ++j) {
      for (int t = 0; t < q; ++t) {
        CMat H = CMat::Zero(h, h);
        const CVec col = phase * R.col(t);
        H.block(p, j, r, 1) = col;
        H.block(j, p, 1, r) = col.adjoint();
        lmi.F[prog.xi_index(j, t, part == 1)] = embed(H);
      }
    }
  }

  const int s = static_cast<int>(M0.cols());
  const int parts = cplx_coeffs ? 2 : 1;
  const int rows = parts * (p * p + p * s);
  lmi.A_eq = Mat::Zero(rows, nvar);
  lmi.b_eq = Vec::Zero(rows);
  int row = 0;
  for (int part = 0; part < parts; ++part) {
    for (int j = 0; j < p; ++j) {
      for (int k = 0; k < p; ++k, ++row) {
        for (int t = 0; t < q; ++t) lmi.A_eq(row, prog.xi_index(j, t, part == 1)) = Dq(t, k);
        lmi.b_eq[row] = (part == 0 && j == k) ? 1.0 : 0.0;
      }
      for (int c = 0; c < s; ++c, ++row) {
        for (int t = 0; t < q; ++t) lmi.A_eq(row, prog.xi_index(j, t, part == 1)) = M0(t, c);
      }
    }
  }
  prog.P = Mat::Identity(q, q);
  return prog;
}

namespace {

ConicProgram build_gaussian(ProgramKind kind, const ModelJet& jet, const InnerProductKernel& kernel,
                            const WeightMatrix& W, bool full_vec) {
  if (kernel.z() != jet.Dbar().rows()) throw std::invalid_argument("build_hcrb_program: kernel/jet dimension mismatch");
  const Mat P = full_vec ? Mat(Mat::Identity(kernel.z(), kernel.z())) : kernel.sym_projector;
  CMat R;
  if (kind == ProgramKind::sld) {
    R = (real_factor(kernel.S_re, kernel.tol) * P).cast<cplx>();
  } else {
    R = kernel.R * P.cast<cplx>();
  }
  ConicProgram prog = build_program(kind, R, P.transpose() * jet.Dbar(), Mat(), W);
  prog.P = P;
  return prog;
}

HcrbSolution solve_program(const ConicProgram& prog, const Mat& D, const HcrbOptions& opt) {
  static const InteriorPointSolver default_backend;
  const ConicSolver& backend = opt.backend ? *opt.backend : default_backend;
  const SolverResult res = backend.solve(prog.lmi, opt.solver);
  HcrbSolution sol;
  sol.status = res.status;
  sol.value = res.value;
  sol.tolerances = opt.solver;
  sol.gap = res.gap;
  sol.iterations = res.iterations;
  sol.message = res.message;
  if (res.x.size() != prog.lmi.variables()) return sol;

  const int p = prog.p, q = prog.q;
  sol.V.resize(p, p);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) sol.V(a, b) = res.x[prog.v_index(a, b)];
  }
  Mat xi(q, p);
  for (int j = 0; j < p; ++j) {
    for (int t = 0; t < q; ++t) xi(t, j) = res.x[prog.xi_index(j, t)];
  }
  sol.Xbar = prog.P * xi;
  Mat resid = sol.Xbar.transpose() * D - Mat::Identity(p, p);
  double unb = resid.cwiseAbs().maxCoeff();
  if (prog.kind == ProgramKind::rld) {
    Mat xim(q, p);
    for (int j = 0; j < p; ++j) {
      for (int t = 0; t < q; ++t) xim(t, j) = res.x[prog.xi_index(j, t, true)];
    }
    sol.Xbar_imag = prog.P * xim;
    unb = std::max(unb, (sol.Xbar_imag.transpose() * D).cwiseAbs().maxCoeff());
  }
  sol.unbiasedness_residual = unb;

  Mat block = prog.lmi.F0;
  for (int i = 0; i < prog.lmi.variables(); ++i) block += res.x[i] * prog.lmi.F[i];
  sol.min_block_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (block + block.transpose()), Eigen::EigenvaluesOnly).eigenvalues()[0];
  if (sol.status == SolverStatus::optimal && (unb > 1e-6 || sol.min_block_eigenvalue < -1e-7)) {
    sol.status = SolverStatus::inaccurate;
    sol.message = fmt::format("certificate check failed (unbiasedness {:.2e}, min eigenvalue {:.2e})", unb,
                              sol.min_block_eigenvalue);
  }
  return sol;
}

HcrbSolution solve_kind(ProgramKind kind, const ModelJet& jet, const WeightMatrix& W, const HcrbOptions& opt) {
  if (W.size() != jet.params()) {
    throw std::invalid_argument(
        fmt::format("weight matrix is {}x{} but the model has {} parameters", W.size(), W.size(), jet.params()));
  }
  auto run = [&](double eps) {
    const RegularizedJet rj = regularize_jet(jet, eps);
    const InnerProductKernel kernel = build_kernel(rj.jet.state().sigma());
    const ConicProgram prog = build_gaussian(kind, rj.jet, kernel, W, opt.full_vec);
    HcrbSolution sol = solve_program(prog, rj.jet.Dbar(), opt);
    sol.epsilon = rj.applied ? eps : 0.0;
    return sol;
  };
  HcrbSolution base = run(opt.epsilon);
  if (base.epsilon == 0.0 || !(opt.extrapolate || opt.verify)) return base;

  HcrbSolution half = run(0.5 * opt.epsilon);
  const double diff = std::abs(half.value - base.value);
  if (opt.verify) base.unstable = diff > 1e-3 * std::abs(base.value);
  if (!opt.extrapolate) {
    base.error_bar = diff;
    return base;
  }
  HcrbSolution out = std::move(half);
  out.value = 2.0 * out.value - base.value;
  out.error_bar = diff;
  out.unstable = base.unstable;
  out.epsilon = opt.epsilon;
  if (base.status != SolverStatus::optimal && out.status == SolverStatus::optimal) {
    out.status = base.status;
    out.message = base.message;
  }
  return out;
}

}  // namespace

ConicProgram build_hcrb_program(const ModelJet& jet, const InnerProductKernel& kernel, const WeightMatrix& W,
                                bool full_vec) {
  return build_gaussian(ProgramKind::holevo, jet, kernel, W, full_vec);
}

bool needs_regularization(const GaussianState& state) {
  return symplectic_eigenvalues(state.sigma()).minCoeff() < 1.0 + kPureModeTol;
}

RegularizedJet regularize_jet(const ModelJet& jet, double epsilon) {
  require_valid(jet.state());
  if (!needs_regularization(jet.state())) return {jet, false};
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument(
        fmt::format("regularization epsilon {} outside (0, 1), but the state has pure normal modes", epsilon));
  }
  GaussianState mixed = regularize(jet.state(), epsilon);
  if (needs_regularization(mixed)) {
    const Mat sigma = mixed.sigma() + epsilon * Mat::Identity(mixed.dim(), mixed.dim());
    mixed = GaussianState(mixed.d(), sigma);
  }
  return {jet.with_state(std::move(mixed), 1.0 - epsilon), true};
}

HcrbSolution solve_hcrb(const ModelJet& jet, const WeightMatrix& W, const HcrbOptions& options) {
  return solve_kind(ProgramKind::holevo, jet, W, options);
}

HcrbSolution solve_sld_sdp(const ModelJet& jet, const WeightMatrix& W, const HcrbOptions& options) {
  return solve_kind(ProgramKind::sld, jet, W, options);
}

HcrbSolution solve_rld_sdp(const ModelJet& jet, const WeightMatrix& W, const HcrbOptions& options) {
  return solve_kind(ProgramKind::rld, jet, W, options);
}

HcrbSolution solve_gram_hcrb(const CMat& gram, const Mat& D, const WeightMatrix& W, const Mat& means,
                             const HcrbOptions& options) {
  if (gram.rows() != gram.cols() || gram.rows() != D.rows()) {
    throw std::invalid_argument("solve_gram_hcrb: Gram matrix and derivative matrix sizes disagree");
  }
  const CMat R = psd_factor(gram);
  const ConicProgram prog = build_program(ProgramKind::holevo, R, D, means, W);
  return solve_program(prog, D, options);
}

}  // namespace gaussbounds
