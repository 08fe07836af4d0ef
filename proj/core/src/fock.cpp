#include "gaussbounds/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace gaussbounds {
namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kMaxFullBasisDim = 144;

CMat ladder(int dim) {
  CMat a = CMat::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

// exp(G) for anti-Hermitian G through the spectrum of the Hermitian iG.
CMat expm_antihermitian(const CMat& G) {
  const CMat K = kI * G;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (K + K.adjoint()));
  const CVec phases = (-kI * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

int padded_dim(int cutoff) { return cutoff + std::max(20, cutoff / 2); }

CMat single_mode_rho(const FockRecipe::Mode& mode, int cutoff) {
  const int M = padded_dim(cutoff);
  CMat rho0 = CMat::Zero(M, M);
  const double n = mode.thermal_n;
  for (int k = 0; k < M; ++k) rho0(k, k) = std::pow(n, k) / std::pow(n + 1.0, k + 1);

  const CMat a1 = ladder(M + 1);
  const CMat sq = mode.squeeze_r * 0.5 * (a1.adjoint() * a1.adjoint() - a1 * a1);
  const CMat Usq = expm_antihermitian(sq.topLeftCorner(M, M));

  CVec rot(M);
  for (int k = 0; k < M; ++k) rot[k] = std::exp(-kI * (mode.angle * k));

  const CMat a = ladder(M);
  const CMat Ud = expm_antihermitian(mode.alpha * a.adjoint() - std::conj(mode.alpha) * a);

  const CMat U = Ud * rot.asDiagonal() * Usq;
  const CMat rho = (U * rho0 * U.adjoint()).topLeftCorner(cutoff, cutoff);
  return 0.5 * (rho + rho.adjoint());
}

SpCMat kron_sparse(const SpCMat& A, const SpCMat& B) {
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(A.nonZeros() * B.nonZeros()));
  for (int ca = 0; ca < A.outerSize(); ++ca) {
    for (SpCMat::InnerIterator ia(A, ca); ia; ++ia) {
      for (int cb = 0; cb < B.outerSize(); ++cb) {
        for (SpCMat::InnerIterator ib(B, cb); ib; ++ib) {
          trips.emplace_back(ia.row() * B.rows() + ib.row(), ia.col() * B.cols() + ib.col(), ia.value() * ib.value());
        }
      }
    }
  }
  SpCMat out(A.rows() * B.rows(), A.cols() * B.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SpCMat sparse_identity(int n) {
  SpCMat I(n, n);
  I.setIdentity();
  return I;
}

// Embeds a single-mode operator on mode `mode` of `modes`.
SpCMat on_mode(const SpCMat& op, int mode, int modes, int cutoff) {
  if (modes == 1) return op;
  const SpCMat I = sparse_identity(cutoff);
  return mode == 0 ? kron_sparse(op, I) : kron_sparse(I, op);
}

// x and p at dimension dim.
std::pair<CMat, CMat> single_quadratures(int dim) {
  const CMat a = ladder(dim);
  const double s = 1.0 / std::sqrt(2.0);
  return {s * (a + a.adjoint()), -kI * s * (a - a.adjoint())};
}

cplx trace_product(const SpCMat& A, const CMat& M) {
  // Tr[A M]
  cplx acc = 0.0;
  for (int c = 0; c < A.outerSize(); ++c) {
    for (SpCMat::InnerIterator it(A, c); it; ++it) acc += it.value() * M(it.col(), it.row());
  }
  return acc;
}

std::vector<SpCMat> full_hermitian_basis(int dim) {
  std::vector<SpCMat> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < dim; ++j) {
    SpCMat E(dim, dim);
    E.insert(j, j) = 1.0;
    out.push_back(std::move(E));
  }
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      SpCMat Er(dim, dim), Ei(dim, dim);
      Er.insert(j, k) = s;
      Er.insert(k, j) = s;
      Ei.insert(j, k) = -kI * s;
      Ei.insert(k, j) = kI * s;
      out.push_back(std::move(Er));
      out.push_back(std::move(Ei));
    }
  }
  return out;
}

void require_square_pair(const CMat& rho, const CMat& drho, const char* who) {
  if (rho.rows() != rho.cols() || drho.rows() != rho.rows() || drho.cols() != rho.cols()) {
    throw std::invalid_argument(fmt::format("{}: rho is {}x{} but drho is {}x{}", who, rho.rows(), rho.cols(),
                                            drho.rows(), drho.cols()));
  }
}

}  // namespace

FockRecipe FockRecipe::from_state(const GaussianState& state) {
  const int m = state.modes();
  if (m > 2) throw std::invalid_argument(fmt::format("Fock synthesis supports 1 or 2 modes, got {}", m));
  const Mat& sigma = state.sigma();
  if (m == 2) {
    const double cross = sigma.topRightCorner(2, 2).cwiseAbs().maxCoeff();
    if (cross > 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
      throw std::invalid_argument(
          fmt::format("Fock synthesis needs uncorrelated modes; inter-mode covariance {:.3e}", cross));
    }
  }
  FockRecipe recipe;
  for (int k = 0; k < m; ++k) {
    const Eigen::Matrix2d s = sigma.block(2 * k, 2 * k, 2, 2);
    const double det = s.determinant();
    if (!(det > 0.0)) throw std::invalid_argument(fmt::format("mode {}: covariance block is not positive definite", k));
    const double nu = std::sqrt(det);
    const double n = 0.5 * (nu - 1.0);
    if (n < -1e-9) throw std::invalid_argument(fmt::format("mode {}: symplectic eigenvalue {} < 1", k, nu));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (s + s.transpose()) / nu);
    const Eigen::Vector2d v = es.eigenvectors().col(1);
    FockRecipe::Mode mode;
    mode.thermal_n = std::max(n, 0.0);
    mode.squeeze_r = 0.5 * std::log(es.eigenvalues()[1]);
    mode.angle = std::atan2(-v[1], v[0]);
    mode.alpha = cplx(state.d()[2 * k], state.d()[2 * k + 1]) / std::sqrt(2.0);
    recipe.modes.push_back(mode);
  }
  return recipe;
}

FockState synthesize_fock(const FockRecipe& recipe, int cutoff, double trace_tol) {
  const int m = static_cast<int>(recipe.modes.size());
  if (m < 1 || m > 2) throw std::invalid_argument(fmt::format("Fock synthesis supports 1 or 2 modes, got {}", m));
  if (cutoff < 1) throw std::invalid_argument(fmt::format("cutoff must be positive, got {}", cutoff));
  for (const auto& mode : recipe.modes) {
    if (!(mode.thermal_n >= 0.0)) throw std::invalid_argument("thermal occupation must be >= 0");
  }
  FockState out;
  out.modes = m;
  out.cutoff = cutoff;
  out.recipe = recipe;
  out.rho = single_mode_rho(recipe.modes[0], cutoff);
  if (m == 2) out.rho = kron(out.rho, single_mode_rho(recipe.modes[1], cutoff));
  out.trace_deficit = 1.0 - out.rho.trace().real();
  if (out.trace_deficit > trace_tol) {
    throw std::domain_error(fmt::format("Fock cutoff {}: trace deficit {:.3e} exceeds {:.1e}; increase cutoff", cutoff,
                                        out.trace_deficit, trace_tol));
  }
  return out;
}

FockState synthesize_fock(const GaussianState& state, int cutoff, double trace_tol) {
  return synthesize_fock(FockRecipe::from_state(state), cutoff, trace_tol);
}

int fock_cutoff_for(const GaussianState& state, int start, double trace_tol, int step, int max_cutoff) {
  const FockRecipe recipe = FockRecipe::from_state(state);
  double deficit = 1.0;
  for (int n = start; n <= max_cutoff; n += step) {
    deficit = synthesize_fock(recipe, n, 1.0).trace_deficit;
    if (deficit <= trace_tol) return n;
  }
  throw std::domain_error(fmt::format("no cutoff up to {} reaches trace deficit {:.1e} (last {:.3e})", max_cutoff,
                                      trace_tol, deficit));
}

std::vector<SpCMat> fock_quadratures(int modes, int cutoff) {
  const auto [x, p] = single_quadratures(cutoff);
  std::vector<SpCMat> out;
  for (int k = 0; k < modes; ++k) {
    out.push_back(on_mode(x.sparseView(), k, modes, cutoff));
    out.push_back(on_mode(p.sparseView(), k, modes, cutoff));
  }
  return out;
}

std::vector<SpCMat> fock_quadratic_products(int modes, int cutoff) {
  const auto [x1, p1] = single_quadratures(cutoff + 1);
  const CMat local[2] = {x1, p1};
  const std::vector<SpCMat> r = fock_quadratures(modes, cutoff);
  const int n = 2 * modes;
  std::vector<SpCMat> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      if (a / 2 == b / 2) {
        const CMat& A = local[a % 2];
        const CMat& B = local[b % 2];
        const CMat prod = (0.5 * (A * B + B * A)).topLeftCorner(cutoff, cutoff);
        out.push_back(on_mode(prod.sparseView(), a / 2, modes, cutoff));
      } else {
        out.push_back(SpCMat(r[a] * r[b]));
      }
    }
  }
  return out;
}

FockJet fock_jet(const ModelJet& jet, int cutoff, double h, double trace_tol) {
  if (!(h > 0.0)) throw std::invalid_argument(fmt::format("finite-difference step must be positive, got {}", h));
  FockJet out{synthesize_fock(jet.state(), cutoff, trace_tol), {}};
  const Vec& d = jet.state().d();
  const Mat& sigma = jet.state().sigma();
  auto at = [&](int k, double t) {
    const GaussianState s(d + t * jet.dd()[k], sigma + t * jet.dsigma()[k]);
    return synthesize_fock(s, cutoff, 1.0).rho;
  };
  for (int k = 0; k < jet.params(); ++k) {
    const CMat drho = (-at(k, 2 * h) + 8.0 * at(k, h) - 8.0 * at(k, -h) + at(k, -2 * h)) / (12.0 * h);
    out.drho.push_back(0.5 * (drho + drho.adjoint()));
  }
  return out;
}

FockDerivative fock_sld(const CMat& rho, const CMat& drho, double tol) {
  require_square_pair(rho, drho, "fock_sld");
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho + rho.adjoint()));
  const Vec& lam = es.eigenvalues();
  const CMat& U = es.eigenvectors();
  const CMat dr = U.adjoint() * drho * U;
  CMat Le = CMat::Zero(rho.rows(), rho.cols());
  bool any = false;
  for (Eigen::Index j = 0; j < lam.size(); ++j) {
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
      const double s = lam[j] + lam[k];
      if (s > tol) {
        Le(j, k) = 2.0 * dr(j, k) / s;
        any = true;
      }
    }
  }
  if (!any) throw std::domain_error(fmt::format("fock_sld: all eigenvalue pairs below {:.1e}", tol));
  FockDerivative out;
  out.L = U * Le * U.adjoint();
  out.L = 0.5 * (out.L + out.L.adjoint());
  out.residual = (rho * out.L + out.L * rho - 2.0 * drho).norm();
  return out;
}

FockDerivative fock_rld(const CMat& rho, const CMat& drho, double tol) {
  require_square_pair(rho, drho, "fock_rld");
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho + rho.adjoint()));
  const Vec& lam = es.eigenvalues();
  const CMat& U = es.eigenvectors();
  const CMat dr = U.adjoint() * drho * U;
  CMat Le = CMat::Zero(rho.rows(), rho.cols());
  Eigen::Index kept = 0;
  for (Eigen::Index j = 0; j < lam.size(); ++j) {
    if (lam[j] > tol) {
      Le.row(j) = dr.row(j) / lam[j];
      ++kept;
    }
  }
  if (kept == 0) throw std::domain_error(fmt::format("fock_rld: rho is numerically zero (tol {:.1e})", tol));
  FockDerivative out;
  out.L = U * Le * U.adjoint();
  out.residual = (rho * out.L - drho).norm();
  return out;
}

FockQfims fock_qfims(const CMat& rho, const std::vector<CMat>& drhos, double tol) {
  const int p = static_cast<int>(drhos.size());
  std::vector<CMat> Ls, Lr;
  FockQfims out;
  for (const auto& dr : drhos) {
    FockDerivative s = fock_sld(rho, dr, tol);
    FockDerivative r = fock_rld(rho, dr, tol);
    out.sld_residual = std::max(out.sld_residual, s.residual);
    out.rld_residual = std::max(out.rld_residual, r.residual);
    Ls.push_back(std::move(s.L));
    Lr.push_back(std::move(r.L));
  }
  out.JS = Mat::Zero(p, p);
  out.uhlmann = Mat::Zero(p, p);
  out.JR = CMat::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    const CMat rl = rho * Ls[j];
    for (int k = 0; k < p; ++k) {
      const cplx t = (rl * Ls[k]).trace();
      out.JS(j, k) = t.real();
      if (j != k) out.uhlmann(j, k) = t.imag();
      out.JR(j, k) = (Lr[j].adjoint() * rho * Lr[k]).trace();
    }
  }
  out.JS = 0.5 * (out.JS + out.JS.transpose()).eval();
  out.uhlmann = 0.5 * (out.uhlmann - out.uhlmann.transpose()).eval();
  out.JR = 0.5 * (out.JR + out.JR.adjoint()).eval();
  return out;
}

double fock_hcrb(const FockState& state, const std::vector<CMat>& drhos, const WeightMatrix& W, FockBasis basis,
                 const HcrbOptions& options) {
  const CMat& rho = state.rho;
  const int dim = static_cast<int>(rho.rows());
  for (const auto& dr : drhos) require_square_pair(rho, dr, "fock_hcrb");

  std::vector<SpCMat> ops;
  if (basis == FockBasis::quadratic) {
    ops = fock_quadratures(state.modes, state.cutoff);
    for (auto& op : fock_quadratic_products(state.modes, state.cutoff)) ops.push_back(std::move(op));
  } else {
    if (dim > kMaxFullBasisDim) {
      throw std::invalid_argument(
          fmt::format("full operator basis needs dimension <= {}, got {}", kMaxFullBasisDim, dim));
    }
    ops = full_hermitian_basis(dim);
  }
  const int q = static_cast<int>(ops.size());
  const int p = static_cast<int>(drhos.size());
  const double tr = rho.trace().real();

  // Centering B_a -> B_a - c_a I with c_a = Tr[rho B_a] / Tr[rho].
  Vec c(q);
  std::vector<CMat> rho_b(q);
  for (int a = 0; a < q; ++a) {
    rho_b[a] = rho * ops[a];
    c[a] = rho_b[a].trace().real() / tr;
  }
  CMat gram(q, q);
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) gram(a, b) = trace_product(ops[a], rho_b[b]) - c[a] * c[b] * tr;
  }
  Mat D(q, p);
  for (int k = 0; k < p; ++k) {
    const cplx trd = drhos[k].trace();
    for (int a = 0; a < q; ++a) D(a, k) = (trace_product(ops[a], drhos[k]) - c[a] * trd).real();
  }

  const HcrbSolution sol = solve_gram_hcrb(0.5 * (gram + gram.adjoint()), D, W, Mat(), options);
  if (sol.status != SolverStatus::optimal && sol.status != SolverStatus::inaccurate) {
    throw std::runtime_error(fmt::format("fock_hcrb: SDP ended with status {} ({})", to_string(sol.status), sol.message));
  }
  return sol.value;
}

double fock_hcrb_converged(const ModelJet& jet, const WeightMatrix& W, int cutoff, double rel_tol,
                           const HcrbOptions& options) {
  if (cutoff <= 10) throw std::invalid_argument(fmt::format("convergence check needs cutoff > 10, got {}", cutoff));
  const FockJet hi = fock_jet(jet, cutoff);
  const double v_hi = fock_hcrb(hi.state, hi.drho, W, FockBasis::quadratic, options);
  const FockJet lo = fock_jet(jet, cutoff - 10, 1e-3, 1.0);
  const double v_lo = fock_hcrb(lo.state, lo.drho, W, FockBasis::quadratic, options);
  if (std::abs(v_hi - v_lo) > rel_tol * std::abs(v_hi)) {
    throw std::domain_error(
        fmt::format("Fock HCRB not converged: {:.10g} at N = {} vs {:.10g} at N = {}", v_hi, cutoff, v_lo, cutoff - 10));
  }
  return v_hi;
}

}  // namespace gaussbounds
