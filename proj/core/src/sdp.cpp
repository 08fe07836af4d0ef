#include "gaussbounds/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

namespace gaussbounds {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal:
      return "optimal";
    case SolverStatus::inaccurate:
      return "inaccurate";
    case SolverStatus::infeasible:
      return "infeasible";
    case SolverStatus::unbounded:
      return "unbounded";
    case SolverStatus::solver_error:
      return "solver_error";
  }
  return "unknown";
}

SolverOptions default_solver_options() {
  SolverOptions o;
  if (const char* env = std::getenv("GAUSSBOUNDS_SOLVER_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || v >= 1.0) {
      throw std::invalid_argument(fmt::format("GAUSSBOUNDS_SOLVER_TOL: expected a number in (0, 1), got '{}'", env));
    }
    o.tol_gap = v;
    o.tol_feas = v;
    o.tol_inaccurate = std::max(o.tol_inaccurate, 1e3 * v);
  }
  return o;
}

namespace {

constexpr double kInfStep = 1e30;

double inner(const Mat& A, const Mat& B) { return (A.array() * B.array()).sum(); }

Mat sym(const Mat& A) { return 0.5 * (A + A.transpose()); }

// Largest alpha with X + alpha dX >= 0, for X positive definite.
double max_step(const Mat& X, const Mat& dX) {
  Eigen::LLT<Mat> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const Mat Linv = llt.matrixL().solve(Mat::Identity(X.rows(), X.cols()));
  const Mat M = sym(Linv * dX * Linv.transpose());
  const double lmin = Eigen::SelfAdjointEigenSolver<Mat>(M, Eigen::EigenvaluesOnly).eigenvalues()[0];
  return lmin >= 0.0 ? kInfStep : -1.0 / lmin;
}

// Dual standard form: maximize b^T y  s.t.  sum_k y_k A_k + Z = C, Z >= 0,
// with the associated primal  minimize <C, X>  s.t.  <A_k, X> = b_k, X >= 0.
struct StandardForm {
  Mat C;
  std::vector<Mat> A;
  Vec b;
};

struct IpmOutcome {
  SolverStatus status;
  Vec y;
  double gap, pinf, dinf;
  int iterations;
  std::string message;
};

IpmOutcome run_ipm(const StandardForm& sf, const SolverOptions& opt) {
  const int N = static_cast<int>(sf.C.rows());
  const int K = static_cast<int>(sf.A.size());
  const double normC = sf.C.norm();
  const double normb = sf.b.norm();

  auto Aop = [&](const Mat& X) {
    Vec out(K);
    for (int k = 0; k < K; ++k) out[k] = inner(sf.A[k], X);
    return out;
  };
  auto ATop = [&](const Vec& y) {
    Mat out = Mat::Zero(N, N);
    for (int k = 0; k < K; ++k) out += y[k] * sf.A[k];
    return out;
  };

  double maxA = 0.0, ratio = 0.0;
  for (int k = 0; k < K; ++k) {
    const double nA = sf.A[k].norm();
    maxA = std::max(maxA, nA);
    ratio = std::max(ratio, (1.0 + std::abs(sf.b[k])) / (1.0 + nA));
  }
  const double sqN = std::sqrt(static_cast<double>(N));
  const double xi = std::max({10.0, sqN, N * ratio});
  const double eta = std::max({10.0, sqN, maxA, normC});
  Mat X = xi * Mat::Identity(N, N);
  Mat Z = eta * Mat::Identity(N, N);
  Vec y = Vec::Zero(K);
  const Mat I = Mat::Identity(N, N);

  IpmOutcome out{SolverStatus::solver_error, y, 0, 0, 0, 0, {}};
  double best_score = std::numeric_limits<double>::infinity();

  for (int it = 0; it <= opt.max_iterations; ++it) {
    const Vec Rp = sf.b - Aop(X);
    const Mat Rd = sym(sf.C - Z - ATop(y));
    const double pobj = inner(sf.C, X);
    const double dobj = sf.b.dot(y);
    const double xz = inner(X, Z);
    const double scale = 1.0 + std::abs(pobj) + std::abs(dobj);
    const double gap = std::max(std::abs(xz), std::abs(pobj - dobj)) / scale;
    const double pinf = Rp.norm() / (1.0 + normb);
    const double dinf = Rd.norm() / (1.0 + normC);

    const double score = std::max({gap, pinf, dinf});
    if (score < best_score) {
      best_score = score;
      out = IpmOutcome{SolverStatus::inaccurate, y, gap, pinf, dinf, it, {}};
    }
    if (gap <= opt.tol_gap && pinf <= opt.tol_feas && dinf <= opt.tol_feas) {
      out.status = SolverStatus::optimal;
      return out;
    }
    // Certificates of infeasibility for either side.
    const double trX = X.trace();
    if (trX > 1e8 * xi) {
      const Mat Xn = X / trX;
      if (Aop(Xn).norm() <= 1e-8 * (1.0 + maxA) && inner(sf.C, Xn) < -1e-8) {
        out.status = SolverStatus::infeasible;
        out.message = "primal certificate found: the LMI has no feasible point";
        out.iterations = it;
        return out;
      }
    }
    if (y.norm() > 1e10 * (1.0 + xi) && dinf <= 1e-6 && dobj > 1e10) {
      out.status = SolverStatus::unbounded;
      out.message = "objective unbounded below";
      out.iterations = it;
      return out;
    }
    if (it == opt.max_iterations) break;

    Eigen::LLT<Mat> zllt(Z);
    if (zllt.info() != Eigen::Success) {
      out.message = "dual slack lost positive definiteness";
      break;
    }
    const Mat Zinv = zllt.solve(I);
    std::vector<Mat> XAZ(K);
    for (int l = 0; l < K; ++l) XAZ[l] = X * sf.A[l] * Zinv;
    Mat M(K, K);
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l < K; ++l) M(k, l) = inner(sf.A[k], XAZ[l]);
    }
    M = sym(M);
    Eigen::LDLT<Mat> mfact(M);
    if (mfact.info() != Eigen::Success) {
      out.message = "Schur complement factorization failed";
      break;
    }
    const Vec base = Rp + Aop(X * Rd * Zinv);

    auto direction = [&](const Mat& Rc, Mat& dX, Vec& dy, Mat& dZ) {
      const Vec rhs = base - Aop(Rc * Zinv);
      dy = mfact.solve(rhs);
      dZ = sym(Rd - ATop(dy));
      dX = sym((Rc - X * dZ) * Zinv);
    };

    const double mu = xz / N;
    Mat dXa, dZa;
    Vec dya;
    direction(-X * Z, dXa, dya, dZa);
    const double apa = std::min(1.0, max_step(X, dXa));
    const double ada = std::min(1.0, max_step(Z, dZa));
    const double mu_aff = inner(X + apa * dXa, Z + ada * dZa) / N;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    Mat dX, dZ;
    Vec dy;
    direction(sigma * mu * I - X * Z - dXa * dZa, dX, dy, dZ);
    const double ap = max_step(X, dX);
    const double ad = max_step(Z, dZ);
    const double gamma = 0.9 + 0.09 * std::min({1.0, ap, ad});
    const double sp = std::min(1.0, gamma * ap);
    const double sd = std::min(1.0, gamma * ad);
    if (sp < 1e-12 && sd < 1e-12) {
      out.message = "step length collapsed";
      break;
    }
    X = sym(X + sp * dX);
    y += sd * dy;
    Z = sym(Z + sd * dZ);
  }
  if (out.status == SolverStatus::inaccurate) {
    if (!(out.gap <= opt.tol_inaccurate && out.pinf <= opt.tol_inaccurate && out.dinf <= opt.tol_inaccurate)) {
      out.status = SolverStatus::solver_error;
    }
    if (out.message.empty()) {
      out.message = fmt::format("tolerances not reached (gap {:.2e}, pinf {:.2e}, dinf {:.2e})", out.gap, out.pinf,
                                out.dinf);
    }
  }
  return out;
}

}  // namespace

SolverResult InteriorPointSolver::solve(const LmiProblem& pr, const SolverOptions& opt) const {
  const int n = pr.variables();
  const int N = pr.block_size();
  if (static_cast<int>(pr.F.size()) != n) {
    throw std::invalid_argument(fmt::format("LmiProblem: {} variables but {} LMI coefficient matrices", n, pr.F.size()));
  }
  if (pr.F0.rows() != pr.F0.cols() || N == 0) throw std::invalid_argument("LmiProblem: F0 must be square and non-empty");
  for (const auto& F : pr.F) {
    if (F.rows() != N || F.cols() != N) throw std::invalid_argument("LmiProblem: LMI coefficient size mismatch");
  }
  const bool has_eq = pr.A_eq.rows() > 0;
  if (has_eq && (pr.A_eq.cols() != n || pr.b_eq.size() != pr.A_eq.rows())) {
    throw std::invalid_argument("LmiProblem: equality constraint dimensions mismatch");
  }

  SolverResult res;
  Vec x0 = Vec::Zero(n);
  Mat Nb = Mat::Identity(n, n);
  if (has_eq) {
    Eigen::JacobiSVD<Mat> svd(pr.A_eq, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    const double tol = std::max(pr.A_eq.rows(), pr.A_eq.cols()) * 1e-13 * (s.size() ? s[0] : 0.0);
    int rank = 0;
    while (rank < s.size() && s[rank] > tol) ++rank;
    const Mat U = svd.matrixU().leftCols(rank);
    const Mat V = svd.matrixV();
    x0 = V.leftCols(rank) * (s.head(rank).cwiseInverse().asDiagonal() * (U.transpose() * pr.b_eq));
    const double eq_res = (pr.A_eq * x0 - pr.b_eq).norm();
    if (eq_res > 1e-9 * (1.0 + pr.b_eq.norm())) {
      res.status = SolverStatus::infeasible;
      res.message = fmt::format("equality constraints inconsistent (residual {:.3e})", eq_res);
      return res;
    }
    Nb = V.rightCols(n - rank);
  }
  // Directions that leave the LMI unchanged would make the Schur complement
  // singular. They are either irrelevant (no objective weight) or unbounded.
  if (Nb.cols() > 0) {
    const int K0 = static_cast<int>(Nb.cols());
    std::vector<Mat> G(K0, Mat::Zero(N, N));
    for (int k = 0; k < K0; ++k) {
      for (int i = 0; i < n; ++i) {
        if (Nb(i, k) != 0.0) G[k] += Nb(i, k) * pr.F[i];
      }
    }
    Mat gram(K0, K0);
    for (int k = 0; k < K0; ++k) {
      for (int l = k; l < K0; ++l) gram(k, l) = gram(l, k) = inner(G[k], G[l]);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    const double gmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
    std::vector<int> range, null;
    for (int k = 0; k < K0; ++k) (es.eigenvalues()[k] > 1e-18 * gmax ? range : null).push_back(k);
    if (!null.empty()) {
      const Vec cr = Nb.transpose() * pr.c;
      for (int k : null) {
        if (std::abs(es.eigenvectors().col(k).dot(cr)) > 1e-9 * (1.0 + cr.norm())) {
          res.status = SolverStatus::unbounded;
          res.message = "objective decreases along a direction that leaves the LMI unchanged";
          return res;
        }
      }
      Mat T(K0, range.size());
      for (std::size_t j = 0; j < range.size(); ++j) T.col(j) = es.eigenvectors().col(range[j]);
      Nb = Nb * T;
    }
  }
  const int K = static_cast<int>(Nb.cols());

  StandardForm sf;
  sf.C = pr.F0;
  for (int i = 0; i < n; ++i) {
    if (x0[i] != 0.0) sf.C += x0[i] * pr.F[i];
  }
  sf.C = sym(sf.C);
  sf.A.resize(K);
  for (int k = 0; k < K; ++k) {
    Mat G = Mat::Zero(N, N);
    for (int i = 0; i < n; ++i) {
      if (Nb(i, k) != 0.0) G += Nb(i, k) * pr.F[i];
    }
    sf.A[k] = -sym(G);
  }
  sf.b = -(Nb.transpose() * pr.c);

  if (K == 0) {
    res.x = x0;
    res.value = pr.c.dot(x0);
    const double lmin = Eigen::SelfAdjointEigenSolver<Mat>(sf.C, Eigen::EigenvaluesOnly).eigenvalues()[0];
    res.status = lmin >= -opt.tol_feas * (1.0 + sf.C.norm()) ? SolverStatus::optimal : SolverStatus::infeasible;
    return res;
  }

  const IpmOutcome o = run_ipm(sf, opt);
  res.status = o.status;
  res.x = x0 + Nb * o.y;
  res.value = pr.c.dot(res.x);
  res.gap = o.gap;
  res.primal_infeasibility = o.pinf;
  res.dual_infeasibility = o.dinf;
  res.iterations = o.iterations;
  res.message = o.message;
  return res;
}

}  // namespace gaussbounds
