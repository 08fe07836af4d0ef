#include "gaussbounds/logderiv.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace gaussbounds {

ModelJet::ModelJet(GaussianState state, std::vector<Vec> dd, std::vector<Mat> dsigma, std::vector<std::string> names)
    : state_(std::move(state)), dd_(std::move(dd)), dsigma_(std::move(dsigma)), names_(std::move(names)) {
  const int n = state_.dim();
  const int p = static_cast<int>(dd_.size());
  if (p == 0) throw std::invalid_argument("ModelJet: at least one parameter required");
  if (static_cast<int>(dsigma_.size()) != p) {
    throw std::invalid_argument(
        fmt::format("ModelJet: {} first-moment derivatives but {} covariance derivatives", p, dsigma_.size()));
  }
  if (names_.empty()) {
    for (int j = 0; j < p; ++j) names_.push_back(fmt::format("theta{}", j + 1));
  } else if (static_cast<int>(names_.size()) != p) {
    throw std::invalid_argument(fmt::format("ModelJet: {} parameter names for {} parameters", names_.size(), p));
  }
  const int z = n + n * n;
  Dbar_.resize(z, p);
  for (int j = 0; j < p; ++j) {
    if (dd_[j].size() != n) {
      throw std::invalid_argument(fmt::format("ModelJet: dd[{}] has length {}, expected {}", j, dd_[j].size(), n));
    }
    if (dsigma_[j].rows() != n || dsigma_[j].cols() != n) {
      throw std::invalid_argument(fmt::format("ModelJet: dsigma[{}] is {}x{}, expected {}x{}", j, dsigma_[j].rows(),
                                              dsigma_[j].cols(), n, n));
    }
    if (!dd_[j].allFinite() || !dsigma_[j].allFinite()) {
      throw std::invalid_argument(fmt::format("ModelJet: non-finite derivative for parameter {}", j));
    }
    const double asym = (dsigma_[j] - dsigma_[j].transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) {
      throw std::invalid_argument(fmt::format("ModelJet: dsigma[{}] not symmetric (residual {:.3e})", j, asym));
    }
    dsigma_[j] = 0.5 * (dsigma_[j] + dsigma_[j].transpose());
    Dbar_.col(j).head(n) = dd_[j];
    Dbar_.col(j).tail(n * n) = 0.5 * vec(dsigma_[j]);
  }
}

ModelJet ModelJet::with_state(GaussianState state, double dsigma_scale) const {
  if (state.dim() != state_.dim()) throw std::invalid_argument("ModelJet::with_state: dimension mismatch");
  std::vector<Mat> ds = dsigma_;
  for (auto& m : ds) m *= dsigma_scale;
  return ModelJet(std::move(state), dd_, std::move(ds), names_);
}

namespace {

const char* kHint = "the state has (nearly) pure normal modes; regularize it first (e.g. --epsilon)";

template <typename M>
double condition(const M& A, const char* what, double limit = kMaxCondition) {
  Eigen::SelfAdjointEigenSolver<M> es(A, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmin <= 0.0 || lmax / lmin > limit) {
    throw std::domain_error(fmt::format("{} is singular or ill-conditioned (eigenvalues in [{:.3e}, {:.3e}]): {}", what,
                                        lmin, lmax, kHint));
  }
  return lmax / lmin;
}

struct Solved {
  InnerProductKernel kernel;
  Mat LS;  // Re(S)^-1 Dbar
  double cond_re;
};

Solved solve_sld(const ModelJet& jet) {
  Solved s{build_kernel(jet.state().sigma()), {}, 0.0};
  s.cond_re = condition(s.kernel.S_re, "Re(S)");
  s.LS = s.kernel.S_re.ldlt().solve(jet.Dbar());
  return s;
}

Mat uhlmann_from(const Solved& s) {
  Mat U = -(s.LS.transpose() * s.kernel.S_im() * s.LS);
  return 0.5 * (U - U.transpose());
}

Mat sym(const Mat& A) { return 0.5 * (A + A.transpose()); }

}  // namespace

SldObservables sld_observables(const ModelJet& jet) {
  const Solved s = solve_sld(jet);
  SldObservables out{s.LS, {}};
  const int n = jet.state().dim();
  for (int j = 0; j < jet.params(); ++j) {
    const CVec c1 = s.LS.col(j).head(n).cast<cplx>();
    const CMat c2 = unvec(Vec(s.LS.col(j).tail(n * n)), n, n).cast<cplx>();
    out.standard.push_back(to_standard_basis(QuadraticObservable::central(c1, c2, jet.state())));
  }
  return out;
}

RldObservables rld_observables(const ModelJet& jet) {
  const InnerProductKernel k = build_kernel(jet.state().sigma());
  condition(k.S, "S", kMaxConditionRld);
  RldObservables out{k.S.ldlt().solve(jet.Dbar().cast<cplx>()), {}};
  const int n = jet.state().dim();
  for (int j = 0; j < jet.params(); ++j) {
    const CVec c1 = out.central.col(j).head(n);
    const CMat c2 = unvec(CVec(out.central.col(j).tail(n * n)), n, n);
    out.standard.push_back(to_standard_basis(QuadraticObservable::central(c1, c2, jet.state())));
  }
  return out;
}

Mat sld_qfim(const ModelJet& jet) {
  const Solved s = solve_sld(jet);
  return sym(jet.Dbar().transpose() * s.LS);
}

CMat rld_qfim(const ModelJet& jet) {
  const InnerProductKernel k = build_kernel(jet.state().sigma());
  condition(k.S, "S", kMaxConditionRld);
  const CMat D = jet.Dbar().cast<cplx>();
  CMat JR = D.adjoint() * k.S.ldlt().solve(D);
  return 0.5 * (JR + JR.adjoint());
}

Mat uhlmann_matrix(const ModelJet& jet) { return uhlmann_from(solve_sld(jet)); }

InformationBundle information(const ModelJet& jet) {
  const Solved s = solve_sld(jet);
  InformationBundle b;
  b.JS = sym(jet.Dbar().transpose() * s.LS);
  b.uhlmann = uhlmann_from(s);
  b.cond_re = s.cond_re;
  try {
    b.cond_S = condition(s.kernel.S, "S", kMaxConditionRld);
    const CMat D = jet.Dbar().cast<cplx>();
    CMat JR = D.adjoint() * s.kernel.S.ldlt().solve(D);
    b.JR = 0.5 * (JR + JR.adjoint());
  } catch (const std::domain_error&) {
    b.cond_S = std::numeric_limits<double>::infinity();
  }
  return b;
}

QuadraticObservable sld_commutator(const ModelJet& jet, int j, int k) {
  const int p = jet.params();
  if (j < 0 || j >= p || k < 0 || k >= p) {
    throw std::invalid_argument(fmt::format("sld_commutator: parameter indices ({}, {}) out of range [0, {})", j, k, p));
  }
  const int n = jet.state().dim();
  if (j == k) return QuadraticObservable::standard(0.0, CVec::Zero(n), CMat::Zero(n, n));
  condition(build_kernel(jet.state().sigma()).S_re, "Re(S)");
  const auto t = sld_commutator_terms<double>(jet.state().d(), jet.state().sigma(), jet.dd()[j], jet.dsigma()[j],
                                              jet.dd()[k], jet.dsigma()[k]);
  const cplx I{0.0, 1.0};
  return QuadraticObservable::standard(I * t.h0, I * t.h1.cast<cplx>(), I * t.h2.cast<cplx>());
}

}  // namespace gaussbounds
