#include "gaussbounds/scalar_bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

namespace gaussbounds {

namespace {

std::string format_vector(const Vec& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += fmt::format("{}{:.4g}", i ? ", " : "", v[i]);
  return s + ")";
}

// Inverse of a symmetric positive-definite information matrix, with the null
// direction in the error message if it is singular.
Mat spd_inverse(const Mat& J, const char* who) {
  if (J.rows() != J.cols() || J.rows() == 0) {
    throw std::invalid_argument(fmt::format("{}: information matrix must be square", who));
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (J + J.transpose()));
  const Vec& lam = es.eigenvalues();
  if (lam[0] <= 1e-15 * std::max(1.0, lam.cwiseAbs().maxCoeff())) {
    throw std::domain_error(fmt::format("{}: singular model, information vanishes along direction {} (eigenvalue {:.3e})",
                                        who, format_vector(es.eigenvectors().col(0)), lam[0]));
  }
  return es.eigenvectors() * lam.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

void check_size(const WeightMatrix& W, Eigen::Index p, const char* who) {
  if (W.size() != p) throw std::invalid_argument(fmt::format("{}: weight is {}x{}, model has {} parameters", who, W.size(), W.size(), p));
}

}  // namespace

WeightMatrix::WeightMatrix(Mat W) : W_(std::move(W)) {
  if (W_.rows() != W_.cols() || W_.rows() == 0) {
    throw std::invalid_argument(fmt::format("WeightMatrix: must be square, got {}x{}", W_.rows(), W_.cols()));
  }
  if (!W_.allFinite()) throw std::invalid_argument("WeightMatrix: non-finite entries");
  if ((W_ - W_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, W_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("WeightMatrix: not symmetric");
  }
  W_ = 0.5 * (W_ + W_.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(W_);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument(
        fmt::format("WeightMatrix: not positive definite (min eigenvalue {:.3e})", es.eigenvalues().minCoeff()));
  }
  sqrt_ = es.operatorSqrt();
}

double trace_norm(const Mat& A) { return Eigen::JacobiSVD<Mat>(A).singularValues().sum(); }

double sld_crb(const Mat& JS, const WeightMatrix& W) {
  check_size(W, JS.rows(), "sld_crb");
  return (W.W() * spd_inverse(JS, "sld_crb")).trace();
}

double rld_crb(const CMat& JR, const WeightMatrix& W) {
  check_size(W, JR.rows(), "rld_crb");
  const CMat H = 0.5 * (JR + JR.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  const Vec& lam = es.eigenvalues();
  if (lam[0] <= 1e-15 * std::max(1.0, lam.cwiseAbs().maxCoeff())) {
    throw std::domain_error(fmt::format("rld_crb: singular RLD information (min eigenvalue {:.3e})", lam[0]));
  }
  const CMat inv = es.eigenvectors() * lam.cwiseInverse().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  const Mat re = inv.real();
  const Mat im = inv.imag();
  return (W.W() * re).trace() + trace_norm(W.sqrt() * im * W.sqrt());
}

double hcrb_upper(const Mat& JS, const Mat& uhlmann, const WeightMatrix& W) {
  check_size(W, JS.rows(), "hcrb_upper");
  if (uhlmann.rows() != JS.rows() || uhlmann.cols() != JS.cols()) {
    throw std::invalid_argument("hcrb_upper: Uhlmann matrix dimension mismatch");
  }
  const Mat inv = spd_inverse(JS, "hcrb_upper");
  return (W.W() * inv).trace() + trace_norm(W.sqrt() * inv * uhlmann * inv * W.sqrt());
}

IncompatibilityR incompatibility_R(const Mat& JS, const Mat& uhlmann) {
  if (uhlmann.rows() != JS.rows() || uhlmann.cols() != JS.cols()) {
    throw std::invalid_argument("incompatibility_R: Uhlmann matrix dimension mismatch");
  }
  spd_inverse(JS, "incompatibility_R");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (JS + JS.transpose()));
  const Mat isq = es.operatorInverseSqrt();
  const double raw = Eigen::JacobiSVD<Mat>(isq * uhlmann * isq).singularValues()[0];
  IncompatibilityR out;
  if (raw > 1.0 + 1e-8) {
    throw std::runtime_error(fmt::format("incompatibility_R: value {:.12g} exceeds 1; information matrices are inconsistent", raw));
  }
  out.residue = raw > 1.0 ? raw - 1.0 : 0.0;
  out.value = std::min(raw, 1.0);
  return out;
}

}  // namespace gaussbounds
