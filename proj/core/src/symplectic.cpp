#include "gaussbounds/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace gaussbounds {

Mat symplectic_form(int modes) {
  if (modes < 1) {
    throw std::invalid_argument(fmt::format("symplectic_form: invalid mode count {}", modes));
  }
  Mat omega = Mat::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

namespace {

void check_square_even(const Mat& sigma, const char* who) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0 || sigma.rows() % 2 != 0) {
    throw std::invalid_argument(
        fmt::format("{}: covariance must be square with even dimension, got {}x{}", who, sigma.rows(), sigma.cols()));
  }
}

double symmetry_residual(const Mat& sigma) { return (sigma - sigma.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

Vec symplectic_eigenvalues(const Mat& sigma) {
  check_square_even(sigma, "symplectic_eigenvalues");
  if (symmetry_residual(sigma) > kSymmetryTol * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("symplectic_eigenvalues: covariance matrix is not symmetric");
  }
  const int m = static_cast<int>(sigma.rows()) / 2;
  const Mat omega = symplectic_form(m);
  // eigenvalues of i*Omega*sigma are i times those of the real matrix Omega*sigma
  Eigen::EigenSolver<Mat> es(omega * sigma, false);
  const Eigen::VectorXcd lam = es.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  std::vector<double> moduli(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam[i].real()) > 1e-8 * scale) {
      throw std::runtime_error(
          fmt::format("symplectic_eigenvalues: complex residue {:.3e} in spectrum of i*Omega*sigma", lam[i].real()));
    }
    moduli[i] = std::abs(lam[i]);
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  Vec nu(m);
  for (int k = 0; k < m; ++k) {
    const double a = moduli[2 * k];
    const double b = moduli[2 * k + 1];
    if (std::abs(a - b) > 1e-8 * std::max(1.0, a)) {
      throw std::runtime_error(fmt::format("symplectic_eigenvalues: unpaired eigenvalues {} and {}", a, b));
    }
    nu[k] = 0.5 * (a + b);
  }
  return nu;
}

GaussianState::GaussianState(Vec d, Mat sigma) : modes_(0), d_(std::move(d)), sigma_(std::move(sigma)) {
  check_square_even(sigma_, "GaussianState");
  if (d_.size() != sigma_.rows()) {
    throw std::invalid_argument(
        fmt::format("GaussianState: first moments have length {}, covariance is {}x{}", d_.size(), sigma_.rows(),
                    sigma_.cols()));
  }
  if (!d_.allFinite() || !sigma_.allFinite()) {
    throw std::invalid_argument("GaussianState: non-finite entries");
  }
  modes_ = static_cast<int>(d_.size()) / 2;
}

GaussianState GaussianState::vacuum(int modes) {
  if (modes < 1) throw std::invalid_argument(fmt::format("vacuum: invalid mode count {}", modes));
  return GaussianState(Vec::Zero(2 * modes), Mat::Identity(2 * modes, 2 * modes));
}

GaussianState GaussianState::coherent(cplx alpha) {
  Vec d(2);
  d << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
  return GaussianState(d, Mat::Identity(2, 2));
}

GaussianState GaussianState::thermal(int modes, double n) {
  if (n < 0) throw std::invalid_argument(fmt::format("thermal: negative occupation {}", n));
  return GaussianState(Vec::Zero(2 * modes), (2 * n + 1) * Mat::Identity(2 * modes, 2 * modes));
}

StateReport validate_state(const GaussianState& state, double rank_tol) {
  StateReport rep;
  const Mat& sigma = state.sigma();
  rep.symmetry_residual = symmetry_residual(sigma);
  if (rep.symmetry_residual > kSymmetryTol * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
    rep.valid = false;
    rep.violations.push_back(fmt::format("covariance not symmetric (residual {:.3e})", rep.symmetry_residual));
    return rep;
  }
  try {
    rep.symplectic_eigenvalues = symplectic_eigenvalues(sigma);
  } catch (const std::exception& e) {
    rep.valid = false;
    rep.violations.emplace_back(e.what());
    return rep;
  }
  rep.min_symplectic_eigenvalue = rep.symplectic_eigenvalues.minCoeff();
  // positivity of sigma itself is implied by nu >= 1 only for positive sigma,
  // so check it separately
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    rep.valid = false;
    rep.violations.push_back(
        fmt::format("covariance not positive definite (min eigenvalue {:.6g})", es.eigenvalues().minCoeff()));
  }
  if (rep.min_symplectic_eigenvalue < 1.0 - kUncertaintyTol) {
    rep.valid = false;
    rep.violations.push_back(fmt::format("uncertainty principle violated: min symplectic eigenvalue {:.12g} < 1",
                                         rep.min_symplectic_eigenvalue));
  }
  for (Eigen::Index k = 0; k < rep.symplectic_eigenvalues.size(); ++k) {
    const bool pure = rep.symplectic_eigenvalues[k] - 1.0 < rank_tol;
    rep.pure_modes.push_back(pure);
    if (rep.symplectic_eigenvalues[k] > 1.0 + rank_tol) ++rep.symplectic_rank;
  }
  return rep;
}

void require_valid(const GaussianState& state) {
  const StateReport rep = validate_state(state);
  if (!rep.valid) {
    std::string msg = "invalid Gaussian state:";
    for (const auto& v : rep.violations) msg += " " + v + ";";
    throw std::invalid_argument(msg);
  }
}

GaussianState regularize(const GaussianState& state, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument(fmt::format("regularize: epsilon {} outside [0, 1)", epsilon));
  }
  if (epsilon == 0.0) return state;
  const Mat sigma = (1.0 - epsilon) * state.sigma() + epsilon * Mat::Identity(state.dim(), state.dim());
  return GaussianState(state.d(), 0.5 * (sigma + sigma.transpose()));
}

SymplecticMap::SymplecticMap(Mat S, Vec d_shift) : S_(std::move(S)), d_shift_(std::move(d_shift)) {
  if (S_.rows() != S_.cols() || S_.rows() == 0 || S_.rows() % 2 != 0) {
    throw std::invalid_argument(fmt::format("SymplecticMap: bad matrix shape {}x{}", S_.rows(), S_.cols()));
  }
  if (d_shift_.size() != S_.rows()) {
    throw std::invalid_argument("SymplecticMap: shift length does not match matrix");
  }
  const Mat omega = symplectic_form(static_cast<int>(S_.rows()) / 2);
  const double err = (S_.transpose() * omega * S_ - omega).norm();
  if (err > 1e-10) {
    throw std::invalid_argument(fmt::format("SymplecticMap: matrix is not symplectic (residual {:.3e})", err));
  }
}

SymplecticMap::SymplecticMap(Mat S) : SymplecticMap(S, Vec::Zero(S.rows())) {}

Mat rotation_matrix(double phi) {
  Mat R(2, 2);
  R << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  return R;
}

SymplecticMap SymplecticMap::rotation(double phi) { return SymplecticMap(rotation_matrix(phi)); }

SymplecticMap SymplecticMap::squeezing(double r) {
  Mat S = Mat::Zero(2, 2);
  S(0, 0) = std::exp(r);
  S(1, 1) = std::exp(-r);
  return SymplecticMap(S);
}

SymplecticMap SymplecticMap::identity(int modes) { return SymplecticMap(Mat::Identity(2 * modes, 2 * modes)); }

GaussianState apply_gaussian_map(const GaussianState& state, const SymplecticMap& map) {
  if (map.S().rows() != state.dim()) {
    throw std::invalid_argument(
        fmt::format("apply_gaussian_map: map acts on {} quadratures, state has {}", map.S().rows(), state.dim()));
  }
  Mat sigma = map.S() * state.sigma() * map.S().transpose();
  return GaussianState(map.S() * state.d() + map.d_shift(), 0.5 * (sigma + sigma.transpose()));
}

GaussianState loss_channel(const GaussianState& state, double eta, std::optional<int> mode) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument(fmt::format("loss_channel: eta {} outside [0, 1]", eta));
  }
  if (mode && (*mode < 0 || *mode >= state.modes())) {
    throw std::invalid_argument(fmt::format("loss_channel: mode {} out of range", *mode));
  }
  const int n = state.dim();
  Vec scale = Vec::Ones(n);
  for (int k = 0; k < state.modes(); ++k) {
    if (!mode || *mode == k) {
      scale[2 * k] = std::sqrt(eta);
      scale[2 * k + 1] = std::sqrt(eta);
    }
  }
  const auto X = scale.asDiagonal();
  Mat noise = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) noise(i, i) = 1.0 - scale[i] * scale[i];
  Mat sigma = X * state.sigma() * X;
  sigma += noise;
  return GaussianState(X * state.d(), sigma);
}

Mat unvec(const Vec& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw std::invalid_argument(fmt::format("unvec: length {} does not match {}x{}", v.size(), rows, cols));
  }
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

CMat unvec(const CVec& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw std::invalid_argument(fmt::format("unvec: length {} does not match {}x{}", v.size(), rows, cols));
  }
  return Eigen::Map<const CMat>(v.data(), rows, cols);
}

}  // namespace gaussbounds
