#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gaussbounds {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

// Block-diagonal symplectic form with m copies of [[0,1],[-1,0]].
// Quadratures are ordered x1,p1,...,xm,pm throughout the library.
Mat symplectic_form(int modes);

// Symplectic eigenvalues of a covariance matrix, descending.
// Throws std::invalid_argument for a non-symmetric input and
// std::runtime_error when the spectrum of i*Omega*sigma is not properly paired.
Vec symplectic_eigenvalues(const Mat& sigma);

// First moments and covariance matrix of an m-mode Gaussian state
// (hbar = 1, vacuum covariance = identity).
//
// Construction checks shapes and finiteness only; physical validity is the
// job of validate_state(), so that invalid inputs can still be diagnosed.
class GaussianState {
 public:
  GaussianState(Vec d, Mat sigma);

  static GaussianState vacuum(int modes);
  static GaussianState coherent(cplx alpha);
  static GaussianState thermal(int modes, double n);

  int modes() const { return modes_; }
  int dim() const { return 2 * modes_; }
  const Vec& d() const { return d_; }
  const Mat& sigma() const { return sigma_; }

 private:
  int modes_;
  Vec d_;
  Mat sigma_;
};

struct StateReport {
  bool valid = true;
  double symmetry_residual = 0.0;
  double min_symplectic_eigenvalue = 0.0;
  Vec symplectic_eigenvalues;
  int symplectic_rank = 0;       // count of nu_k > 1 + rank_tol
  std::vector<bool> pure_modes;  // per normal mode, nu_k - 1 < rank_tol
  std::vector<std::string> violations;
};

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kUncertaintyTol = 1e-9;
inline constexpr double kPureModeTol = 1e-9;

StateReport validate_state(const GaussianState& state, double rank_tol = kPureModeTol);

// Throws std::invalid_argument listing the violations if the state is invalid.
void require_valid(const GaussianState& state);

// sigma -> (1 - eps) sigma + eps I, d unchanged. eps must lie in [0, 1).
GaussianState regularize(const GaussianState& state, double epsilon);

class SymplecticMap {
 public:
  SymplecticMap(Mat S, Vec d_shift);
  explicit SymplecticMap(Mat S);

  static SymplecticMap rotation(double phi);
  static SymplecticMap squeezing(double r);
  static SymplecticMap identity(int modes);

  const Mat& S() const { return S_; }
  const Vec& d_shift() const { return d_shift_; }
  int modes() const { return static_cast<int>(S_.rows()) / 2; }

 private:
  Mat S_;
  Vec d_shift_;
};

// Phase rotation matrix [[cos, sin], [-sin, cos]].
Mat rotation_matrix(double phi);

GaussianState apply_gaussian_map(const GaussianState& state, const SymplecticMap& map);

// Pure-loss channel with transmissivity eta on one mode, or on all modes
// when mode is empty.
GaussianState loss_channel(const GaussianState& state, double eta,
                           std::optional<int> mode = std::nullopt);

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vec(const Eigen::MatrixBase<Derived>& A) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> tmp = A;
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>(tmp.data(), tmp.size());
}

Mat unvec(const Vec& v, int rows, int cols);
CMat unvec(const CVec& v, int rows, int cols);

template <typename A, typename B>
Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(const Eigen::MatrixBase<A>& a,
                                                                     const Eigen::MatrixBase<B>& b) {
  Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace gaussbounds
