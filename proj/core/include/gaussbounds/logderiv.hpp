#pragma once

#include <complex>
#include <string>
#include <vector>

#include "gaussbounds/quadratic.hpp"

namespace gaussbounds {

// A model evaluated at a parameter point: the state and its first derivatives.
class ModelJet {
 public:
  ModelJet(GaussianState state, std::vector<Vec> dd, std::vector<Mat> dsigma, std::vector<std::string> names = {});

  const GaussianState& state() const { return state_; }
  int params() const { return static_cast<int>(dd_.size()); }
  const std::vector<Vec>& dd() const { return dd_; }
  const std::vector<Mat>& dsigma() const { return dsigma_; }
  const std::vector<std::string>& names() const { return names_; }
  // z x p, columns (d_j d; vec(d_j sigma) / 2)
  const Mat& Dbar() const { return Dbar_; }

  // Same derivatives at a different state (used by regularization).
  ModelJet with_state(GaussianState state, double dsigma_scale = 1.0) const;

 private:
  GaussianState state_;
  std::vector<Vec> dd_;
  std::vector<Mat> dsigma_;
  std::vector<std::string> names_;
  Mat Dbar_;
};

inline constexpr double kMaxCondition = 1e12;
// S of a regularized state has condition ~1/eps^2, so the RLD path allows more.
inline constexpr double kMaxConditionRld = 1e15;

struct InformationBundle {
  Mat JS;
  CMat JR;
  Mat uhlmann;
  double cond_re = 0.0;  // condition number of Re(S)
  double cond_S = 0.0;   // condition number of S
};

struct SldObservables {
  Mat central;  // z x p, columns Re(S)^-1 Dbar_j
  std::vector<QuadraticObservable> standard;
};

struct RldObservables {
  CMat central;  // z x p, columns S^-1 Dbar_j
  std::vector<QuadraticObservable> standard;
};

// These throw std::domain_error with a regularization hint when the relevant
// kernel is singular or its condition number exceeds kMaxCondition.
SldObservables sld_observables(const ModelJet& jet);
RldObservables rld_observables(const ModelJet& jet);
Mat sld_qfim(const ModelJet& jet);
CMat rld_qfim(const ModelJet& jet);
Mat uhlmann_matrix(const ModelJet& jet);

// J^S and the Uhlmann matrix always; J^R only if S is invertible
// (otherwise JR is left empty).
InformationBundle information(const ModelJet& jet);

// Hermitian part H of the SLD commutator [L_j, L_k] = i H, standard basis.
template <typename T>
struct CommutatorTerms {
  T h0;
  Eigen::Matrix<T, Eigen::Dynamic, 1> h1;
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> h2;
};

// Closed-form SLD commutator for a pair of parameters. Templated so that
// limits can be taken in extended precision.
template <typename T>
CommutatorTerms<T> sld_commutator_terms(const Eigen::Matrix<T, Eigen::Dynamic, 1>& d,
                                        const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& sigma,
                                        const Eigen::Matrix<T, Eigen::Dynamic, 1>& ddj,
                                        const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& dsj,
                                        const Eigen::Matrix<T, Eigen::Dynamic, 1>& ddk,
                                        const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& dsk) {
  using MatT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using VecT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  const Eigen::Index n = d.size();
  MatT O = MatT::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; i += 2) {
    O(i, i + 1) = T(1);
    O(i + 1, i) = T(-1);
  }
  MatT K(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) = sigma(i, j) * sigma - O(i, j) * O;
    }
  }
  const auto Kf = K.partialPivLu();
  auto quad = [&](const MatT& ds) {
    const VecT v = Kf.solve(Eigen::Map<const VecT>(ds.data(), n * n));
    return MatT(Eigen::Map<const MatT>(v.data(), n, n));
  };
  const MatT Lj = quad(dsj);
  const MatT Lk = quad(dsk);
  const auto sf = sigma.partialPivLu();
  const VecT aj = sf.solve(ddj);  // sigma^-1 d_j d
  const VecT ak = sf.solve(ddk);

  // central-basis form
  const T c0 = T(4) * aj.dot(O * ak);
  const VecT v = T(4) * ((Lk.transpose() * (O.transpose() * aj)) - (Lj.transpose() * (O.transpose() * ak)));
  MatT Q = T(2) * (Lj * O * Lk - Lk * O * Lj);
  Q = (Q + Q.transpose()) / T(2);

  CommutatorTerms<T> out;
  out.h2 = Q;
  out.h1 = v - T(2) * (Q * d);
  out.h0 = c0 - v.dot(d) + d.dot(Q * d);
  return out;
}

// [L_j, L_k] as a standard-basis observable (anti-Hermitian; all coefficients
// purely imaginary). j == k gives the zero observable.
QuadraticObservable sld_commutator(const ModelJet& jet, int j, int k);

}  // namespace gaussbounds
