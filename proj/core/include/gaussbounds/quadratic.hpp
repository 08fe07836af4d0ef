#pragma once

#include <optional>
#include <span>

#include "gaussbounds/symplectic.hpp"

namespace gaussbounds {

enum class Basis { standard, central };

// Operator c0 + c1^T r + r^T c2 r (standard basis) or
// c0 + c1^T (r - d) + (r - d)^T c2 (r - d) around a reference state (central basis).
//
// c2 is always stored symmetric. In the standard basis the antisymmetric part of
// the supplied matrix is a multiple of the identity by the CCR and is folded into
// c0. Central observables are zero-mean by construction, c0 = -tr[c2 sigma]/2.
class QuadraticObservable {
 public:
  static QuadraticObservable standard(cplx c0, CVec c1, CMat c2);
  static QuadraticObservable central(CVec c1, CMat c2, const GaussianState& reference);

  Basis basis() const { return basis_; }
  cplx c0() const { return c0_; }
  const CVec& c1() const { return c1_; }
  const CMat& c2() const { return c2_; }
  int dim() const { return static_cast<int>(c1_.size()); }
  // reference state of a central observable
  const std::optional<GaussianState>& reference() const { return reference_; }

  // (c1; vec c2), the vector the kernel acts on. Central basis only.
  CVec bar() const;

  // Tr[rho A] for a standard-basis observable.
  cplx mean(const GaussianState& state) const;

 private:
  QuadraticObservable(Basis b, cplx c0, CVec c1, CMat c2, std::optional<GaussianState> ref)
      : basis_(b), c0_(c0), c1_(std::move(c1)), c2_(std::move(c2)), reference_(std::move(ref)) {}

  Basis basis_;
  cplx c0_;
  CVec c1_;
  CMat c2_;
  std::optional<GaussianState> reference_;
};

// Tr[rho r_{j1} ... r_{jn}] for n <= 4 with the operators in the order given.
// Indices are zero-based quadrature indices.
cplx gaussian_moment(const GaussianState& state, std::span<const int> indices);

// Tr[B^dagger rho A] for standard-basis observables with arbitrary first moments.
cplx rld_pairing_general(const QuadraticObservable& B, const QuadraticObservable& A, const GaussianState& state);

struct CentralForm {
  QuadraticObservable observable;  // zero-mean part
  cplx mean;                       // obs = observable + mean * I
};

CentralForm to_central_basis(const QuadraticObservable& obs, const GaussianState& state);
QuadraticObservable to_standard_basis(const QuadraticObservable& obs);

// Hermitian kernel of the RLD inner product on zero-mean quadratic observables,
// S = blockdiag(sigma - i Omega, (sigma - i Omega) x (sigma - i Omega)) / 2.
struct InnerProductKernel {
  int modes = 0;
  CMat S;
  Mat S_re;
  CMat R;        // rank x z, R^dagger R = S
  int rank = 0;
  double tol = 0.0;
  Mat sym_projector;  // z x (2m + m(2m+1)); maps (x1, upper-triangle of X2) to (x1; vec X2)

  int z() const { return static_cast<int>(S.rows()); }
  Mat S_im() const { return S.imag(); }
};

inline constexpr double kKernelTol = 1e-12;

InnerProductKernel build_kernel(const Mat& sigma, double tol = kKernelTol);

// Bbar^dagger S Abar = Tr[B^dagger rho A] for zero-mean observables.
cplx pairing_zero_mean(const CVec& Bbar, const CVec& Abar, const InnerProductKernel& kernel);

// Solves Re(S) Z = -Im(S) X for the commutation superoperator.
Vec commutation_superoperator(const Vec& Xbar, const InnerProductKernel& kernel);

// Projector onto symmetric quadratic parts, see InnerProductKernel::sym_projector.
Mat symmetric_projector(int modes);

}  // namespace gaussbounds
