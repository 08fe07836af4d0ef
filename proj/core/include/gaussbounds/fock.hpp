#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "gaussbounds/hcrb.hpp"
#include "gaussbounds/logderiv.hpp"

namespace gaussbounds {

// Brute-force reference computations on truncated Fock spaces (1 or 2 modes).
// Slow; meant for tests and `check --oracle`.

using SpCMat = Eigen::SparseMatrix<cplx>;

// Per mode: thermal occupation, then squeezing so that sigma = (2n+1) diag(e^2r, e^-2r),
// then a phase rotation exp(-i angle a^dag a), then a displacement D(alpha).
// Modes are independent; multi-mode states are tensor products.
struct FockRecipe {
  struct Mode {
    double thermal_n = 0.0;
    double squeeze_r = 0.0;
    double angle = 0.0;
    cplx alpha{0.0, 0.0};
  };
  std::vector<Mode> modes;

  // Williamson decomposition per mode. Throws std::invalid_argument for
  // states with inter-mode correlations or more than two modes.
  static FockRecipe from_state(const GaussianState& state);
};

inline constexpr double kFockTraceTol = 1e-8;

struct FockState {
  int modes = 1;
  int cutoff = 0;  // per mode
  CMat rho;
  double trace_deficit = 0.0;
  FockRecipe recipe;
};

// Unitaries are built on a padded space of dimension N + max(20, N/2) and the
// result is cropped to N levels per mode. Throws std::domain_error if the
// cropped trace falls short of 1 by more than trace_tol.
FockState synthesize_fock(const FockRecipe& recipe, int cutoff, double trace_tol = kFockTraceTol);
FockState synthesize_fock(const GaussianState& state, int cutoff, double trace_tol = kFockTraceTol);

// Smallest cutoff start, start + step, ... (up to max_cutoff) whose trace
// deficit is within trace_tol; throws std::domain_error otherwise.
int fock_cutoff_for(const GaussianState& state, int start, double trace_tol = kFockTraceTol, int step = 10,
                    int max_cutoff = 200);

// Quadratures x1, p1, ... on the truncated space.
std::vector<SpCMat> fock_quadratures(int modes, int cutoff);
// Symmetrized products (r_a r_b + r_b r_a)/2, a <= b, row-major order. Products
// are formed one level above the cutoff and cropped.
std::vector<SpCMat> fock_quadratic_products(int modes, int cutoff);

// State and derivatives along the Gaussian path (d + t dd_k, sigma + t dsigma_k),
// which has the same first derivative as the model; 5-point central differences.
struct FockJet {
  FockState state;
  std::vector<CMat> drho;
};
FockJet fock_jet(const ModelJet& jet, int cutoff, double h = 1e-3, double trace_tol = kFockTraceTol);

struct FockDerivative {
  CMat L;
  double residual = 0.0;  // Frobenius norm of the defining relation's defect
};

inline constexpr double kFockEigenTol = 1e-11;

// rho L + L rho = 2 drho on eigenvalue pairs with lambda_j + lambda_k > tol.
FockDerivative fock_sld(const CMat& rho, const CMat& drho, double tol = kFockEigenTol);
// rho L = drho on the eigenvectors with lambda > tol.
FockDerivative fock_rld(const CMat& rho, const CMat& drho, double tol = kFockEigenTol);

struct FockQfims {
  Mat JS;
  CMat JR;
  Mat uhlmann;  // Im Tr[rho L_j L_k]
  double sld_residual = 0.0;
  double rld_residual = 0.0;
};
FockQfims fock_qfims(const CMat& rho, const std::vector<CMat>& drhos, double tol = kFockEigenTol);

enum class FockBasis {
  quadratic,  // centered r_a and symmetrized r_a r_b
  full,       // all Hermitian matrices; small cutoffs only
};

// Finite-dimensional Holevo bound with Gram kernel Tr[B_a rho B_b].
// Throws std::runtime_error if the SDP does not reach an optimal or
// inaccurate status.
double fock_hcrb(const FockState& state, const std::vector<CMat>& drhos, const WeightMatrix& W,
                 FockBasis basis = FockBasis::quadratic, const HcrbOptions& options = {});

// fock_hcrb at N and N - 10; throws std::domain_error naming both values if
// they differ by more than rel_tol.
double fock_hcrb_converged(const ModelJet& jet, const WeightMatrix& W, int cutoff, double rel_tol = 1e-4,
                           const HcrbOptions& options = {});

}  // namespace gaussbounds
