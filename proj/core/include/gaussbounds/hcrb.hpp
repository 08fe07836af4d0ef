#pragma once

#include <optional>
#include <string>

#include "gaussbounds/logderiv.hpp"
#include "gaussbounds/scalar_bounds.hpp"
#include "gaussbounds/sdp.hpp"

namespace gaussbounds {

// [[Re H, -Im H], [Im H, Re H]]; H >= 0 iff the embedding is >= 0.
Mat embed_complex_psd(const CMat& H);

enum class ProgramKind {
  holevo,  // real coefficients, complex kernel
  sld,     // real coefficients, real kernel Re(S)
  rld,     // complex coefficients, complex kernel
};

// minimize tr(W V) s.t. [[V, X^T R^dag], [R X, I_r]] >= 0 and X^T D = I_p,
// with X = P xi. Variables: upper triangle of V (row-major over a <= b), then
// xi_1..xi_p (real parts), then for rld the imaginary parts.
struct ConicProgram {
  ProgramKind kind = ProgramKind::holevo;
  int p = 0;
  int q = 0;  // coefficients per parameter
  int rank = 0;
  Mat P;      // z x q coefficient map (identity in full-vec mode)
  LmiProblem lmi;

  int v_index(int a, int b) const;
  int xi_index(int j, int t, bool imag = false) const;
};

// Generic form on an arbitrary operator basis: R is a factor of the Gram
// (or kernel) matrix restricted to the coefficient space (r x q), Dq the
// q x p derivative constraints, M0 optional q x s zero-mean constraints.
ConicProgram build_program(ProgramKind kind, const CMat& R, const Mat& Dq, const Mat& M0, const WeightMatrix& W);

ConicProgram build_hcrb_program(const ModelJet& jet, const InnerProductKernel& kernel, const WeightMatrix& W,
                                bool full_vec = false);

struct HcrbOptions {
  double epsilon = 1e-6;
  SolverOptions solver = default_solver_options();
  bool extrapolate = false;  // Richardson over eps, eps/2
  bool verify = false;       // re-solve at eps/2 and flag instability
  bool full_vec = false;
  const ConicSolver* backend = nullptr;  // defaults to InteriorPointSolver
};

struct HcrbSolution {
  double value = 0.0;
  Mat Xbar;       // z x p (real part for rld)
  Mat Xbar_imag;  // rld only
  Mat V;
  SolverStatus status = SolverStatus::solver_error;
  SolverOptions tolerances;
  double gap = 0.0;
  int iterations = 0;
  double unbiasedness_residual = 0.0;  // max |X^T D - I|
  double min_block_eigenvalue = 0.0;   // of the embedded LMI block
  double epsilon = 0.0;                // regularization used, 0 if none
  std::optional<double> error_bar;     // |C(eps) - C(eps/2)| when extrapolating or verifying
  bool unstable = false;               // verify: relative change above 1e-3
  std::string message;
};

// Pure normal modes make the kernels singular. If min nu < 1 + 1e-9 the state
// is mixed with the vacuum (derivatives of sigma scaled by 1 - eps) and, if a
// mode is still pure, eps I of classical noise is added.
struct RegularizedJet {
  ModelJet jet;
  bool applied = false;
};
RegularizedJet regularize_jet(const ModelJet& jet, double epsilon);
bool needs_regularization(const GaussianState& state);

HcrbSolution solve_hcrb(const ModelJet& jet, const WeightMatrix& W, const HcrbOptions& options = {});
HcrbSolution solve_sld_sdp(const ModelJet& jet, const WeightMatrix& W, const HcrbOptions& options = {});
HcrbSolution solve_rld_sdp(const ModelJet& jet, const WeightMatrix& W, const HcrbOptions& options = {});

// Holevo bound on a finite operator basis {B_a}: gram_ab = Tr[B_a^dag rho B_b],
// D_ak = Tr[B_a d_k rho], optional means (q x s) with constraint X^T means = 0.
HcrbSolution solve_gram_hcrb(const CMat& gram, const Mat& D, const WeightMatrix& W, const Mat& means = {},
                             const HcrbOptions& options = {});

// Hermitian factor R with R^dag R = H, eigenvalues below tol * max dropped.
CMat psd_factor(const CMat& H, double tol = kKernelTol);

}  // namespace gaussbounds
