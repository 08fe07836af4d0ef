#pragma once

#include <string>
#include <vector>

#include "gaussbounds/symplectic.hpp"

namespace gaussbounds {

// minimize c^T x  subject to  A_eq x = b_eq,  F0 + sum_i x_i F_i >= 0 (one PSD block).
struct LmiProblem {
  Vec c;
  Mat A_eq;  // may have zero rows
  Vec b_eq;
  Mat F0;
  std::vector<Mat> F;

  int variables() const { return static_cast<int>(c.size()); }
  int block_size() const { return static_cast<int>(F0.rows()); }
};

enum class SolverStatus { optimal, inaccurate, infeasible, unbounded, solver_error };

const char* to_string(SolverStatus s);

struct SolverOptions {
  double tol_gap = 1e-9;   // relative duality gap
  double tol_feas = 1e-9;  // relative primal and dual infeasibility
  double tol_inaccurate = 1e-6;
  int max_iterations = 150;
};

struct SolverResult {
  SolverStatus status = SolverStatus::solver_error;
  double value = 0.0;  // c^T x
  Vec x;
  double gap = 0.0;  // relative duality gap at exit
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::string message;
};

class ConicSolver {
 public:
  virtual ~ConicSolver() = default;
  virtual SolverResult solve(const LmiProblem& problem, const SolverOptions& options) const = 0;
};

// Dense primal-dual interior-point method (HKM direction, Mehrotra
// predictor-corrector). Equalities are eliminated through a null-space basis
// before the iteration starts. Stateless, so one instance can be shared.
class InteriorPointSolver final : public ConicSolver {
 public:
  SolverResult solve(const LmiProblem& problem, const SolverOptions& options) const override;
};

// Solver defaults, with tolerances overridden by GAUSSBOUNDS_SOLVER_TOL if set.
SolverOptions default_solver_options();

}  // namespace gaussbounds
