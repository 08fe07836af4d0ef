#pragma once

#include "gaussbounds/symplectic.hpp"

namespace gaussbounds {

// Real symmetric positive-definite weight matrix.
class WeightMatrix {
 public:
  explicit WeightMatrix(Mat W);
  static WeightMatrix identity(int p) { return WeightMatrix(Mat::Identity(p, p)); }

  const Mat& W() const { return W_; }
  const Mat& sqrt() const { return sqrt_; }
  int size() const { return static_cast<int>(W_.rows()); }

 private:
  Mat W_;
  Mat sqrt_;
};

// Sum of singular values.
double trace_norm(const Mat& A);

double sld_crb(const Mat& JS, const WeightMatrix& W);
double rld_crb(const CMat& JR, const WeightMatrix& W);
double hcrb_upper(const Mat& JS, const Mat& uhlmann, const WeightMatrix& W);

struct IncompatibilityR {
  double value = 0.0;    // clipped to [0, 1]
  double residue = 0.0;  // raw - 1 if the raw value exceeded 1, else 0
};

// Spectral radius of i (J^S)^-1 I, computed as the largest singular value of
// (J^S)^-1/2 I (J^S)^-1/2. Raw values in (1, 1 + 1e-8] are clipped, larger ones throw.
IncompatibilityR incompatibility_R(const Mat& JS, const Mat& uhlmann);

}  // namespace gaussbounds
