#include "gaussbounds/quadratic.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace gaussbounds {

namespace {

constexpr cplx I{0.0, 1.0};

void check_dims(const CVec& c1, const CMat& c2) {
  if (c1.size() == 0 || c1.size() % 2 != 0 || c2.rows() != c1.size() || c2.cols() != c1.size()) {
    throw std::invalid_argument(fmt::format("QuadraticObservable: inconsistent dimensions c1[{}], c2[{}x{}]",
                                            c1.size(), c2.rows(), c2.cols()));
  }
}

}  // namespace

QuadraticObservable QuadraticObservable::standard(cplx c0, CVec c1, CMat c2) {
  check_dims(c1, c2);
  const CMat anti = 0.5 * (c2 - c2.transpose());
  const Mat omega = symplectic_form(static_cast<int>(c1.size()) / 2);
  // sum_jk A_jk r_j r_k = (i/2) sum_jk A_jk Omega_jk for antisymmetric A
  c0 += 0.5 * I * (anti.array() * omega.cast<cplx>().array()).sum();
  CMat sym = 0.5 * (c2 + c2.transpose());
  return QuadraticObservable(Basis::standard, c0, std::move(c1), std::move(sym), std::nullopt);
}

QuadraticObservable QuadraticObservable::central(CVec c1, CMat c2, const GaussianState& reference) {
  check_dims(c1, c2);
  if (c1.size() != reference.dim()) {
    throw std::invalid_argument("QuadraticObservable::central: reference state dimension mismatch");
  }
  // in the central basis the antisymmetric part is a constant and is removed
  // together with the mean
  CMat sym = 0.5 * (c2 + c2.transpose());
  const cplx c0 = -0.5 * (sym * reference.sigma().cast<cplx>()).trace();
  return QuadraticObservable(Basis::central, c0, std::move(c1), std::move(sym), reference);
}

CVec QuadraticObservable::bar() const {
  if (basis_ != Basis::central) {
    throw std::invalid_argument("QuadraticObservable::bar: defined for central-basis observables only");
  }
  const int n = dim();
  CVec out(n + n * n);
  out.head(n) = c1_;
  out.tail(n * n) = vec(c2_);
  return out;
}

cplx QuadraticObservable::mean(const GaussianState& state) const {
  if (state.dim() != dim()) throw std::invalid_argument("QuadraticObservable::mean: dimension mismatch");
  if (basis_ == Basis::central) return 0.0;
  const CVec d = state.d().cast<cplx>();
  return c0_ + (c1_.transpose() * d)(0, 0) + (d.transpose() * c2_ * d)(0, 0) +
         0.5 * (c2_ * state.sigma().cast<cplx>()).trace();
}

cplx gaussian_moment(const GaussianState& state, std::span<const int> idx) {
  const int n = state.dim();
  if (idx.size() > 4) {
    throw std::invalid_argument(fmt::format("gaussian_moment: {} operators exceed the closed-form range", idx.size()));
  }
  for (int i : idx) {
    if (i < 0 || i >= n) throw std::invalid_argument(fmt::format("gaussian_moment: index {} out of range", i));
  }
  const Vec& d = state.d();
  const Mat& s = state.sigma();
  const Mat O = symplectic_form(state.modes());
  auto g = [&](int a, int b) { return cplx(s(a, b), O(a, b)); };  // sigma + i Omega
  switch (idx.size()) {
    case 0:
      return 1.0;
    case 1:
      return d[idx[0]];
    case 2: {
      const int j = idx[0], k = idx[1];
      return d[j] * d[k] + 0.5 * g(j, k);
    }
    case 3: {
      const int j = idx[0], k = idx[1], m = idx[2];
      return d[j] * d[k] * d[m] + 0.5 * (g(j, k) * d[m] + g(k, m) * d[j] + g(j, m) * d[k]);
    }
    default: {
      const int j = idx[0], k = idx[1], p = idx[2], q = idx[3];
      cplx t = d[j] * d[k] * d[p] * d[q];
      t += 0.5 * (d[p] * d[q] * s(j, k) + d[k] * d[q] * s(j, p) + d[j] * d[q] * s(k, p) + d[k] * d[p] * s(j, q) +
                  d[j] * d[p] * s(k, q) + d[j] * d[k] * s(p, q));
      t += 0.5 * I *
           (O(j, k) * (d[p] * d[q] + s(p, q) / 2) + O(j, p) * (d[k] * d[q] + s(k, q) / 2) +
            O(k, p) * (d[j] * d[q] + s(j, q) / 2) + O(j, q) * (d[k] * d[p] + s(k, p) / 2) +
            O(k, q) * (d[j] * d[p] + s(j, p) / 2) + O(p, q) * (d[j] * d[k] + s(j, k) / 2));
      t += -0.25 * (O(j, q) * O(k, p) + O(j, p) * O(k, q) + O(j, k) * O(p, q));
      t += 0.25 * (s(j, q) * s(k, p) + s(j, p) * s(k, q) + s(j, k) * s(p, q));
      return t;
    }
  }
}

cplx rld_pairing_general(const QuadraticObservable& B, const QuadraticObservable& A, const GaussianState& state) {
  if (A.basis() != Basis::standard || B.basis() != Basis::standard) {
    throw std::invalid_argument("rld_pairing_general: observables must be in the standard basis");
  }
  if (A.dim() != state.dim() || B.dim() != state.dim()) {
    throw std::invalid_argument("rld_pairing_general: dimension mismatch");
  }
  const CVec d = state.d().cast<cplx>();
  const CMat s = state.sigma().cast<cplx>();
  const CMat O = symplectic_form(state.modes()).cast<cplx>();
  const CMat OT = O.transpose();
  const CMat sm = s - I * O;
  const CMat sp = s + I * O;

  const cplx a0 = A.c0();
  const CVec& a1 = A.c1();
  const CMat& a2 = A.c2();
  const cplx b0c = std::conj(B.c0());
  const CVec b1c = B.c1().conjugate();
  const CMat bs = B.c2().conjugate();
  const CMat bd = B.c2().adjoint();

  auto tr = [](const CMat& M) { return M.trace(); };
  auto q = [&](const CMat& M) { return (d.transpose() * M * d)(0, 0); };  // d^T M d
  auto dot = [](const CVec& u, const CVec& v) { return (u.transpose() * v)(0, 0); };

  const cplx b1d = dot(b1c, d);
  const cplx da1 = dot(d, a1);
  const cplx da2d = q(a2);
  const cplx dbsd = q(bs);

  cplx t = b0c * a0 + b0c * da1 + b0c * da2d + 0.5 * b0c * tr(a2 * sm);
  t += b1d * a0 + b1d * da1 + 0.5 * dot(b1c, sm * a1);
  t += b1d * da2d + 0.5 * b1d * tr(a2 * sm) + 0.5 * dot(d, a2 * sp * b1c);
  t += 0.5 * dot(b1c, sm * a2 * d) + a0 * dbsd + 0.5 * a0 * tr(bs * sm);
  t += dbsd * da1 + 0.5 * dot(a1, sp * bs * d);
  t += 0.5 * tr(bs * sm) * da1 + 0.5 * dot(d, bs * sm * a1);
  t += dbsd * da2d + 0.5 * dbsd * tr(a2 * s);
  t += 0.5 * q(bd * s * a2) + 0.5 * q(a2 * s * bs) + 0.5 * q(bs * s * a2);
  t += 0.5 * q(bs * s * a2.transpose()) + 0.5 * tr(bs * s) * da2d;
  t += 0.5 * I * (dbsd * tr(a2 * OT) + 0.5 * tr(bs * s) * tr(a2 * OT));
  t += 0.5 * I * (q(bd * OT * a2) + 0.5 * tr(a2 * s * bd * OT));
  t += 0.5 * I * (q(a2 * O * bs) + 0.5 * tr(bs * s * a2 * O));
  t += 0.5 * I * (q(bs * OT * a2) + 0.5 * tr(bs * OT * a2 * s));
  t += 0.5 * I * (q(a2 * O * bd) + 0.5 * tr(bd * s * a2 * O));
  t += 0.5 * I * (tr(bs * OT) * da2d + 0.5 * tr(bs * OT) * tr(a2 * s));
  t += 0.25 * tr(bs * O * a2 * O) + 0.25 * tr(bs * O * a2.transpose() * O) + 0.25 * tr(bs * O) * tr(a2 * OT);
  t += 0.25 * tr(bs * s * a2 * s) + 0.25 * tr(bs * s * a2.transpose() * s) + 0.25 * tr(bs * s) * tr(a2 * s);
  return t;
}

CentralForm to_central_basis(const QuadraticObservable& obs, const GaussianState& state) {
  if (obs.basis() != Basis::standard) {
    throw std::invalid_argument("to_central_basis: input must be in the standard basis");
  }
  if (obs.dim() != state.dim()) throw std::invalid_argument("to_central_basis: dimension mismatch");
  const CVec d = state.d().cast<cplx>();
  const CMat& a2 = obs.c2();
  CVec A1 = obs.c1() + (a2 + a2.transpose()) * d;
  auto central = QuadraticObservable::central(std::move(A1), a2, state);
  return CentralForm{std::move(central), obs.mean(state)};
}

QuadraticObservable to_standard_basis(const QuadraticObservable& obs) {
  if (obs.basis() != Basis::central) {
    throw std::invalid_argument("to_standard_basis: input must be in the central basis");
  }
  const GaussianState& ref = *obs.reference();
  const CVec d = ref.d().cast<cplx>();
  const CMat& A2 = obs.c2();
  const CVec a1 = obs.c1() - 2.0 * A2 * d;
  const cplx a0 = obs.c0() - (obs.c1().transpose() * d)(0, 0) + (d.transpose() * A2 * d)(0, 0);
  return QuadraticObservable::standard(a0, a1, A2);
}

Mat symmetric_projector(int modes) {
  const int n = 2 * modes;
  const int z = n + n * n;
  const int cols = n + n * (n + 1) / 2;
  Mat P = Mat::Zero(z, cols);
  for (int i = 0; i < n; ++i) P(i, i) = 1.0;
  int c = n;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j <= k; ++j) {
      P(n + j + k * n, c) = 1.0;
      P(n + k + j * n, c) = 1.0;
      ++c;
    }
  }
  return P;
}

InnerProductKernel build_kernel(const Mat& sigma, double tol) {
  const int n = static_cast<int>(sigma.rows());
  require_valid(GaussianState(Vec::Zero(n), sigma));
  const int m = n / 2;
  const CMat A = sigma.cast<cplx>() - I * symplectic_form(m).cast<cplx>();
  InnerProductKernel k;
  k.modes = m;
  k.tol = tol;
  const int z = n + n * n;
  k.S = CMat::Zero(z, z);
  k.S.topLeftCorner(n, n) = 0.5 * A;
  k.S.bottomRightCorner(n * n, n * n) = 0.5 * kron(A, A);
  k.S_re = k.S.real();

  Eigen::SelfAdjointEigenSolver<CMat> es(k.S);
  const Vec& lam = es.eigenvalues();
  const double lmax = lam.maxCoeff();
  if (lmax <= 0.0) throw std::runtime_error("build_kernel: kernel vanishes");
  if (lam.minCoeff() < -1e-9 * lmax) {
    throw std::runtime_error(fmt::format("build_kernel: kernel not PSD (min eigenvalue {:.3e})", lam.minCoeff()));
  }
  std::vector<int> keep;
  for (int i = 0; i < z; ++i) {
    if (lam[i] > tol * lmax) keep.push_back(i);
  }
  k.rank = static_cast<int>(keep.size());
  k.R.resize(k.rank, z);
  for (int r = 0; r < k.rank; ++r) {
    k.R.row(r) = std::sqrt(lam[keep[r]]) * es.eigenvectors().col(keep[r]).adjoint();
  }
  k.sym_projector = symmetric_projector(m);
  return k;
}

cplx pairing_zero_mean(const CVec& Bbar, const CVec& Abar, const InnerProductKernel& kernel) {
  if (Bbar.size() != kernel.z() || Abar.size() != kernel.z()) {
    throw std::invalid_argument(
        fmt::format("pairing_zero_mean: vectors must have length {}, got {} and {}", kernel.z(), Bbar.size(),
                    Abar.size()));
  }
  return Bbar.dot(kernel.S * Abar);  // dot conjugates the left argument
}

Vec commutation_superoperator(const Vec& Xbar, const InnerProductKernel& kernel) {
  if (Xbar.size() != kernel.z()) {
    throw std::invalid_argument(
        fmt::format("commutation_superoperator: vector must have length {}, got {}", kernel.z(), Xbar.size()));
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(kernel.S_re, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmin <= 1e-13 * lmax) {
    throw std::domain_error(fmt::format(
        "commutation_superoperator: Re(S) is singular (min eigenvalue {:.3e}); the state has pure normal modes, "
        "regularize it first",
        lmin));
  }
  return kernel.S_re.ldlt().solve(-(kernel.S.imag() * Xbar));
}

}  // namespace gaussbounds
