#include <gtest/gtest.h>

#include "gaussbounds/symplectic.hpp"
#include "random_jets.hpp"

using namespace gaussbounds;

TEST(SymplecticForm, BlockStructure) {
  const Mat O = symplectic_form(2);
  EXPECT_EQ(O.rows(), 4);
  EXPECT_DOUBLE_EQ(O(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(O(1, 0), -1.0);
  EXPECT_DOUBLE_EQ(O(2, 3), 1.0);
  EXPECT_DOUBLE_EQ(O(0, 3), 0.0);
  EXPECT_TRUE((O * O).isApprox(-Mat::Identity(4, 4)));
  EXPECT_THROW(symplectic_form(0), std::invalid_argument);
}

TEST(SymplecticEigenvalues, Thermal) {
  const Vec nu = symplectic_eigenvalues(GaussianState::thermal(2, 1.5).sigma());
  ASSERT_EQ(nu.size(), 2);
  EXPECT_NEAR(nu(0), 4.0, 1e-12);
  EXPECT_NEAR(nu(1), 4.0, 1e-12);
}

TEST(SymplecticEigenvalues, InvariantUnderSymplecticMaps) {
  testkit::Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const int m = 1 + t % 2;
    const GaussianState st = testkit::random_state(rng, m);
    const Mat S = testkit::random_symplectic(rng, m);
    const Mat O = symplectic_form(m);
    EXPECT_LT((S * O * S.transpose() - O).norm(), 1e-10);
    const Vec a = symplectic_eigenvalues(st.sigma());
    const Vec b = symplectic_eigenvalues(S * st.sigma() * S.transpose());
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-9 * a.maxCoeff());
  }
}

TEST(SymplecticEigenvalues, RejectsAsymmetric) {
  Mat s = Mat::Identity(2, 2);
  s(0, 1) = 0.3;
  EXPECT_THROW(symplectic_eigenvalues(s), std::invalid_argument);
}

TEST(GaussianState, Constructors) {
  const GaussianState c = GaussianState::coherent({0.5, -0.25});
  EXPECT_NEAR(c.d()(0), std::sqrt(2.0) * 0.5, 1e-15);
  EXPECT_NEAR(c.d()(1), -std::sqrt(2.0) * 0.25, 1e-15);
  EXPECT_TRUE(c.sigma().isApprox(Mat::Identity(2, 2)));
  EXPECT_THROW(GaussianState(Vec::Zero(3), Mat::Identity(3, 3)), std::invalid_argument);
  EXPECT_THROW(GaussianState(Vec::Zero(2), Mat::Identity(4, 4)), std::invalid_argument);
  EXPECT_THROW(GaussianState::thermal(1, -0.1), std::invalid_argument);
}

TEST(ValidateState, FlagsPureModesAndViolations) {
  const StateReport vac = validate_state(GaussianState::vacuum(2));
  EXPECT_TRUE(vac.valid);
  EXPECT_EQ(vac.symplectic_rank, 0);
  EXPECT_TRUE(vac.pure_modes[0] && vac.pure_modes[1]);

  const StateReport th = validate_state(GaussianState::thermal(1, 0.2));
  EXPECT_TRUE(th.valid);
  EXPECT_EQ(th.symplectic_rank, 1);

  Mat s = Mat::Identity(2, 2) * 0.5;
  const GaussianState bad(Vec::Zero(2), s);
  const StateReport rep = validate_state(bad);
  EXPECT_FALSE(rep.valid);
  EXPECT_FALSE(rep.violations.empty());
  EXPECT_THROW(require_valid(bad), std::invalid_argument);
}

TEST(Regularize, MixesWithVacuum) {
  const GaussianState sq = apply_gaussian_map(GaussianState::vacuum(1), SymplecticMap::squeezing(0.7));
  const GaussianState r = regularize(sq, 0.1);
  EXPECT_TRUE(r.sigma().isApprox(0.9 * sq.sigma() + 0.1 * Mat::Identity(2, 2)));
  EXPECT_GT(symplectic_eigenvalues(r.sigma())(0), 1.0 + 1e-6);
  EXPECT_THROW(regularize(sq, 1.0), std::invalid_argument);
  EXPECT_THROW(regularize(sq, -0.1), std::invalid_argument);
}

TEST(SymplecticMap, RejectsNonSymplectic) {
  EXPECT_THROW(SymplecticMap(Mat::Identity(2, 2) * 2.0), std::invalid_argument);
  EXPECT_NO_THROW(SymplecticMap(rotation_matrix(0.3) * SymplecticMap::squeezing(0.4).S()));
}

TEST(SymplecticMap, DisplacementAndSqueezing) {
  Vec shift(2);
  shift << 0.2, -0.1;
  const GaussianState out = apply_gaussian_map(GaussianState::vacuum(1), SymplecticMap(Mat::Identity(2, 2), shift));
  EXPECT_TRUE(out.d().isApprox(shift));
  const GaussianState sq = apply_gaussian_map(GaussianState::vacuum(1), SymplecticMap::squeezing(0.5));
  EXPECT_NEAR(sq.sigma()(0, 0), std::exp(1.0), 1e-12);
  EXPECT_NEAR(sq.sigma()(1, 1), std::exp(-1.0), 1e-12);
}

TEST(LossChannel, ContractsTowardsVacuum) {
  const GaussianState th = GaussianState::thermal(2, 1.0);
  const GaussianState all = loss_channel(th, 0.25);
  EXPECT_TRUE(all.sigma().isApprox(Mat::Identity(4, 4) * (0.25 * 3 + 0.75)));
  const GaussianState one = loss_channel(th, 0.25, 1);
  EXPECT_NEAR(one.sigma()(0, 0), 3.0, 1e-14);
  EXPECT_NEAR(one.sigma()(2, 2), 1.5, 1e-14);

  const GaussianState c = loss_channel(GaussianState::coherent({1.0, 0.0}), 0.36);
  EXPECT_NEAR(c.d()(0), 0.6 * std::sqrt(2.0), 1e-14);
  EXPECT_THROW(loss_channel(th, 1.5), std::invalid_argument);
  EXPECT_THROW(loss_channel(th, 0.5, 2), std::invalid_argument);
}

TEST(Vec, ColumnStackingRoundTrip) {
  Mat A(2, 3);
  A << 1, 2, 3, 4, 5, 6;
  const Vec v = vec(A);
  EXPECT_DOUBLE_EQ(v(1), 4.0);
  EXPECT_DOUBLE_EQ(v(2), 2.0);
  EXPECT_TRUE(unvec(v, 2, 3).isApprox(A));
  EXPECT_THROW(unvec(v, 4, 2), std::invalid_argument);
}

TEST(Kron, MixedProduct) {
  Mat A(2, 2), B(2, 2), C(2, 2), D(2, 2);
  A << 1, 2, 3, 4;
  B << 0, 1, 1, 0;
  C << 2, 0, 1, 1;
  D << 1, -1, 0, 2;
  EXPECT_TRUE((kron(A, B) * kron(C, D)).isApprox(kron(Mat(A * C), Mat(B * D))));
}
