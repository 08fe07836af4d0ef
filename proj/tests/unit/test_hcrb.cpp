#include <gtest/gtest.h>

#include "gaussbounds/hcrb.hpp"
#include "gaussbounds/models.hpp"
#include "random_jets.hpp"

using namespace gaussbounds;

namespace {

// Displacement of a thermal state along x and p.
ModelJet displacement_jet(double n) {
  const double s = std::sqrt(2.0);
  return ModelJet(GaussianState::thermal(1, n), {Vec::Unit(2, 0) * s, Vec::Unit(2, 1) * s},
                  {Mat::Zero(2, 2), Mat::Zero(2, 2)});
}

}  // namespace

TEST(EmbedComplexPsd, DoublesTheSpectrum) {
  CMat H(2, 2);
  H << 2.0, cplx(0.5, -1.0), cplx(0.5, 1.0), 3.0;
  const Mat E = embed_complex_psd(H);
  ASSERT_EQ(E.rows(), 4);
  const Vec eh = Eigen::SelfAdjointEigenSolver<CMat>(H).eigenvalues();
  const Vec ee = Eigen::SelfAdjointEigenSolver<Mat>(E).eigenvalues();
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(ee(2 * i), eh(i), 1e-12);
    EXPECT_NEAR(ee(2 * i + 1), eh(i), 1e-12);
  }
}

TEST(PsdFactor, ReproducesTheMatrixAndDropsNullSpace) {
  CVec v(3);
  v << 1.0, cplx(0, 2), -1.0;
  const CMat H = v * v.adjoint() + CMat::Identity(3, 3) * 0.0;
  const CMat R = psd_factor(H);
  EXPECT_EQ(R.rows(), 1);
  EXPECT_LT((R.adjoint() * R - H).norm(), 1e-12 * H.norm());
}

TEST(Regularization, OnlyWhenNeeded) {
  EXPECT_TRUE(needs_regularization(GaussianState::vacuum(1)));
  EXPECT_FALSE(needs_regularization(GaussianState::thermal(1, 0.1)));
  const ModelJet jet = displacement_jet(0.0);
  const RegularizedJet rj = regularize_jet(jet, 1e-4);
  EXPECT_TRUE(rj.applied);
  EXPECT_FALSE(needs_regularization(rj.jet.state()));
  EXPECT_FALSE(regularize_jet(displacement_jet(0.3), 1e-4).applied);
}

TEST(Hcrb, ThermalDisplacement) {
  for (double n : {0.2, 0.7, 2.0}) {
    const HcrbSolution sol = solve_hcrb(displacement_jet(n), WeightMatrix::identity(2));
    ASSERT_EQ(sol.status, SolverStatus::optimal) << sol.message;
    EXPECT_NEAR(sol.value, n + 1.0, 1e-7 * (n + 1.0));
    EXPECT_EQ(sol.epsilon, 0.0);
    EXPECT_LT(sol.unbiasedness_residual, 1e-8);
  }
}

TEST(Hcrb, CoherentDisplacementNeedsTheLimit) {
  HcrbOptions o;
  o.extrapolate = true;
  const HcrbSolution sol = solve_hcrb(displacement_jet(0.0), WeightMatrix::identity(2), o);
  ASSERT_EQ(sol.status, SolverStatus::optimal) << sol.message;
  EXPECT_GT(sol.epsilon, 0.0);
  ASSERT_TRUE(sol.error_bar.has_value());
  EXPECT_NEAR(sol.value, 1.0, 1e-8);
}

TEST(Hcrb, VerifyFlagsNothingOnStableProblems) {
  HcrbOptions o;
  o.verify = true;
  const HcrbSolution sol = solve_hcrb(displacement_jet(0.0), WeightMatrix::identity(2), o);
  EXPECT_FALSE(sol.unstable);
  ASSERT_TRUE(sol.error_bar.has_value());
  EXPECT_LT(*sol.error_bar, 1e-5);
}

TEST(Hcrb, SingleParameterEqualsSld) {
  testkit::Rng rng(51);
  for (int t = 0; t < 10; ++t) {
    const ModelJet jet = testkit::random_jet(rng, 1 + t % 2, 1);
    const WeightMatrix W = WeightMatrix::identity(1);
    const HcrbSolution sol = solve_hcrb(jet, W);
    ASSERT_EQ(sol.status, SolverStatus::optimal) << sol.message;
    const double cs = sld_crb(sld_qfim(jet), W);
    EXPECT_NEAR(sol.value, cs, 1e-6 * cs);
  }
}

TEST(Hcrb, SolutionIsLocallyUnbiased) {
  testkit::Rng rng(53);
  const ModelJet jet = testkit::random_jet(rng, 2, 3);
  const HcrbSolution sol = solve_hcrb(jet, WeightMatrix::identity(3));
  ASSERT_EQ(sol.status, SolverStatus::optimal);
  EXPECT_LT((sol.Xbar.transpose() * jet.Dbar() - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_NEAR(sol.V.trace(), sol.value, 1e-7 * sol.value);
}

TEST(Hcrb, ScalesWithWeight) {
  testkit::Rng rng(55);
  for (int t = 0; t < 5; ++t) {
    const ModelJet jet = testkit::random_jet(rng, 1 + t % 2, 2);
    Mat W = testkit::random_symmetric(rng, 2);
    W = W * W.transpose() + 0.1 * Mat::Identity(2, 2);
    const double a = solve_hcrb(jet, WeightMatrix(W)).value;
    const double b = solve_hcrb(jet, WeightMatrix(4.0 * W)).value;
    EXPECT_NEAR(b, 4.0 * a, 1e-6 * b);
  }
}

TEST(Hcrb, FullVecMatchesSymmetricParametrization) {
  testkit::Rng rng(57);
  for (int t = 0; t < 5; ++t) {
    const ModelJet jet = testkit::random_jet(rng, 1 + t % 2, 2 + t % 2);
    const WeightMatrix W = WeightMatrix::identity(jet.params());
    HcrbOptions full;
    full.full_vec = true;
    const HcrbSolution a = solve_hcrb(jet, W), b = solve_hcrb(jet, W, full);
    ASSERT_EQ(b.status, SolverStatus::optimal) << b.message;
    EXPECT_NEAR(a.value, b.value, 1e-6 * a.value);
  }
}

TEST(Hcrb, SitsBetweenScalarBounds) {
  testkit::Rng rng(59);
  for (int t = 0; t < 20; ++t) {
    const ModelJet jet = testkit::random_jet(rng);
    const WeightMatrix W = WeightMatrix::identity(jet.params());
    const InformationBundle info = information(jet);
    const double cs = sld_crb(info.JS, W), cr = rld_crb(info.JR, W), up = hcrb_upper(info.JS, info.uhlmann, W);
    const double ch = solve_hcrb(jet, W).value;
    const double slack = 1e-6 * cs;
    EXPECT_LE(std::max(cs, cr), ch + slack);
    EXPECT_LE(ch, up + slack);
    EXPECT_LE(up, 2 * cs + slack);
  }
}

TEST(ScalarSdps, ReproduceClosedForms) {
  testkit::Rng rng(61);
  for (int t = 0; t < 10; ++t) {
    const ModelJet jet = testkit::random_jet(rng);
    const WeightMatrix W = WeightMatrix::identity(jet.params());
    const InformationBundle info = information(jet);
    const double cs = sld_crb(info.JS, W), cr = rld_crb(info.JR, W);
    EXPECT_NEAR(solve_sld_sdp(jet, W).value, cs, 1e-6 * cs);
    EXPECT_NEAR(solve_rld_sdp(jet, W).value, cr, 1e-6 * cr);
  }
}

TEST(GramHcrb, ClassicalTwoOutcomeModel) {
  // Diagonal rho = diag(p, 1 - p), one parameter moving p: the bound is p (1 - p).
  const double p = 0.3;
  CMat gram(2, 2);
  gram << p, 0, 0, 1 - p;
  Mat D(2, 1);
  D << 1, -1;
  Mat means(2, 1);
  means << p, 1 - p;
  const HcrbSolution sol = solve_gram_hcrb(gram, D, WeightMatrix::identity(1), means);
  ASSERT_EQ(sol.status, SolverStatus::optimal) << sol.message;
  EXPECT_NEAR(sol.value, p * (1 - p), 1e-8);
}

TEST(Hcrb, RejectsWrongWeightSize) {
  EXPECT_THROW(solve_hcrb(displacement_jet(0.5), WeightMatrix::identity(3)), std::invalid_argument);
}
