#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "gaussbounds/jet_io.hpp"
#include "gaussbounds/models.hpp"
#include "gaussbounds/report.hpp"
#include "json.hpp"

using namespace gaussbounds;

namespace {

ModelJet ds1(double n, double r) { return disp_squeeze_single_model(n).jet((Vec(3) << 0.2, -0.3, r).finished()); }

}  // namespace

TEST(ComputeBounds, SingleModeClosedForms) {
  const ParamMap p = {{"n", 0.5}, {"r", 0.4}};
  const BoundsReport rep = compute_bounds(ds1(0.5, 0.4), WeightMatrix::identity(3));
  EXPECT_EQ(rep.status, SolverStatus::optimal);
  EXPECT_EQ(rep.epsilon, 0.0);
  EXPECT_NEAR(rep.CS, closed_form_bounds("disp-squeeze-1", p, BoundKind::CS), 1e-10);
  EXPECT_NEAR(rep.CR, closed_form_bounds("disp-squeeze-1", p, BoundKind::CR), 1e-10);
  EXPECT_NEAR(rep.CHbar, closed_form_bounds("disp-squeeze-1", p, BoundKind::CHbar), 1e-10);
  EXPECT_NEAR(rep.CH, rep.CHbar, 1e-3 * rep.CH);
  EXPECT_EQ(rep.names, (std::vector<std::string>{"alpha_re", "alpha_im", "r"}));
  EXPECT_TRUE(check_chain(rep).ok);
}

TEST(ComputeBounds, RegularizesPureStates) {
  ReportOptions o;
  o.extrapolate = true;
  const BoundsReport rep = compute_bounds(ds1(0.0, 0.5), WeightMatrix::identity(3), o);
  EXPECT_GT(rep.epsilon, 0.0);
  EXPECT_TRUE(rep.CH_error_bar.has_value());
  const ParamMap p = {{"n", 0.0}, {"r", 0.5}};
  EXPECT_NEAR(rep.CS, closed_form_bounds("disp-squeeze-1", p, BoundKind::CS), 1e-9);
  EXPECT_NEAR(rep.CR, closed_form_bounds("disp-squeeze-1", p, BoundKind::CR), 1e-9);
}

TEST(CheckChain, ReportsViolations) {
  BoundsReport rep;
  rep.CS = 1.0;
  rep.CR = 1.2;
  rep.CH = 1.1;
  rep.CHbar = 1.5;
  rep.R = 0.5;
  const ChainCheck c = check_chain(rep);
  EXPECT_FALSE(c.ok);
  ASSERT_EQ(c.violations.size(), 1u);
  EXPECT_NE(c.violations[0].find("CR <= CH"), std::string::npos);
  EXPECT_NEAR(c.worst, 0.1, 1e-12);

  rep.CR = std::numeric_limits<double>::quiet_NaN();
  EXPECT_TRUE(check_chain(rep).ok);
  rep.R = 1.5;
  EXPECT_FALSE(check_chain(rep).ok);
}

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(ReportJson, ContainsBoundsAndAReadableJet) {
  const ModelJet jet = ds1(0.5, 0.4);
  BoundsReport rep = compute_bounds(jet, WeightMatrix::identity(3));
  rep.CR = std::numeric_limits<double>::quiet_NaN();
  const auto doc = nlohmann::json::parse(report_to_json(rep, jet));
  EXPECT_TRUE(doc.at("CR").is_null());
  EXPECT_NEAR(doc.at("CS").get<double>(), rep.CS, 1e-11 * rep.CS);
  EXPECT_EQ(doc.at("status").get<std::string>(), "optimal");
  const ModelJet back = parse_jet_json(doc.at("jet").dump());
  EXPECT_EQ(back.Dbar(), jet.Dbar());
}

TEST(ReportTable, ListsEveryBound) {
  const ModelJet jet = ds1(0.5, 0.4);
  const std::string t = report_to_table(compute_bounds(jet, WeightMatrix::identity(3)));
  for (const char* key : {"CS", "CR", "CHbar", "CH", "R", "optimal"}) EXPECT_NE(t.find(key), std::string::npos) << key;
}
