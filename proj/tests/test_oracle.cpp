#include <gtest/gtest.h>

#include <random>

#include "rdregion/bt.hpp"
#include "rdregion/ceo.hpp"
#include "rdregion/oracle.hpp"
#include "rdregion/sources.hpp"
#include "support.hpp"

using namespace rdregion;
using namespace rdregion::oracle;

namespace {

const ceo::CeoSourceModel kSym = sources::bern_bsc(0.5, 0.25, 0.25);
const GridSpec kCoarse{0.05, 20'000'000};

ceo::CeoSourceModel noiseless(double p) { return {Pmf({1 - p, p}), CondPmf::identity(2), CondPmf::identity(2)}; }

}  // namespace

TEST(GridCeo, HugeTradeoffPicksConstantKernels) {
  const auto r = grid_min_ceo(kSym, {1e3, 1e3}, kCoarse);
  EXPECT_NEAR(r.f_min, 1.0, 1e-12);
  // Constant kernels: p(u=0|y=0) = p(u=0|y=1) for both encoders.
  EXPECT_EQ(r.params[0], r.params[1]);
  EXPECT_EQ(r.params[2], r.params[3]);
}

TEST(GridCeo, AgreesWithSolverAtModerateTradeoff) {
  const auto r = grid_min_ceo(kSym, {0.5, 0.5});
  const auto s = ceo::solve(kSym, {0.5, 0.5});
  EXPECT_LE(std::abs(r.f_min - s.objective), 1e-3);
  EXPECT_GE(r.f_min, s.objective - 1e-9);
  EXPECT_EQ(r.cells, 51u * 51 * 51 * 51);
}

TEST(GridCeo, NoiselessChannelsClosedForm) {
  // Y1 = Y2 = X: F >= min(1, s1, s2) H(X), attained by a one-sided copy.
  for (int region : {1, 2}) {
    for (auto [s1, s2] : {std::pair{0.1, 0.1}, std::pair{0.1, 0.3}, std::pair{0.6, 0.2}, std::pair{2.0, 3.0}}) {
      const auto r = grid_min_ceo(noiseless(0.5), {s1, s2, region}, kCoarse);
      EXPECT_NEAR(r.f_min, std::min({1.0, s1, s2}), 1e-12) << s1 << " " << s2 << " region " << region;
    }
  }
}

TEST(GridCeo, ValueMatchesInformationMeasures) {
  std::mt19937_64 g(51);
  for (int t = 0; t < 5; ++t) {
    const auto m = testing_support::random_ceo(g, 3, 2, 2);
    const ceo::CeoTradeoff s(0.2 + 0.3 * t, 0.6, 1 + t % 2);
    const auto r = grid_min_ceo(m, s, {0.1, 20'000'000});
    EXPECT_NEAR(r.f_min, ceo::f_s_p(m, r.kernels, s), 1e-12);
  }
}

TEST(GridCeo, HalvingTheStepNeverIncreasesTheMinimum) {
  std::mt19937_64 g(52);
  const auto m = testing_support::random_ceo(g);
  for (int region : {1, 2}) {
    const ceo::CeoTradeoff s(0.3, 0.45, region);
    EXPECT_LE(grid_min_ceo(m, s, {0.05, 20'000'000}).f_min, grid_min_ceo(m, s, {0.1, 20'000'000}).f_min + 1e-15);
  }
}

TEST(GridCeo, ThreadCountDoesNotChangeTheResult) {
  const auto a = grid_min_ceo(kSym, {0.05, 0.05}, kCoarse, 1);
  const auto b = grid_min_ceo(kSym, {0.05, 0.05}, kCoarse, 3);
  EXPECT_EQ(a.f_min, b.f_min);
  EXPECT_EQ(a.params, b.params);
}

TEST(GridCeo, BudgetAndShapeErrors) {
  try {
    grid_min_ceo(kSym, {1, 1}, {0.02, 1000});
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required(), 51u * 51 * 51 * 51);
    EXPECT_NE(std::string(e.what()).find("6765201"), std::string::npos);
  }
  EXPECT_THROW(grid_min_ceo(kSym, {1, 1}, {0.03, 20'000'000}), std::invalid_argument);
  const ceo::CeoSourceModel ternary(Pmf::uniform(2), CondPmf(2, 3, {0.5, 0.3, 0.2, 0.2, 0.3, 0.5}),
                                    CondPmf::identity(2));
  EXPECT_THROW(grid_min_ceo(ternary, {1, 1}, kCoarse), std::invalid_argument);
}

TEST(GridBt, HugeTradeoffGivesWeightedEntropies) {
  const auto m = sources::bern_bsc_pair(0.3, 0.2, 0.1);
  const auto r = grid_min_bt(m, {1e3, 1e3, 0.3}, kCoarse);
  EXPECT_NEAR(r.f_min, 0.3 * entropy(m.py1()) + 0.7 * entropy(m.py2()), 1e-12);
}

TEST(GridBt, AgreesWithSolverAtModerateTradeoff) {
  const auto m = sources::dsbs(0.1);
  const bt::BtTradeoff b(0.5, 0.5, 0.5);
  const auto r = grid_min_bt(m, b);
  const auto s = bt::solve_bt(m, b);
  EXPECT_LE(std::abs(r.f_min - s.objective), 1e-3);
  EXPECT_GE(r.f_min, s.objective - 1e-9);
}

TEST(GridBt, CopySourceClosedForm) {
  const auto m = bt::BtSourceModel::from_table(2, 2, {0.5, 0.0, 0.0, 0.5});
  for (auto [s1, s2] : {std::pair{0.1, 0.3}, std::pair{0.7, 0.2}})
    for (int region : {1, 2})
      EXPECT_NEAR(grid_min_bt(m, {s1, s2, 0.4, region}, kCoarse).f_min, std::min(s1, s2), 1e-12);
}

TEST(GridBt, ValueMatchesInformationMeasures) {
  std::mt19937_64 g(53);
  for (int t = 0; t < 5; ++t) {
    const auto m = testing_support::random_bt(g);
    const bt::BtTradeoff b(0.2 + 0.3 * t, 0.6, t / 4.0, 1 + t % 2);
    const auto r = grid_min_bt(m, b, {0.1, 20'000'000});
    EXPECT_NEAR(r.f_min, bt::f_beta_p(m, r.kernels, b), 1e-12);
  }
}

TEST(GridBt, HalvingTheStepNeverIncreasesTheMinimum) {
  std::mt19937_64 g(54);
  const auto m = testing_support::random_bt(g);
  const bt::BtTradeoff b(0.3, 0.45, 0.6, 2);
  EXPECT_LE(grid_min_bt(m, b, {0.05, 20'000'000}).f_min, grid_min_bt(m, b, {0.1, 20'000'000}).f_min + 1e-15);
}
