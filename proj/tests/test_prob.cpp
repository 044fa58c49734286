#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rdregion/prob.hpp"
#include "rdregion/sources.hpp"
#include "support.hpp"

using namespace rdregion;
using testing_support::h2;
using testing_support::random_simplex;

namespace {

JointPmf symmetric_xyy() { return sources::bern_bsc(0.5, 0.25, 0.25).joint(); }

JointPmf random_joint(std::mt19937_64& g) {
  return JointPmf({{"A", 2}, {"B", 3}, {"C", 2}}, random_simplex(g, 12));
}

}  // namespace

TEST(Pmf, RejectsNegativeAndUnnormalized) {
  EXPECT_THROW(Pmf({0.5, -0.1, 0.6}), std::invalid_argument);
  EXPECT_THROW(Pmf({0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(Pmf({std::nan(""), 1.0}), std::invalid_argument);
}

TEST(Pmf, RenormalizesSmallDrift) {
  const Pmf p({0.5 + 4e-10, 0.5});
  EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
}

TEST(CondPmf, RowsValidated) {
  EXPECT_THROW(CondPmf(2, 2, {0.5, 0.5, 0.7, 0.7}), std::invalid_argument);
  EXPECT_THROW(CondPmf(2, 2, {0.5, 0.5}), std::invalid_argument);
}

TEST(CondPmf, ZeroMassRowsAreUniformAndFlagged) {
  const auto c = CondPmf::from_joint(2, 2, std::vector<double>{0.25, 0.75, 0.0, 0.0});
  EXPECT_FALSE(c.degenerate(0));
  EXPECT_TRUE(c.degenerate(1));
  EXPECT_DOUBLE_EQ(c(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(c(0, 1), 0.75);
}

TEST(JointPmf, RejectsDuplicateAxes) {
  EXPECT_THROW(JointPmf({{"A", 2}, {"A", 2}}, std::vector<double>(4, 0.25)), std::invalid_argument);
}

TEST(Marginalize, UniformPairKeepFirst) {
  const JointPmf j({{"A", 2}, {"B", 2}}, std::vector<double>(4, 0.25));
  const auto m = marginalize(j, {"A"});
  ASSERT_EQ(m.mass().size(), 2u);
  EXPECT_DOUBLE_EQ(m.mass()[0], 0.5);
  EXPECT_DOUBLE_EQ(m.mass()[1], 0.5);
}

TEST(Marginalize, ObservationPairOfSymmetricBinarySource) {
  const auto m = marginalize(symmetric_xyy(), {"Y1", "Y2"});
  EXPECT_NEAR(m.at({0, 0}), 0.3125, 1e-15);
  EXPECT_NEAR(m.at({1, 1}), 0.3125, 1e-15);
  EXPECT_NEAR(m.at({0, 1}), 0.1875, 1e-15);
  EXPECT_NEAR(m.at({1, 0}), 0.1875, 1e-15);
}

TEST(Marginalize, KeepAllIsIdentity) {
  std::mt19937_64 g(1);
  const auto j = random_joint(g);
  const auto m = marginalize(j, {"A", "B", "C"});
  for (std::size_t i = 0; i < j.mass().size(); ++i) EXPECT_DOUBLE_EQ(m.mass()[i], j.mass()[i]);
}

TEST(Marginalize, UnknownLabelThrows) {
  EXPECT_THROW(marginalize(symmetric_xyy(), {"Z"}), std::invalid_argument);
  EXPECT_THROW(marginalize(symmetric_xyy(), {}), std::invalid_argument);
}

TEST(Marginalize, FollowsRequestedAxisOrder) {
  const auto j = marginalize(symmetric_xyy(), {"Y2", "X"});
  EXPECT_EQ(j.axes()[0].label, "Y2");
  EXPECT_NEAR(j.at({1, 0}), 0.5 * 0.25, 1e-15);
}

TEST(Marginalize, ComposesAcrossSteps) {
  std::mt19937_64 g(2);
  for (int t = 0; t < 20; ++t) {
    const auto j = random_joint(g);
    const auto twice = marginalize(marginalize(j, {"A", "C"}), {"C"});
    const auto once = marginalize(j, {"C"});
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(twice.mass()[i], once.mass()[i], 1e-15);
  }
}

TEST(Condition, IndependentUniformPair) {
  const JointPmf j({{"A", 2}, {"B", 2}}, std::vector<double>(4, 0.25));
  const auto c = condition(j, {"A"}, {"B"});
  for (std::size_t g = 0; g < 2; ++g) {
    EXPECT_DOUBLE_EQ(c(g, 0), 0.5);
    EXPECT_DOUBLE_EQ(c(g, 1), 0.5);
  }
}

TEST(Condition, PosteriorOfSourceGivenAgreeingObservations) {
  const auto c = condition(symmetric_xyy(), {"X"}, {"Y1", "Y2"});
  EXPECT_NEAR(c(0, 0), 0.9, 1e-15);  // row (y1, y2) = (0, 0)
}

TEST(Condition, DeterministicCopyGivesIdentityRows) {
  const JointPmf j({{"X", 3}, {"Y", 3}}, {0.2, 0, 0, 0, 0.5, 0, 0, 0, 0.3});
  const auto c = condition(j, {"Y"}, {"X"});
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t o = 0; o < 3; ++o) EXPECT_DOUBLE_EQ(c(g, o), g == o ? 1.0 : 0.0);
}

TEST(Condition, OverlapThrows) {
  EXPECT_THROW(condition(symmetric_xyy(), {"X", "Y1"}, {"Y1"}), std::invalid_argument);
}

TEST(Entropy, ReferenceValues) {
  EXPECT_DOUBLE_EQ(entropy(Pmf({0.5, 0.5})), 1.0);
  EXPECT_DOUBLE_EQ(entropy(Pmf::point_mass(4, 2)), 0.0);
  EXPECT_NEAR(entropy(Pmf({0.25, 0.75})), 0.8112781244591328, 1e-15);
  EXPECT_NEAR(entropy(Pmf({0.25, 0.75})), h2(0.25), 1e-15);
}

TEST(ConditionalEntropy, IndependentAxesGiveMarginalEntropy) {
  const JointPmf j({{"A", 2}, {"B", 2}}, {0.25 * 0.3, 0.25 * 0.7, 0.75 * 0.3, 0.75 * 0.7});
  EXPECT_NEAR(conditional_entropy(j, {"A"}, {"B"}), h2(0.25), 1e-14);
}

TEST(ConditionalEntropy, SourceGivenBothObservations) {
  // Reference by direct summation over the 8-cell table.
  const auto j = symmetric_xyy();
  double ref = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double pyy = j.at({0, std::size_t(a), std::size_t(b)}) + j.at({1, std::size_t(a), std::size_t(b)});
      for (int x = 0; x < 2; ++x) {
        const double p = j.at({std::size_t(x), std::size_t(a), std::size_t(b)});
        ref -= p * std::log2(p / pyy);
      }
    }
  EXPECT_NEAR(conditional_entropy(j, {"X"}, {"Y1", "Y2"}), ref, 1e-14);
  EXPECT_NEAR(ref, 0.6681, 5e-5);
}

TEST(ConditionalEntropy, TargetEqualsGiven) { EXPECT_NEAR(conditional_entropy(symmetric_xyy(), {"X"}, {"X"}), 0.0, 1e-15); }

TEST(MutualInformation, IndependentAxes) {
  const JointPmf j({{"A", 2}, {"B", 2}}, {0.25 * 0.3, 0.25 * 0.7, 0.75 * 0.3, 0.75 * 0.7});
  EXPECT_NEAR(mutual_information(j, {"A"}, {"B"}), 0.0, 1e-15);
}

TEST(MutualInformation, BscWithUniformInput) {
  EXPECT_NEAR(mutual_information(symmetric_xyy(), {"X"}, {"Y1"}), 1.0 - h2(0.25), 1e-14);
  EXPECT_NEAR(1.0 - h2(0.25), 0.1887, 5e-5);
}

TEST(MutualInformation, SelfInformationIsEntropy) {
  EXPECT_NEAR(mutual_information(symmetric_xyy(), {"X"}, {"X"}), 1.0, 1e-15);
}

TEST(KlDivergence, ReferenceValues) {
  EXPECT_DOUBLE_EQ(kl_divergence(Pmf({0.3, 0.7}), Pmf({0.3, 0.7})), 0.0);
  EXPECT_DOUBLE_EQ(kl_divergence(Pmf({1.0, 0.0}), Pmf({0.5, 0.5})), 1.0);
  EXPECT_TRUE(is_infinite_divergence(kl_divergence(Pmf({0.5, 0.5}), Pmf({1.0, 0.0}))));
}

TEST(KlDivergence, SizeMismatchThrows) {
  EXPECT_THROW(kl_divergence(Pmf({0.5, 0.5}), Pmf::uniform(3)), std::invalid_argument);
}

TEST(InformationIdentities, RandomJoints) {
  std::mt19937_64 g(3);
  for (int t = 0; t < 200; ++t) {
    const auto j = random_joint(g);
    const double hab = entropy(marginalize(j, {"A", "B"}));
    EXPECT_NEAR(hab, entropy(marginalize(j, {"A"})) + conditional_entropy(j, {"B"}, {"A"}), 1e-9);
    const double i_ab = mutual_information(j, {"A"}, {"B"});
    EXPECT_NEAR(i_ab, entropy(marginalize(j, {"A"})) - conditional_entropy(j, {"A"}, {"B"}), 1e-9);
    EXPECT_GE(i_ab, -1e-12);
    EXPECT_NEAR(i_ab, mutual_information(j, {"B"}, {"A"}), 1e-12);
    EXPECT_GE(mutual_information(j, {"A"}, {"B"}, {"C"}), -1e-12);
    const Pmf p(random_simplex(g, 5)), q(random_simplex(g, 5, 0.01));
    EXPECT_GE(kl_divergence(p, q), 0.0);
  }
}
