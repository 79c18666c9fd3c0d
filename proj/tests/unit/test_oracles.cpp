#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "phasegbs/network.hpp"
#include "phasegbs/oracles.hpp"

namespace phasegbs {
namespace {

const double kSinh2 = 1.3810978455418157;

std::vector<std::size_t> all_modes(std::size_t m) {
  std::vector<std::size_t> v(m);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

TEST(OutputMoments, VacuumIsZero) {
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(3, 0, 0.0), random_unitary(3, 1));
  EXPECT_EQ(g.normal.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.anomalous.cwiseAbs().maxCoeff(), 0.0);
}

TEST(OutputMoments, SingleModeEqualsInputMoments) {
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(1, 1, 1.0),
                                         TransmissionMatrix::identity(1));
  EXPECT_NEAR(g.normal(0, 0).real(), 1.38110, 1e-5);
  EXPECT_NEAR(g.anomalous(0, 0).real(), 1.81343, 1e-5);
}

TEST(OutputMoments, ThermalStatesAreUnitarilyInvariant) {
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(7, 7, 1.0, 1.0),
                                         random_unitary(7, 4));
  EXPECT_LT((g.normal - kSinh2 * CMatrix::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(g.anomalous.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OutputMoments, HermitianAndSymmetric) {
  const auto t = scale_transmission(random_unitary(5, 2), 0.8);
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(5, 3, 0.9, 0.3), t);
  EXPECT_LT((g.normal - g.normal.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((g.anomalous - g.anomalous.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OutputMoments, PadsAndChecksDimensions) {
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(1, 1, 1.0),
                                         TransmissionMatrix::identity(3));
  EXPECT_EQ(g.mode_count(), 3u);
  EXPECT_THROW(output_gaussian_moments(SqueezerSpec::uniform(4, 1, 1.0),
                                       TransmissionMatrix::identity(3)),
               InputError);
}

TEST(VacuumProbability, ClosedForms) {
  const std::vector<std::size_t> z{0};
  const auto vac = output_gaussian_moments(SqueezerSpec::uniform(1, 0, 0.0),
                                           TransmissionMatrix::identity(1));
  EXPECT_DOUBLE_EQ(vacuum_probability(vac, z), 1.0);
  const auto thermal = output_gaussian_moments(SqueezerSpec::uniform(1, 1, 1.0, 1.0),
                                               TransmissionMatrix::identity(1));
  EXPECT_NEAR(vacuum_probability(thermal, z), 1.0 / (1.0 + kSinh2), 1e-14);
  const auto squeezed = output_gaussian_moments(SqueezerSpec::uniform(1, 1, 1.0),
                                                TransmissionMatrix::identity(1));
  EXPECT_NEAR(vacuum_probability(squeezed, z), 0.64805, 1e-5);
  EXPECT_NEAR(vacuum_probability(squeezed, z), 1.0 / std::cosh(1.0), 1e-14);
  EXPECT_DOUBLE_EQ(vacuum_probability(squeezed, {}), 1.0);
}

TEST(VacuumProbability, RejectsUnphysicalMoments) {
  GaussianMoments g{CMatrix::Zero(1, 1), CMatrix::Constant(1, 1, Complex(2.0, 0.0))};
  const std::vector<std::size_t> z{0};
  EXPECT_THROW(vacuum_probability(g, z), NumericalError);
  const std::vector<std::size_t> out_of_range{1};
  EXPECT_THROW(vacuum_probability(g, out_of_range), InputError);
}

TEST(Torontonian, SingleModeClick) {
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(1, 1, 1.0),
                                         TransmissionMatrix::identity(1));
  const std::vector<std::size_t> c{0};
  EXPECT_NEAR(torontonian_probability(g, c, c), 0.35195, 1e-5);
  EXPECT_NEAR(torontonian_probability(g, {}, c), 0.64805, 1e-5);
}

TEST(Torontonian, EmptyClickSetIsVacuumProbability) {
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(4, 2, 1.0), random_unitary(4, 3));
  const auto s = all_modes(4);
  EXPECT_DOUBLE_EQ(torontonian_probability(g, {}, s), vacuum_probability(g, s));
}

TEST(Torontonian, ValidatesArguments) {
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(3, 2, 1.0), random_unitary(3, 3));
  const std::vector<std::size_t> c{2};
  const std::vector<std::size_t> s{0, 1};
  EXPECT_THROW(torontonian_probability(g, c, s), InputError);
  const auto big = output_gaussian_moments(SqueezerSpec::uniform(21, 1, 0.1),
                                           TransmissionMatrix::identity(21));
  const auto modes = all_modes(21);
  EXPECT_THROW(torontonian_probability(big, modes, modes), InputError);
}

TEST(ExactPatterns, MatchTorontonianPatternByPattern) {
  const std::size_t m = 5;
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(m, 3, 0.8, 0.2),
                                         scale_transmission(random_unitary(m, 6), 0.9));
  const auto p = exact_pattern_probabilities(g);
  const auto s = all_modes(m);
  for (std::size_t mask = 0; mask < p.size(); ++mask) {
    std::vector<std::size_t> c;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1u << j)) c.push_back(j);
    }
    EXPECT_NEAR(p[mask], torontonian_probability(g, c, s), 1e-12);
  }
}

TEST(ExactPatterns, SumToOneAndNonNegative) {
  for (std::size_t m : {3u, 7u, 10u}) {
    const auto g = output_gaussian_moments(SqueezerSpec::uniform(m, m / 2 + 1, 1.0),
                                           random_unitary(m, m));
    const auto p = exact_pattern_probabilities(g);
    double sum = 0.0;
    for (double x : p) {
      sum += x;
      EXPECT_GE(x, -1e-10);
    }
    EXPECT_NEAR(sum, 1.0, 1e-8);
  }
}

TEST(ExactPatterns, LimitedToSixteenModes) {
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(17, 1, 0.5),
                                         TransmissionMatrix::identity(17));
  EXPECT_THROW(exact_pattern_probabilities(g), InputError);
}

TEST(ExactTotalCount, VacuumIsPointMass) {
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(4, 0, 0.0), random_unitary(4, 1));
  const auto d = exact_total_count_distribution(g);
  EXPECT_DOUBLE_EQ(d[0], 1.0);
  for (std::size_t k = 1; k < d.size(); ++k) EXPECT_NEAR(d[k], 0.0, 1e-15);
}

TEST(ExactTotalCount, TwoThermalModesAreBinomial) {
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(2, 2, 1.0, 1.0), random_unitary(2, 5));
  const auto d = exact_total_count_distribution(g);
  const double p = 0.58003;
  EXPECT_NEAR(d[0], (1 - p) * (1 - p), 1e-5);
  EXPECT_NEAR(d[1], 2 * p * (1 - p), 1e-5);
  EXPECT_NEAR(d[2], p * p, 1e-5);
}

TEST(ExactGrouped, MarginalsOfPatterns) {
  const std::size_t m = 6;
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(m, 3, 1.0), random_unitary(m, 9));
  const GroupPartition partition({{0, 2}, {5, 1, 3}}, m);
  const auto d = exact_grouped_distribution(g, partition);
  EXPECT_NEAR(d.sum(), 1.0, 1e-10);
  const auto total = exact_total_count_distribution(g);
  // Folding the two groups together gives the one-group law over the same modes.
  const GroupPartition five({{0, 1, 2, 3, 5}}, m);
  const auto d5 = exact_grouped_distribution(g, five);
  std::vector<double> folded(6, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto idx = d.multi_index(i);
    folded[idx[0] + idx[1]] += d.probability[i];
  }
  for (std::size_t k = 0; k < folded.size(); ++k) EXPECT_NEAR(folded[k], d5.probability[k], 1e-12);
  EXPECT_NEAR(total[0], exact_grouped_distribution(g, GroupPartition::single(m)).probability[0], 1e-14);
}

TEST(AnalyticIid, ClosedForms) {
  const std::vector<std::size_t> two{2};
  const auto half = analytic_iid_distribution(0.5, two);
  EXPECT_NEAR(half.probability[0], 0.25, 1e-15);
  EXPECT_NEAR(half.probability[1], 0.5, 1e-15);
  EXPECT_NEAR(half.probability[2], 0.25, 1e-15);
  const std::vector<std::size_t> sizes{3, 2};
  const auto zero = analytic_iid_distribution(0.0, sizes);
  EXPECT_EQ(zero.probability[0], 1.0);
  EXPECT_NEAR(zero.sum(), 1.0, 1e-15);
  EXPECT_THROW(analytic_iid_distribution(1.5, sizes), InputError);
  EXPECT_THROW(analytic_iid_distribution(-0.1, sizes), InputError);
}

TEST(AnalyticIid, MatchesThermalExactDistribution) {
  const std::vector<std::size_t> sizes{3, 2, 3};
  const auto partition = GroupPartition::sequential(sizes, 8);
  const auto g = output_gaussian_moments(SqueezerSpec::uniform(8, 8, 1.0, 1.0), random_unitary(8, 2));
  const auto exact = exact_grouped_distribution(g, partition);
  const auto iid = analytic_iid_distribution(kSinh2 / (1 + kSinh2), sizes);
  for (std::size_t i = 0; i < iid.size(); ++i) EXPECT_NEAR(iid.probability[i], exact.probability[i], 1e-12);
}

TEST(AnalyticIid, FourByTenTensor) {
  const std::vector<std::size_t> sizes{10, 10, 10, 10};
  const auto d = analytic_iid_distribution(0.58003, sizes);
  EXPECT_EQ(d.size(), 14641u);
  EXPECT_NEAR(d.sum(), 1.0, 1e-12);
}

}  // namespace
}  // namespace phasegbs
