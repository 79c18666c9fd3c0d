#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "phasegbs/clicks.hpp"
#include "phasegbs/network.hpp"
#include "phasegbs/oracles.hpp"
#include "phasegbs/parallel.hpp"
#include "phasegbs/validation.hpp"

namespace phasegbs {
namespace {

const double kSinh2 = 1.3810978455418157;  // sinh^2(1)

BlockSource network_source(std::size_t modes, std::size_t squeezed, double r, double eps,
                           std::uint64_t seed, EnsembleLayout layout) {
  const NetworkSampler sampler(SqueezerSpec::uniform(modes, squeezed, r, eps),
                               Ordering::positive_p(), random_unitary(modes, seed), seed + 100);
  return sampler.source(layout);
}

TEST(GroupPartition, ValidatesGroups) {
  EXPECT_THROW(GroupPartition({}, 3), InputError);
  EXPECT_THROW(GroupPartition({{0, 1}, {}}, 3), InputError);
  EXPECT_THROW(GroupPartition({{0, 1}, {1, 2}}, 3), InputError);
  EXPECT_THROW(GroupPartition({{0, 3}}, 3), InputError);
  const GroupPartition p({{2}, {0}}, 3);
  EXPECT_EQ(p.group_count(), 2u);
  EXPECT_EQ(p.extents(), (std::vector<std::size_t>{2, 2}));
}

TEST(GroupPartition, SequentialAndSingle) {
  const std::vector<std::size_t> sizes{2, 3};
  const auto p = GroupPartition::sequential(sizes, 6);
  EXPECT_EQ(p.group(1), (std::vector<std::size_t>{2, 3, 4}));
  EXPECT_EQ(p.tensor_size(), 12u);
  EXPECT_THROW(GroupPartition::sequential(sizes, 4), InputError);
  EXPECT_EQ(GroupPartition::single(5).tensor_size(), 6u);
}

TEST(GroupPartition, TensorSizeSaturates) {
  std::vector<std::size_t> sizes(80, 1);
  EXPECT_EQ(GroupPartition::sequential(sizes, 80).tensor_size(), SIZE_MAX);
}

TEST(GroupedDistribution, IndexingIsRowMajor) {
  const std::vector<std::size_t> sizes{1, 2};
  GroupedDistribution d(GroupPartition::sequential(sizes, 3));
  const std::vector<std::size_t> m{1, 2};
  EXPECT_EQ(d.flat_index(m), 5u);
  EXPECT_EQ(d.multi_index(4), (std::vector<std::size_t>{1, 1}));
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d.flat_index(d.multi_index(i)), i);
  const std::vector<std::size_t> bad{2, 0};
  EXPECT_THROW(d.flat_index(bad), InputError);
}

TEST(ClickWeights, RejectsClassicalOrderings) {
  const auto e = sample_sigma_ordered(SqueezerSpec::uniform(1, 1, 1.0), Ordering::wigner(), 1, {1, 4});
  EXPECT_THROW(click_weights(e.block(0), e.ordering()), InputError);
}

TEST(ClickWeights, SumToOne) {
  const auto e = sample_positive_p(SqueezerSpec::uniform(2, 2, 1.0), 1, {1, 50});
  const auto w = click_weights(e.block(0), e.ordering());
  EXPECT_LT((w.click + w.no_click - CMatrix::Ones(2, 50)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MarginalClick, SingleModeUnitSqueezing) {
  const auto src = network_source(1, 1, 1.0, 0.0, 1, {200, 1000});
  const auto e = marginal_click_probability(src, 0);
  EXPECT_NEAR(e.value, 0.35195, 5 * e.std_error + 1e-5);
  EXPECT_GT(e.std_error, 0.0);
}

TEST(MarginalClick, VacuumIsExactlyZero) {
  const auto src = network_source(3, 0, 0.0, 0.0, 1, {10, 100});
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(marginal_click_probability(src, j).value, 0.0);
  EXPECT_THROW(marginal_click_probability(src, 3), InputError);
}

TEST(Grouped, VacuumIsPointMassAtZero) {
  const std::vector<std::size_t> sizes{2, 2};
  const auto d = grouped_probability(network_source(4, 0, 0.0, 0.0, 1, {4, 10}),
                                     GroupPartition::sequential(sizes, 4));
  EXPECT_NEAR(d.probability[0], 1.0, 1e-15);
  for (std::size_t i = 1; i < d.size(); ++i) EXPECT_NEAR(d.probability[i], 0.0, 1e-15);
}

TEST(Grouped, NormalisedAtAnySampleCount) {
  const std::vector<std::size_t> sizes{3, 2, 3};
  const auto partition = GroupPartition::sequential(sizes, 8);
  for (EnsembleLayout layout : {EnsembleLayout{1, 1}, EnsembleLayout{2, 1}, EnsembleLayout{5, 37}}) {
    const auto d = grouped_probability(network_source(8, 4, 1.2, 0.1, 3, layout), partition);
    EXPECT_NEAR(d.sum(), 1.0, 1e-10);
    EXPECT_EQ(d.sample_count, layout.sample_count());
  }
}

TEST(Grouped, SingleBlockHasUndefinedErrors) {
  const auto d = grouped_probability(network_source(2, 2, 1.0, 0.0, 3, {1, 100}),
                                     GroupPartition::single(2));
  EXPECT_TRUE(std::isnan(d.std_error[1]));
}

TEST(Grouped, TotalCountsMatchExactDistribution) {
  const std::size_t m = 6;
  const auto spec = SqueezerSpec::uniform(m, 3, 0.9);
  const auto t = random_unitary(m, 12);
  const NetworkSampler sampler(spec, Ordering::positive_p(), t, 77);
  const auto d = grouped_probability(sampler.source({200, 1000}), GroupPartition::single(m));
  const auto exact = exact_total_count_distribution(output_gaussian_moments(spec, t));
  for (std::size_t k = 0; k <= m; ++k) {
    EXPECT_NEAR(d.probability[k], exact[k], 5 * d.std_error[k] + 1e-9) << "m = " << k;
  }
}

TEST(Grouped, TwoGroupsMatchExactDistribution) {
  const std::size_t m = 5;
  const auto spec = SqueezerSpec::uniform(m, 5, 0.6, 0.2);
  const auto t = scale_transmission(random_unitary(m, 13), 0.9);
  const NetworkSampler sampler(spec, Ordering::positive_p(), t, 78);
  const GroupPartition partition({{0, 3}, {1, 4, 2}}, m);
  const auto d = grouped_probability(sampler.source({100, 1000}), partition);
  const auto exact = exact_grouped_distribution(output_gaussian_moments(spec, t), partition);
  ComparisonOptions opts;
  opts.probability_cutoff = 1e-4;
  const auto chi = chi_square(compare_with_exact(d, exact.probability, opts));
  EXPECT_GE(chi.k, 10u);
  EXPECT_LT(chi.ratio, 2.5);
}

TEST(Grouped, ImaginaryPartVanishesWithinErrors) {
  const std::vector<std::size_t> sizes{2, 2};
  const auto d = grouped_probability(network_source(4, 4, 1.0, 0.0, 4, {50, 500}),
                                     GroupPartition::sequential(sizes, 4));
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_LE(std::abs(d.imag[i]), 6 * d.std_error[i] + 1e-12);
}

TEST(Grouped, IidThermalMatchesBinomial) {
  const std::vector<std::size_t> sizes{3, 3};
  const auto d = grouped_probability(network_source(6, 6, 1.0, 1.0, 5, {100, 1000}),
                                     GroupPartition::sequential(sizes, 6));
  const auto exact = analytic_iid_distribution(kSinh2 / (1 + kSinh2), sizes);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_NEAR(d.probability[i], exact.probability[i], 5 * d.std_error[i] + 1e-9);
  }
}

TEST(Grouped, MarginalMatchesCoarserPartition) {
  const auto src = network_source(4, 2, 1.0, 0.0, 6, {10, 200});
  const GroupPartition fine({{0, 1}, {2, 3}}, 4);
  const GroupPartition coarse({{0, 1}}, 4);
  const auto keep = std::vector<std::size_t>{0};
  const auto marg = grouped_probability(src, fine).marginal(keep);
  const auto direct = grouped_probability(src, coarse);
  for (std::size_t i = 0; i < direct.size(); ++i) {
    EXPECT_NEAR(marg.probability[i], direct.probability[i], 1e-12);
  }
}

TEST(Grouped, IdenticalForAnyThreadCount) {
  const std::vector<std::size_t> sizes{2, 3};
  const auto partition = GroupPartition::sequential(sizes, 5);
  const auto src = network_source(5, 3, 1.0, 0.0, 7, {9, 50});
  set_thread_count(1);
  const auto one = grouped_probability(src, partition);
  set_thread_count(3);
  const auto three = grouped_probability(src, partition);
  set_thread_count(0);
  EXPECT_EQ(one.probability, three.probability);
  EXPECT_EQ(one.std_error, three.std_error);
}

TEST(Grouped, RejectsOversizedTensorsAndMismatchedModes) {
  const auto src = network_source(4, 2, 1.0, 0.0, 7, {1, 5});
  GroupedOptions tiny;
  tiny.max_tensor_entries = 4;
  EXPECT_THROW(grouped_probability(src, GroupPartition::single(4), tiny), InputError);
  EXPECT_THROW(grouped_probability(src, GroupPartition::single(5)), InputError);
}

TEST(Grouped, InMemoryEnsembleMatchesSource) {
  const auto spec = SqueezerSpec::uniform(3, 3, 0.8);
  const auto e = sample_positive_p(spec, 4, {3, 20});
  const auto a = grouped_probability(e, GroupPartition::single(3));
  const auto b = grouped_probability(BlockSource::from(e), GroupPartition::single(3));
  EXPECT_EQ(a.probability, b.probability);
}

TEST(GlauberMoment, PhotonNumberAndCoherenceFree) {
  const auto e = sample_positive_p(SqueezerSpec::uniform(2, 1, 1.0), 8, {100, 1000});
  const std::vector<unsigned> first{1, 0};
  const auto n = glauber_moment(e, first);
  EXPECT_NEAR(n.value.real(), kSinh2, 5 * n.std_error_real);
  const std::vector<unsigned> second{0, 1};
  EXPECT_EQ(glauber_moment(e, second).value, Complex(0.0, 0.0));
}

TEST(BinPatterns, CountsAndErrors) {
  const GroupPartition p({{0, 1}, {2}}, 3);
  const std::vector<std::string> pats{"000", "110", "101", "111", "100"};
  const auto d = bin_experimental_patterns(pats, p);
  ASSERT_TRUE(d.counts.has_value());
  EXPECT_EQ(d.sample_count, 5u);
  EXPECT_DOUBLE_EQ(d.at({1, 0}), 0.2);
  EXPECT_DOUBLE_EQ(d.at({1, 1}), 0.2);
  EXPECT_DOUBLE_EQ(d.at({2, 0}), 0.2);
  EXPECT_DOUBLE_EQ(d.at({2, 1}), 0.2);
  EXPECT_DOUBLE_EQ(d.at({0, 0}), 0.2);
  EXPECT_DOUBLE_EQ(d.std_error[d.flat_index(std::vector<std::size_t>{1, 0})], 1.0 / 5.0);
  EXPECT_DOUBLE_EQ(d.sum(), 1.0);
}

TEST(BinPatterns, StreamSkipsBlankLinesAndReportsBadLine) {
  const GroupPartition p = GroupPartition::single(4);
  std::istringstream good("0101\n\n1111\r\n");
  EXPECT_EQ(bin_experimental_patterns(good, p).sample_count, 2u);
  std::istringstream bad("0101\n0121\n");
  try {
    bin_experimental_patterns(bad, p);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream short_line("0101\n\n011\n");
  EXPECT_THROW(bin_experimental_patterns(short_line, p), InputError);
}

}  // namespace
}  // namespace phasegbs
