#include <gtest/gtest.h>

#include "synthetic.hpp"

namespace phasegbs::testing {
namespace {

TEST(SyntheticPatterns, FollowTheGivenLaw) {
  const std::vector<double> p{0.1, 0.2, 0.0, 0.7};
  const auto pats = sample_patterns(p, 2, 20000, 3);
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& s : pats) {
    ASSERT_EQ(s.size(), 2u);
    counts[(s[0] == '1' ? 1 : 0) + (s[1] == '1' ? 2 : 0)]++;
  }
  EXPECT_EQ(counts[2], 0u);
  EXPECT_NEAR(counts[3] / 20000.0, 0.7, 0.02);
  EXPECT_NEAR(counts[1] / 20000.0, 0.2, 0.02);
  EXPECT_EQ(sample_patterns(p, 2, 50, 3), sample_patterns(p, 2, 50, 3));
  EXPECT_THROW(sample_patterns(p, 3, 1, 1), std::invalid_argument);
  EXPECT_EQ(join_lines(std::vector<std::string>{"01", "10"}), "01\n10\n");
}

}  // namespace
}  // namespace phasegbs::testing
