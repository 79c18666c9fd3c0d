#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phasegbs/phase_space.hpp"
#include "phasegbs/types.hpp"

namespace phasegbs {

/// Disjoint detector groups S_1..S_d over M output modes.
class GroupPartition {
 public:
  GroupPartition(std::vector<std::vector<std::size_t>> groups, std::size_t mode_count);

  /// Consecutive groups of the given sizes starting at mode 0.
  static GroupPartition sequential(std::span<const std::size_t> sizes,
                                   std::size_t mode_count);
  /// All M modes in one group (total-count distribution).
  static GroupPartition single(std::size_t mode_count);

  std::size_t mode_count() const { return modes_; }
  std::size_t group_count() const { return groups_.size(); }
  const std::vector<std::size_t>& group(std::size_t j) const { return groups_.at(j); }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }

  /// Tensor extents M_j + 1.
  std::vector<std::size_t> extents() const;
  /// Product of the extents, saturating at SIZE_MAX.
  std::size_t tensor_size() const;

  bool operator==(const GroupPartition&) const = default;

 private:
  std::vector<std::vector<std::size_t>> groups_;
  std::size_t modes_;
};

/// Probabilities of m = (m_1..m_d) clicks in the groups of a partition,
/// stored row-major (last group fastest). Estimates are not clipped and may
/// be slightly negative within their errors.
struct GroupedDistribution {
  GroupPartition partition;
  std::vector<double> probability;
  std::vector<double> std_error;
  /// Imaginary part of the estimator; zero within error for a valid ensemble.
  std::vector<double> imag;
  /// Raw counts when the distribution was binned from measured patterns.
  std::optional<std::vector<double>> counts;
  std::size_t sample_count = 0;

  explicit GroupedDistribution(GroupPartition p);

  std::size_t size() const { return probability.size(); }
  std::size_t flat_index(std::span<const std::size_t> m) const;
  std::vector<std::size_t> multi_index(std::size_t flat) const;
  double at(std::initializer_list<std::size_t> m) const;
  double sum() const;

  /// Sums out every group not listed in `keep` (in the given order).
  GroupedDistribution marginal(std::span<const std::size_t> keep) const;
};

/// Per-sample click projector weights pi(0) = exp(-alpha beta),
/// pi(1) = 1 - pi(0). Only meaningful in the positive-P representation.
struct ClickWeights {
  CMatrix no_click;  // modes x samples
  CMatrix click;
};

ClickWeights click_weights(const SubEnsemble& block, Ordering ordering);

struct GroupedOptions {
  std::size_t max_tensor_entries = 100'000'000;
};

/// Grouped click probabilities from the d-dimensional Fourier observable
///   G~(k) = < prod_j prod_{i in S_j} (pi_i(0) + pi_i(1) exp(-i k_j theta_j)) >,
///   theta_j = 2 pi / (M_j + 1),
/// followed by an inverse DFT. Errors come from the spread of the
/// sub-ensemble estimates.
GroupedDistribution grouped_probability(const BlockSource& source,
                                        const GroupPartition& partition,
                                        const GroupedOptions& options = {});
GroupedDistribution grouped_probability(const PhaseSpaceEnsemble& ensemble,
                                        const GroupPartition& partition,
                                        const GroupedOptions& options = {});

/// <pi_j(1)>: the click probability of output channel j.
Estimate marginal_click_probability(const BlockSource& source, std::size_t mode);
Estimate marginal_click_probability(const PhaseSpaceEnsemble& ensemble, std::size_t mode);

/// Normally ordered moment < prod_j (n'_j)^{c_j} > with n'_j = alpha'_j beta'_j.
ComplexEstimate glauber_moment(const PhaseSpaceEnsemble& ensemble,
                               std::span<const unsigned> exponents);

/// Bins measured click patterns (one '0'/'1' string per pattern) into the
/// partition. Errors are sqrt(f) / N. Throws InputError naming the 1-based
/// line of the first malformed pattern.
GroupedDistribution bin_experimental_patterns(std::span<const std::string> patterns,
                                              const GroupPartition& partition);
GroupedDistribution bin_experimental_patterns(std::istream& in,
                                              const GroupPartition& partition);

}  // namespace phasegbs
