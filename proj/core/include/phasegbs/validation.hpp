#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "phasegbs/types.hpp"

namespace phasegbs {

struct GroupedDistribution;

/// Welford accumulator over sub-ensemble means, fed in a fixed order.
class RunningStats {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Sample variance with the n - 1 denominator.
  double variance() const;
  /// Standard error of the mean, sqrt(variance / n).
  double std_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Grand mean and standard error across N_s >= 2 sub-ensemble means.
Estimate subensemble_stats(std::span<const double> means);

struct ComparisonBin {
  double theory = 0.0;
  double theory_error = 0.0;
  double reference = 0.0;
  double reference_error = 0.0;
  std::optional<double> count;  // measured frequency f_i, when available
};

/// Paired theory / reference probabilities. A bin is retained when its count
/// (if any) is at least `min_count` and the reference probability is at least
/// `probability_cutoff`.
struct BinnedComparison {
  std::vector<ComparisonBin> bins;
  double min_count = 10.0;
  double probability_cutoff = 0.0;

  bool retained(std::size_t i) const;
  std::size_t retained_count() const;
};

struct ComparisonOptions {
  double min_count = 10.0;
  double probability_cutoff = 0.0;
};

/// Pairs two distributions over the same partition, bin by bin.
BinnedComparison compare_distributions(const GroupedDistribution& theory,
                                       const GroupedDistribution& reference,
                                       const ComparisonOptions& options = {});

/// Pairs an estimate with exact probabilities (zero reference error).
BinnedComparison compare_with_exact(const GroupedDistribution& theory,
                                    std::span<const double> exact,
                                    const ComparisonOptions& options = {});

struct ZScores {
  std::vector<double> z;        // 0 for excluded bins
  std::vector<bool> retained;
};

/// z_i = (P_i - P^e_i) / sqrt(sigma_e,i^2 + sigma_s,i^2).
/// Throws NumericalError for a retained bin with zero combined error but a
/// nonzero difference.
ZScores z_scores(const BinnedComparison& comparison);

struct ChiSquare {
  double chi2 = 0.0;
  std::size_t k = 0;
  double ratio = 0.0;  // chi2 / k
};

/// Sum of z_i^2 over retained bins. Throws InputError if no bin is retained.
ChiSquare chi_square(const BinnedComparison& comparison);

}  // namespace phasegbs
