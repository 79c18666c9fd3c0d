#include "phasegbs/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "phasegbs/clicks.hpp"

namespace phasegbs {

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::variance() const {
  if (n_ < 2) return std::numeric_limits<double>::quiet_NaN();
  return m2_ / static_cast<double>(n_ - 1);
}

double RunningStats::std_error() const {
  if (n_ < 2) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(variance() / static_cast<double>(n_));
}

Estimate subensemble_stats(std::span<const double> means) {
  if (means.size() < 2) {
    throw InputError("sub-ensemble statistics need at least two sub-ensembles");
  }
  RunningStats stats;
  for (double m : means) stats.add(m);
  return {stats.mean(), stats.std_error()};
}

bool BinnedComparison::retained(std::size_t i) const {
  const ComparisonBin& b = bins.at(i);
  if (b.count && *b.count < min_count) return false;
  if (probability_cutoff > 0.0 && b.reference < probability_cutoff) return false;
  return true;
}

std::size_t BinnedComparison::retained_count() const {
  std::size_t k = 0;
  for (std::size_t i = 0; i < bins.size(); ++i) k += retained(i) ? 1 : 0;
  return k;
}

BinnedComparison compare_distributions(const GroupedDistribution& theory,
                                       const GroupedDistribution& reference,
                                       const ComparisonOptions& options) {
  if (theory.partition.extents() != reference.partition.extents()) {
    throw InputError("distributions to compare have different shapes");
  }
  BinnedComparison cmp;
  cmp.min_count = options.min_count;
  cmp.probability_cutoff = options.probability_cutoff;
  cmp.bins.resize(theory.size());
  for (std::size_t i = 0; i < theory.size(); ++i) {
    ComparisonBin& b = cmp.bins[i];
    b.theory = theory.probability[i];
    b.theory_error = theory.std_error[i];
    b.reference = reference.probability[i];
    b.reference_error = reference.std_error[i];
    if (reference.counts) b.count = (*reference.counts)[i];
  }
  return cmp;
}

BinnedComparison compare_with_exact(const GroupedDistribution& theory,
                                    std::span<const double> exact,
                                    const ComparisonOptions& options) {
  if (exact.size() != theory.size()) {
    throw InputError("exact distribution has " + std::to_string(exact.size()) +
                     " bins, estimate has " + std::to_string(theory.size()));
  }
  BinnedComparison cmp;
  cmp.min_count = options.min_count;
  cmp.probability_cutoff = options.probability_cutoff;
  cmp.bins.resize(theory.size());
  for (std::size_t i = 0; i < theory.size(); ++i) {
    cmp.bins[i] = {theory.probability[i], theory.std_error[i], exact[i], 0.0, std::nullopt};
  }
  return cmp;
}

ZScores z_scores(const BinnedComparison& comparison) {
  ZScores out;
  out.z.assign(comparison.bins.size(), 0.0);
  out.retained.assign(comparison.bins.size(), false);
  for (std::size_t i = 0; i < comparison.bins.size(); ++i) {
    if (!comparison.retained(i)) continue;
    out.retained[i] = true;
    const ComparisonBin& b = comparison.bins[i];
    const double diff = b.theory - b.reference;
    const double sigma =
        std::sqrt(b.theory_error * b.theory_error + b.reference_error * b.reference_error);
    if (!std::isfinite(sigma)) {
      throw NumericalError("bin " + std::to_string(i) + " has a non-finite error");
    }
    if (sigma == 0.0) {
      if (diff != 0.0) {
        throw NumericalError("bin " + std::to_string(i) +
                             " has zero combined error but a nonzero difference");
      }
      continue;
    }
    out.z[i] = diff / sigma;
  }
  return out;
}

ChiSquare chi_square(const BinnedComparison& comparison) {
  const ZScores z = z_scores(comparison);
  std::vector<double> squares;
  for (std::size_t i = 0; i < z.z.size(); ++i) {
    if (z.retained[i]) squares.push_back(z.z[i] * z.z[i]);
  }
  // Summing in ascending order makes the result independent of bin order.
  std::sort(squares.begin(), squares.end());
  ChiSquare out;
  for (double s : squares) out.chi2 += s;
  out.k = squares.size();
  if (out.k == 0) throw InputError("no bins survive the cutoffs; chi-squared is undefined");
  out.ratio = out.chi2 / static_cast<double>(out.k);
  return out;
}

}  // namespace phasegbs
