#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "phasegbs/clicks.hpp"
#include "phasegbs/network.hpp"
#include "phasegbs/phase_space.hpp"
#include "phasegbs/types.hpp"

namespace phasegbs {

/// Second moments of a zero-mean Gaussian state:
/// normal(i, j) = <a_i^dagger a_j>, anomalous(i, j) = <a_i a_j>.
struct GaussianMoments {
  CMatrix normal;
  CMatrix anomalous;

  std::size_t mode_count() const { return static_cast<std::size_t>(normal.rows()); }
};

/// Moments after the network: A' = conj(T) diag(n) T^T, C' = T diag(m) T^T.
/// Inputs past the last squeezer are vacuum, up to T's column count.
GaussianMoments output_gaussian_moments(const SqueezerSpec& spec,
                                        const TransmissionMatrix& t);

/// Probability that every mode in `modes` is empty, 1 / sqrt(det Sigma_Q),
/// where Sigma_Q = [[A^T + I, C], [C^*, A + I]] restricted to the modes.
/// An empty set gives 1. Throws NumericalError if Sigma_Q is not positive
/// definite.
double vacuum_probability(const GaussianMoments& moments,
                          std::span<const std::size_t> modes);

/// Probability that exactly the modes in `clicks` fire among `measured`,
/// by inclusion-exclusion over subsets of `clicks` (at most 20 of them).
double torontonian_probability(const GaussianMoments& moments,
                               std::span<const std::size_t> clicks,
                               std::span<const std::size_t> measured);

inline constexpr std::size_t kMaxExactModes = 16;

/// Probability of every click pattern over all M <= 16 modes, indexed by the
/// bit mask of clicking modes (bit j = mode j). Vacuum probabilities of all
/// 2^M subsets are computed once and combined with a fast Moebius transform.
std::vector<double> exact_pattern_probabilities(const GaussianMoments& moments);

/// Probability of m total clicks, m = 0..M, for M <= 16.
std::vector<double> exact_total_count_distribution(const GaussianMoments& moments);

/// Exact grouped distribution for any partition of M <= 16 modes.
GroupedDistribution exact_grouped_distribution(const GaussianMoments& moments,
                                               const GroupPartition& partition);

/// Product of Binomial(M_j, p) laws: grouped counts of independent modes
/// that each click with probability p.
GroupedDistribution analytic_iid_distribution(double p_click,
                                              std::span<const std::size_t> sizes);

/// Exact click statistics of M <= 3 modes from explicit Fock-space density
/// matrices truncated at `photon_cutoff` total photons.
struct FockOracleResult {
  std::vector<double> pattern_probabilities;  // indexed like exact_pattern_probabilities
  double norm_deficit = 0.0;                  // probability lost to truncation
};

inline constexpr std::size_t kMaxFockModes = 3;

/// Inputs are single-mode Gaussian states with moments (n_j, m_j),
/// built as squeezed thermal states; T is applied as
/// unitary, per-mode pure loss, unitary (its singular value decomposition).
/// Throws NumericalError if the truncation deficit exceeds `max_deficit`.
FockOracleResult fock_truncation_oracle(const SqueezerSpec& spec,
                                        const TransmissionMatrix& t,
                                        std::size_t photon_cutoff,
                                        double max_deficit = 1e-8);

}  // namespace phasegbs
