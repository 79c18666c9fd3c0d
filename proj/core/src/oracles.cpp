#include "phasegbs/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace phasegbs {

GaussianMoments output_gaussian_moments(const SqueezerSpec& spec, const TransmissionMatrix& t) {
  spec.validate();
  if (spec.mode_count() > t.cols()) {
    throw InputError("squeezer spec has " + std::to_string(spec.mode_count()) +
                     " modes but the transmission matrix only " + std::to_string(t.cols()) +
                     " inputs");
  }
  const InputMoments in = derive_moments(spec);
  const auto cols = static_cast<Eigen::Index>(t.cols());
  RVector n = RVector::Zero(cols);
  RVector m = RVector::Zero(cols);
  for (std::size_t j = 0; j < spec.mode_count(); ++j) {
    n(static_cast<Eigen::Index>(j)) = in.photon_number[j];
    m(static_cast<Eigen::Index>(j)) = in.coherence[j];
  }
  const CMatrix& tm = t.matrix();
  GaussianMoments g;
  g.normal = tm.conjugate() * n.asDiagonal() * tm.transpose();
  g.anomalous = tm * m.asDiagonal() * tm.transpose();
  return g;
}

double vacuum_probability(const GaussianMoments& moments, std::span<const std::size_t> modes) {
  const auto k = static_cast<Eigen::Index>(modes.size());
  if (k == 0) return 1.0;
  const auto total = moments.mode_count();
  for (std::size_t i : modes) {
    if (i >= total) throw InputError("vacuum probability: mode index out of range");
  }
  CMatrix q(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto ia = static_cast<Eigen::Index>(modes[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < k; ++b) {
      const auto ib = static_cast<Eigen::Index>(modes[static_cast<std::size_t>(b)]);
      const double delta = a == b ? 1.0 : 0.0;
      q(a, b) = moments.normal(ib, ia) + delta;
      q(a, k + b) = moments.anomalous(ia, ib);
      q(k + a, b) = std::conj(moments.anomalous(ia, ib));
      q(k + a, k + b) = moments.normal(ia, ib) + delta;
    }
  }
  Eigen::LLT<CMatrix> llt(q);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Husimi covariance is not positive definite (unphysical moments)");
  }
  double log_det = 0.0;
  const CMatrix& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < 2 * k; ++i) log_det += 2.0 * std::log(l(i, i).real());
  return std::exp(-0.5 * log_det);
}

double torontonian_probability(const GaussianMoments& moments,
                               std::span<const std::size_t> clicks,
                               std::span<const std::size_t> measured) {
  if (clicks.size() > 20) {
    throw InputError("torontonian_probability is limited to 20 clicking modes");
  }
  for (std::size_t c : clicks) {
    if (std::find(measured.begin(), measured.end(), c) == measured.end()) {
      throw InputError("click mode " + std::to_string(c) + " is not in the measured set");
    }
  }
  std::vector<std::size_t> base;
  for (std::size_t s : measured) {
    if (std::find(clicks.begin(), clicks.end(), s) == clicks.end()) base.push_back(s);
  }
  const std::size_t subsets = std::size_t{1} << clicks.size();
  double total = 0.0;
  std::vector<std::size_t> vac;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    vac = base;
    for (std::size_t b = 0; b < clicks.size(); ++b) {
      if (mask & (std::size_t{1} << b)) vac.push_back(clicks[b]);
    }
    const double sign = (std::popcount(mask) % 2 == 0) ? 1.0 : -1.0;
    total += sign * vacuum_probability(moments, vac);
  }
  return total;
}

std::vector<double> exact_pattern_probabilities(const GaussianMoments& moments) {
  const std::size_t m = moments.mode_count();
  if (m > kMaxExactModes) {
    throw InputError("exact click statistics are limited to " +
                     std::to_string(kMaxExactModes) + " modes, got " + std::to_string(m));
  }
  const std::size_t patterns = std::size_t{1} << m;
  const std::size_t full = patterns - 1;
  // h[W] = probability that every mode outside W is empty.
  std::vector<double> h(patterns);
  std::vector<std::size_t> vac;
  for (std::size_t w = 0; w < patterns; ++w) {
    vac.clear();
    const std::size_t empty = full & ~w;
    for (std::size_t j = 0; j < m; ++j) {
      if (empty & (std::size_t{1} << j)) vac.push_back(j);
    }
    h[w] = vacuum_probability(moments, vac);
  }
  // Moebius inversion over subsets: P(C) = sum_{W subset C} (-1)^{|C \ W|} h[W].
  for (std::size_t b = 0; b < m; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      if (mask & bit) h[mask] -= h[mask ^ bit];
    }
  }
  return h;
}

std::vector<double> exact_total_count_distribution(const GaussianMoments& moments) {
  const auto p = exact_pattern_probabilities(moments);
  std::vector<double> dist(moments.mode_count() + 1, 0.0);
  for (std::size_t mask = 0; mask < p.size(); ++mask) {
    dist[static_cast<std::size_t>(std::popcount(mask))] += p[mask];
  }
  return dist;
}

GroupedDistribution exact_grouped_distribution(const GaussianMoments& moments,
                                               const GroupPartition& partition) {
  if (partition.mode_count() != moments.mode_count()) {
    throw InputError("partition and moments disagree on the mode count");
  }
  const auto p = exact_pattern_probabilities(moments);
  GroupedDistribution out(partition);
  std::vector<std::size_t> masks;
  for (const auto& g : partition.groups()) {
    std::size_t mask = 0;
    for (std::size_t i : g) mask |= std::size_t{1} << i;
    masks.push_back(mask);
  }
  std::vector<std::size_t> m(masks.size());
  for (std::size_t pattern = 0; pattern < p.size(); ++pattern) {
    for (std::size_t j = 0; j < masks.size(); ++j) {
      m[j] = static_cast<std::size_t>(std::popcount(pattern & masks[j]));
    }
    out.probability[out.flat_index(m)] += p[pattern];
  }
  return out;
}

GroupedDistribution analytic_iid_distribution(double p_click,
                                              std::span<const std::size_t> sizes) {
  if (!(p_click >= 0.0 && p_click <= 1.0)) {
    throw InputError("click probability must lie in [0, 1]");
  }
  std::size_t total = 0;
  for (std::size_t s : sizes) total += s;
  GroupedDistribution out(GroupPartition::sequential(sizes, total));

  std::vector<std::vector<double>> pmf;
  for (std::size_t size : sizes) {
    std::vector<double> b(size + 1);
    for (std::size_t k = 0; k <= size; ++k) {
      const double choose = std::exp(std::lgamma(static_cast<double>(size) + 1.0) -
                                     std::lgamma(static_cast<double>(k) + 1.0) -
                                     std::lgamma(static_cast<double>(size - k) + 1.0));
      b[k] = choose * std::pow(p_click, static_cast<double>(k)) *
             std::pow(1.0 - p_click, static_cast<double>(size - k));
    }
    pmf.push_back(std::move(b));
  }
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const auto m = out.multi_index(flat);
    double v = 1.0;
    for (std::size_t j = 0; j < m.size(); ++j) v *= pmf[j][m[j]];
    out.probability[flat] = v;
  }
  return out;
}

}  // namespace phasegbs
