#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phasegbs/network.hpp"
#include "phasegbs/phase_space.hpp"
#include "phasegbs/types.hpp"

namespace phasegbs {

/// Quadrature moment < prod_j (x_j^{theta_j})^{m_j} > over the first
/// angles.size() modes, with x^theta = a e^{-i theta} + a^dagger e^{i theta}.
struct QuadratureSpec {
  std::vector<double> angles;
  std::vector<unsigned> powers;

  unsigned order() const;
  void validate(std::size_t mode_count) const;
};

/// Symmetrically ordered quadrature moment. Wigner ensembles are used
/// directly; other orderings accept moments up to second order and add the
/// (1 - 2 sigma) same-mode correction.
Estimate quadrature_correlation(const PhaseSpaceEnsemble& ensemble,
                                const QuadratureSpec& spec);

/// One term weight * x_mode^angle of a linear quadrature combination.
struct QuadratureTerm {
  std::size_t mode = 0;
  double angle = 0.0;
  double weight = 1.0;
};

/// Symmetric-ordered variance of sum_t weight_t x_{mode_t}^{angle_t}, with the
/// ordering correction (1 - 2 sigma) sum_{same mode} w w' cos(angle - angle').
Estimate quadrature_variance(const BlockSource& source,
                             std::span<const QuadratureTerm> terms);
Estimate quadrature_variance(const PhaseSpaceEnsemble& ensemble,
                             std::span<const QuadratureTerm> terms);

/// Beam-splitter chain spreading two-mode EPR correlations over M modes.
/// Throws InputError for M < 2.
TransmissionMatrix build_entanglement_unitary(std::size_t modes);

/// Orthogonally squeezed inputs for the chain: r_1 = +r (p-squeezed),
/// r_2 = -r (x-squeezed), the remaining modes vacuum.
SqueezerSpec epr_chain_input_spec(std::size_t modes, double r);

/// Variances of u = x_1 - (M-1)^{-1/2} sum_{i>1} x_i and
/// v = p_1 + (M-1)^{-1/2} sum_{i>1} p_i with both M-partite criteria:
/// (du)(dv) < 2/(M-1) and du^2 + dv^2 < 4/(M-1).
struct WitnessReport {
  std::size_t modes = 0;
  Estimate var_u;
  Estimate var_v;
  Estimate product;  // sqrt(var_u) * sqrt(var_v)
  Estimate sum;      // var_u + var_v
  double threshold_product = 0.0;
  double threshold_sum = 0.0;
  bool pass_product = false;
  bool pass_sum = false;
};

WitnessReport evaluate_witness(const BlockSource& source, std::size_t modes);
WitnessReport evaluate_witness(const PhaseSpaceEnsemble& ensemble, std::size_t modes);

}  // namespace phasegbs
