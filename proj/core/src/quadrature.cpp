#include "phasegbs/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "phasegbs/parallel.hpp"
#include "phasegbs/validation.hpp"

namespace phasegbs {

unsigned QuadratureSpec::order() const {
  return std::accumulate(powers.begin(), powers.end(), 0U);
}

void QuadratureSpec::validate(std::size_t mode_count) const {
  if (angles.size() != powers.size()) {
    throw InputError("quadrature spec needs one angle per power");
  }
  if (angles.size() > mode_count) {
    throw InputError("quadrature spec addresses more modes than the ensemble has");
  }
  if (order() == 0) throw InputError("quadrature spec needs at least one positive power");
}

Estimate quadrature_correlation(const PhaseSpaceEnsemble& ensemble, const QuadratureSpec& spec) {
  spec.validate(ensemble.mode_count());
  const double sigma = ensemble.ordering().sigma();
  const unsigned order = spec.order();
  if (sigma != 0.5 && order > 2) {
    throw InputError("ordering corrections above second order are not implemented; use a "
                     "Wigner ensemble for order " + std::to_string(order));
  }
  double correction = 0.0;
  for (unsigned p : spec.powers) {
    if (p == 2) correction += 1.0 - 2.0 * sigma;
  }

  std::vector<Complex> rot(spec.angles.size());
  for (std::size_t j = 0; j < rot.size(); ++j) rot[j] = std::polar(1.0, -spec.angles[j]);

  RunningStats stats;
  for (const SubEnsemble& b : ensemble.blocks()) {
    Complex sum{};
    for (Eigen::Index s = 0; s < b.alpha.cols(); ++s) {
      Complex term(1.0, 0.0);
      for (std::size_t j = 0; j < rot.size(); ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        const Complex x = b.alpha(row, s) * rot[j] + b.beta(row, s) * std::conj(rot[j]);
        for (unsigned c = 0; c < spec.powers[j]; ++c) term *= x;
      }
      sum += term;
    }
    stats.add(sum.real() / static_cast<double>(b.alpha.cols()) + correction);
  }
  return {stats.mean(), stats.std_error()};
}

namespace {

struct PreparedCombination {
  std::vector<QuadratureTerm> terms;
  std::vector<Complex> rotation;
  double correction = 0.0;
};

PreparedCombination prepare(std::span<const QuadratureTerm> terms, std::size_t modes,
                            double sigma) {
  if (terms.empty()) throw InputError("quadrature combination has no terms");
  PreparedCombination c;
  c.terms.assign(terms.begin(), terms.end());
  for (const auto& t : terms) {
    if (t.mode >= modes) {
      throw InputError("quadrature term addresses mode " + std::to_string(t.mode) +
                       " of a " + std::to_string(modes) + "-mode ensemble");
    }
    c.rotation.push_back(std::polar(1.0, -t.angle));
  }
  for (const auto& a : terms) {
    for (const auto& b : terms) {
      if (a.mode == b.mode) c.correction += a.weight * b.weight * std::cos(a.angle - b.angle);
    }
  }
  c.correction *= 1.0 - 2.0 * sigma;
  return c;
}

/// Unbiased within-block variance of each combination (plus its ordering
/// correction).
std::vector<double> block_variances(const SubEnsemble& b,
                                    const std::vector<PreparedCombination>& combos) {
  const Eigen::Index n = b.alpha.cols();
  std::vector<double> out;
  for (const auto& c : combos) {
    CVector x = CVector::Zero(n);
    for (std::size_t t = 0; t < c.terms.size(); ++t) {
      const auto row = static_cast<Eigen::Index>(c.terms[t].mode);
      x += c.terms[t].weight * (b.alpha.row(row).transpose() * c.rotation[t] +
                                b.beta.row(row).transpose() * std::conj(c.rotation[t]));
    }
    const Complex mean = x.mean();
    const Complex second = x.array().square().mean();
    const double nn = static_cast<double>(n);
    const double bessel = n > 1 ? nn / (nn - 1.0) : 1.0;
    out.push_back((second - mean * mean).real() * bessel + c.correction);
  }
  return out;
}

}  // namespace

Estimate quadrature_variance(const BlockSource& source, std::span<const QuadratureTerm> terms) {
  const std::vector<PreparedCombination> combos{
      prepare(terms, source.mode_count(), source.ordering().sigma())};
  RunningStats stats;
  for_each_ordered(
      source.layout().subensembles,
      [&](std::size_t i) { return block_variances(source.block(i), combos).front(); },
      [&](std::size_t, double v) { stats.add(v); });
  return {stats.mean(), stats.std_error()};
}

Estimate quadrature_variance(const PhaseSpaceEnsemble& ensemble,
                             std::span<const QuadratureTerm> terms) {
  return quadrature_variance(BlockSource::from(ensemble), terms);
}

TransmissionMatrix build_entanglement_unitary(std::size_t modes) {
  if (modes < 2) throw InputError("the entanglement chain needs at least two modes");
  const std::size_t m = modes;
  // Reflection amplitudes R_0..R_M with R_0 = -1 and R_M = 1.
  std::vector<double> refl(m + 1), trans(m + 1);
  refl[0] = -1.0;
  refl[1] = std::sqrt(0.5);
  for (std::size_t j = 2; j <= m; ++j) {
    refl[j] = std::sqrt(1.0 / static_cast<double>(m - j + 1));
  }
  refl[m] = 1.0;
  for (std::size_t j = 0; j <= m; ++j) {
    trans[j] = std::sqrt(std::max(0.0, 1.0 - refl[j] * refl[j]));
  }

  const auto n = static_cast<Eigen::Index>(m);
  CMatrix u = CMatrix::Zero(n, n);
  for (std::size_t k = 1; k <= m; ++k) {
    if (k < m) u(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = trans[k];
    // U_kj = -R_k T_{k-1} ... T_j R_{j-1} for j <= k; the diagonal is -R_k R_{k-1}.
    double chain = 1.0;
    for (std::size_t j = k; j >= 1; --j) {
      if (j < k) chain *= trans[j];
      u(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(j - 1)) =
          -refl[k] * chain * refl[j - 1];
    }
  }
  return TransmissionMatrix(std::move(u), true);
}

SqueezerSpec epr_chain_input_spec(std::size_t modes, double r) {
  if (modes < 2) throw InputError("the entanglement chain needs at least two modes");
  SqueezerSpec spec;
  spec.squeezing.assign(modes, 0.0);
  spec.squeezing[0] = r;
  spec.squeezing[1] = -r;
  spec.validate();
  return spec;
}

WitnessReport evaluate_witness(const BlockSource& source, std::size_t modes) {
  if (modes < 2) throw InputError("the witness needs at least two modes");
  if (source.mode_count() != modes) {
    throw InputError("witness for " + std::to_string(modes) + " modes applied to a " +
                     std::to_string(source.mode_count()) + "-mode ensemble");
  }
  const double g = 1.0 / std::sqrt(static_cast<double>(modes - 1));
  const double p_angle = std::numbers::pi / 2.0;
  std::vector<QuadratureTerm> u{{0, 0.0, 1.0}}, v{{0, p_angle, 1.0}};
  for (std::size_t i = 1; i < modes; ++i) {
    u.push_back({i, 0.0, -g});
    v.push_back({i, p_angle, g});
  }
  const double sigma = source.ordering().sigma();
  const std::vector<PreparedCombination> combos{prepare(u, modes, sigma),
                                                prepare(v, modes, sigma)};

  RunningStats su, sv, sprod, ssum;
  for_each_ordered(
      source.layout().subensembles,
      [&](std::size_t i) { return block_variances(source.block(i), combos); },
      [&](std::size_t, std::vector<double>&& var) {
        su.add(var[0]);
        sv.add(var[1]);
        sprod.add(std::sqrt(std::max(var[0], 0.0) * std::max(var[1], 0.0)));
        ssum.add(var[0] + var[1]);
      });

  WitnessReport r;
  r.modes = modes;
  r.var_u = {su.mean(), su.std_error()};
  r.var_v = {sv.mean(), sv.std_error()};
  r.product = {std::sqrt(std::max(su.mean(), 0.0)) * std::sqrt(std::max(sv.mean(), 0.0)),
               sprod.std_error()};
  r.sum = {su.mean() + sv.mean(), ssum.std_error()};
  r.threshold_product = 2.0 / static_cast<double>(modes - 1);
  r.threshold_sum = 4.0 / static_cast<double>(modes - 1);
  r.pass_product = r.product.value < r.threshold_product;
  r.pass_sum = r.sum.value < r.threshold_sum;
  return r;
}

WitnessReport evaluate_witness(const PhaseSpaceEnsemble& ensemble, std::size_t modes) {
  return evaluate_witness(BlockSource::from(ensemble), modes);
}

}  // namespace phasegbs
