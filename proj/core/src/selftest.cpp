#include "phasegbs/selftest.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <sstream>

#include "phasegbs/clicks.hpp"
#include "phasegbs/config.hpp"
#include "phasegbs/network.hpp"
#include "phasegbs/oracles.hpp"
#include "phasegbs/quadrature.hpp"
#include "phasegbs/validation.hpp"

namespace phasegbs {

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string describe(double value, double expected, double error) {
  std::ostringstream s;
  s.precision(6);
  s << "got " << value << ", expected " << expected << ", error " << error;
  return s.str();
}

Outcome single_mode_click(std::uint64_t seed) {
  const TransmissionMatrix t = TransmissionMatrix::identity(1);
  const NetworkSampler sampler(SqueezerSpec::uniform(1, 1, 1.0), Ordering::positive_p(), t, seed);
  const Estimate e = marginal_click_probability(sampler.source({100, 1000}), 0);
  const double exact = 1.0 - 1.0 / std::cosh(1.0);
  return {std::abs(e.value - exact) <= 5.0 * e.std_error, describe(e.value, exact, e.std_error)};
}

Outcome vacuum_never_clicks(std::uint64_t seed) {
  const NetworkSampler sampler(SqueezerSpec::uniform(4, 0, 0.0), Ordering::positive_p(),
                               random_unitary(4, seed), seed);
  const Estimate e = marginal_click_probability(sampler.source({10, 100}), 2);
  return {e.value == 0.0, describe(e.value, 0.0, e.std_error)};
}

Outcome normalisation(std::uint64_t seed) {
  const std::vector<std::size_t> sizes{4, 4};
  const NetworkSampler sampler(SqueezerSpec::uniform(8, 4, 1.0), Ordering::positive_p(),
                               random_unitary(8, seed), seed);
  const GroupedDistribution d =
      grouped_probability(sampler.source({10, 500}), GroupPartition::sequential(sizes, 8));
  return {std::abs(d.sum() - 1.0) <= 1e-10, describe(d.sum(), 1.0, 0.0)};
}

Outcome oracle_agreement() {
  CMatrix bs(2, 2);
  const double h = std::sqrt(0.5);
  bs << h, h, h, -h;
  const TransmissionMatrix t(bs, true);
  const SqueezerSpec spec = SqueezerSpec::uniform(2, 2, 0.6, 0.3);
  const auto fock = fock_truncation_oracle(spec, t, 40);
  const auto gauss = exact_pattern_probabilities(output_gaussian_moments(spec, t));
  double worst = 0.0;
  for (std::size_t i = 0; i < gauss.size(); ++i) {
    worst = std::max(worst, std::abs(gauss[i] - fock.pattern_probabilities[i]));
  }
  return {worst <= 1e-6, describe(worst, 0.0, 1e-6)};
}

Outcome total_count_against_exact(std::uint64_t seed) {
  const SqueezerSpec spec = SqueezerSpec::uniform(6, 3, 0.8);
  const TransmissionMatrix t = random_unitary(6, seed);
  const NetworkSampler sampler(spec, Ordering::positive_p(), t, seed);
  const GroupedDistribution d =
      grouped_probability(sampler.source({100, 1000}), GroupPartition::single(6));
  const auto exact = exact_total_count_distribution(output_gaussian_moments(spec, t));
  ComparisonOptions opts;
  opts.probability_cutoff = 1e-5;
  const ChiSquare chi = chi_square(compare_with_exact(d, exact, opts));
  return {chi.ratio <= 3.0, "chi2/k = " + std::to_string(chi.ratio) + " over k = " +
                                std::to_string(chi.k)};
}

Outcome witness(std::uint64_t seed) {
  const std::size_t modes = 4;
  const NetworkSampler sampler(epr_chain_input_spec(modes, 1.0), Ordering::wigner(),
                               build_entanglement_unitary(modes), seed);
  const WitnessReport w = evaluate_witness(sampler.source({50, 2000}), modes);
  const double expected = 2.0 * std::exp(-2.0);
  const bool ok = std::abs(w.var_u.value - expected) <= 5.0 * w.var_u.std_error &&
                  std::abs(w.var_v.value - expected) <= 5.0 * w.var_v.std_error &&
                  w.pass_product && w.pass_sum;
  return {ok, describe(w.var_u.value, expected, w.var_u.std_error)};
}

Outcome config_round_trip() {
  RunConfig c = RunConfig::defaults(Task::compare);
  c.group_sizes = {8, 8};
  c.transmission.kind = TransmissionSource::Kind::scaled;
  c.transmission.factor = 0.95;
  c.transmission.inner = {TransmissionSource{}};
  c.decoherence = 0.0932;
  const RunConfig back = parse_config(emit_config(c));
  return {back == c, back == c ? "identical" : "differs"};
}

Outcome thermal_invariance(std::uint64_t seed) {
  const TransmissionMatrix t = random_unitary(5, seed);
  const GaussianMoments g = output_gaussian_moments(SqueezerSpec::uniform(5, 5, 1.0, 1.0), t);
  const double n = std::sinh(1.0) * std::sinh(1.0);
  const double residual = std::max(
      (g.normal - n * CMatrix::Identity(5, 5)).cwiseAbs().maxCoeff(), g.anomalous.cwiseAbs().maxCoeff());
  return {residual <= 1e-12, describe(residual, 0.0, 1e-12)};
}

}  // namespace

bool SelftestReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

SelftestReport run_selftest(std::uint64_t seed) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> suite{
      {"single-mode click probability", [&] { return single_mode_click(seed); }},
      {"vacuum never clicks", [&] { return vacuum_never_clicks(seed); }},
      {"grouped distribution normalisation", [&] { return normalisation(seed); }},
      {"Gaussian and Fock oracles agree", [] { return oracle_agreement(); }},
      {"total counts match the exact distribution", [&] { return total_count_against_exact(seed); }},
      {"EPR chain witness", [&] { return witness(seed); }},
      {"config round trip", [] { return config_round_trip(); }},
      {"thermal states are unitarily invariant", [&] { return thermal_invariance(seed); }},
  };
  SelftestReport report;
  for (const auto& [name, check] : suite) {
    try {
      const Outcome o = check();
      report.checks.push_back({name, o.passed, o.detail});
    } catch (const std::exception& e) {
      report.checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  }
  return report;
}

}  // namespace phasegbs
