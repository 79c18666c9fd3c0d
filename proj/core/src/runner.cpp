#include "phasegbs/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "phasegbs/io.hpp"
#include "phasegbs/network.hpp"
#include "phasegbs/oracles.hpp"
#include "phasegbs/parallel.hpp"

namespace phasegbs {

namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ordered_json metadata(const RunConfig& c, double seconds) {
  ordered_json j;
  j["config"] = ordered_json::parse(emit_config(c));
  j["seed"] = c.seed;
  j["timings"] = {{"seconds", seconds}};
  return j;
}

// NaN and infinities are not JSON numbers; they are written as null.
ordered_json number(double x) {
  return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

ordered_json estimate_json(const Estimate& e) {
  return {{"value", number(e.value)}, {"std_error", number(e.std_error)}};
}

ordered_json distribution_summary(const GroupedDistribution& d) {
  ordered_json j;
  j["groups"] = d.partition.groups();
  j["extents"] = d.partition.extents();
  j["sample_count"] = d.sample_count;
  j["sum"] = d.sum();
  return j;
}

std::string csv_text(const GroupedDistribution& d, const RunConfig& c, const std::string& kind) {
  std::ostringstream out;
  const auto comments = provenance_comments(c, kind);
  write_distribution_csv(out, d, comments);
  return out.str();
}

std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
  return std::filesystem::path(c.out) / name;
}

SimulateResult simulate_model(const RunConfig& c) {
  const auto start = Clock::now();
  const SqueezerSpec spec = resolve_squeezers(c);
  const TransmissionMatrix t = resolve_transmission(c);
  const GroupPartition partition = resolve_partition(c, t.rows());
  const NetworkSampler sampler(spec, Ordering(c.ordering), t, c.seed);
  SimulateResult r{grouped_probability(sampler.source(resolve_layout(c)), partition), 0.0};
  r.seconds = seconds_since(start);
  return r;
}

}  // namespace

std::vector<std::string> provenance_comments(const RunConfig& c, const std::string& kind) {
  return {"phasegbs " + kind, "seed: " + std::to_string(c.seed), "config: " + emit_config(c, -1)};
}

SimulateResult run_simulate(const RunConfig& c) {
  validate_config(c);
  set_thread_count(c.threads);
  SimulateResult r = simulate_model(c);
  if (!c.out.empty()) {
    write_text_file(out_path(c, "distribution.csv"), csv_text(r.distribution, c, "distribution"));
    auto j = metadata(c, r.seconds);
    j["distribution"] = distribution_summary(r.distribution);
    write_text_file(out_path(c, "distribution.json"), j.dump(2) + "\n");
  }
  return r;
}

CompareResult run_compare(const RunConfig& c) {
  if (c.patterns.empty()) throw InputError("compare needs a click-pattern file ('patterns')");
  std::ifstream in(c.patterns);
  if (!in) throw InputError("cannot open " + c.patterns);
  try {
    return run_compare(c, in);
  } catch (const InputError& e) {
    throw InputError(c.patterns + ": " + e.what());
  }
}

CompareResult run_compare(const RunConfig& c, std::istream& patterns) {
  validate_config(c);
  set_thread_count(c.threads);
  const auto start = Clock::now();
  const TransmissionMatrix t = resolve_transmission(c);
  const GroupPartition partition = resolve_partition(c, t.rows());
  GroupedDistribution experiment = bin_experimental_patterns(patterns, partition);
  SimulateResult sim = simulate_model(c);

  CompareResult r{std::move(sim.distribution), std::move(experiment), {}, {}, {}, 0.0};
  r.comparison = compare_distributions(r.theory, r.experiment,
                                       ComparisonOptions{c.min_count, c.probability_cutoff});
  r.z = z_scores(r.comparison);
  r.chi = chi_square(r.comparison);
  r.seconds = seconds_since(start);

  if (!c.out.empty()) {
    write_text_file(out_path(c, "theory.csv"), csv_text(r.theory, c, "theory"));
    write_text_file(out_path(c, "experiment.csv"), csv_text(r.experiment, c, "experiment"));
    std::ostringstream cmp;
    write_comparison_csv(cmp, partition, r.comparison, r.z, provenance_comments(c, "comparison"));
    write_text_file(out_path(c, "comparison.csv"), cmp.str());

    auto j = metadata(c, r.seconds);
    ordered_json bins = ordered_json::array();
    ordered_json z = ordered_json::array();
    ordered_json excluded = ordered_json::array();
    for (std::size_t i = 0; i < r.comparison.bins.size(); ++i) {
      const auto& b = r.comparison.bins[i];
      const auto m = r.theory.multi_index(i);
      bins.push_back({{"m", m},
                      {"theory", number(b.theory)},
                      {"theory_error", number(b.theory_error)},
                      {"reference", number(b.reference)},
                      {"reference_error", number(b.reference_error)},
                      {"count", b.count ? number(*b.count) : ordered_json(nullptr)},
                      {"retained", static_cast<bool>(r.z.retained[i])}});
      z.push_back(number(r.z.z[i]));
      if (!r.z.retained[i]) excluded.push_back(m);
    }
    j["bins"] = std::move(bins);
    j["z"] = std::move(z);
    j["chi2"] = r.chi.chi2;
    j["k"] = r.chi.k;
    j["ratio"] = r.chi.ratio;
    j["excluded_bins"] = std::move(excluded);
    j["experiment_patterns"] = r.experiment.sample_count;
    write_text_file(out_path(c, "comparison.json"), j.dump(2) + "\n");
  }
  return r;
}

EntangleResult run_entangle(const RunConfig& c) {
  validate_config(c);
  set_thread_count(c.threads);
  const auto start = Clock::now();
  const SqueezerSpec spec = resolve_squeezers(c);
  const TransmissionMatrix t = resolve_transmission(c);
  const NetworkSampler sampler(spec, Ordering(c.ordering), t, c.seed);
  EntangleResult r{evaluate_witness(sampler.source(resolve_layout(c)), t.rows()), 0.0};
  r.seconds = seconds_since(start);

  if (!c.out.empty()) {
    const auto& w = r.report;
    std::ostringstream csv;
    for (const auto& line : provenance_comments(c, "witness")) csv << "# " << line << '\n';
    csv << "modes,var_u,var_u_error,var_v,var_v_error,product,product_error,sum,sum_error,"
           "threshold_product,threshold_sum,pass_product,pass_sum\n";
    csv << w.modes << ',' << format_number(w.var_u.value) << ',' << format_number(w.var_u.std_error)
        << ',' << format_number(w.var_v.value) << ',' << format_number(w.var_v.std_error) << ','
        << format_number(w.product.value) << ',' << format_number(w.product.std_error) << ','
        << format_number(w.sum.value) << ',' << format_number(w.sum.std_error) << ','
        << format_number(w.threshold_product) << ',' << format_number(w.threshold_sum) << ','
        << (w.pass_product ? 1 : 0) << ',' << (w.pass_sum ? 1 : 0) << '\n';
    write_text_file(out_path(c, "witness.csv"), csv.str());

    auto j = metadata(c, r.seconds);
    j["witness"] = {{"modes", w.modes},
                    {"var_u", estimate_json(w.var_u)},
                    {"var_v", estimate_json(w.var_v)},
                    {"product", estimate_json(w.product)},
                    {"sum", estimate_json(w.sum)},
                    {"threshold_product", w.threshold_product},
                    {"threshold_sum", w.threshold_sum},
                    {"pass_product", w.pass_product},
                    {"pass_sum", w.pass_sum}};
    write_text_file(out_path(c, "witness.json"), j.dump(2) + "\n");
  }
  return r;
}

OracleResult run_oracle(const RunConfig& c) {
  validate_config(c);
  set_thread_count(c.threads);
  const auto start = Clock::now();
  const SqueezerSpec spec = resolve_squeezers(c);
  const TransmissionMatrix t = resolve_transmission(c);
  const GroupPartition partition = resolve_partition(c, t.rows());

  OracleResult r{GroupedDistribution(partition), 0.0, 0.0};
  if (c.oracle_method == "fock") {
    const FockOracleResult fock = fock_truncation_oracle(spec, t, c.photon_cutoff);
    r.norm_deficit = fock.norm_deficit;
    for (std::size_t mask = 0; mask < fock.pattern_probabilities.size(); ++mask) {
      std::vector<std::size_t> m;
      for (const auto& g : partition.groups()) {
        std::size_t clicks = 0;
        for (std::size_t i : g) clicks += (mask >> i) & 1U;
        m.push_back(clicks);
      }
      r.distribution.probability[r.distribution.flat_index(m)] += fock.pattern_probabilities[mask];
    }
  } else {
    r.distribution = exact_grouped_distribution(output_gaussian_moments(spec, t), partition);
  }
  r.seconds = seconds_since(start);

  if (!c.out.empty()) {
    write_text_file(out_path(c, "oracle.csv"), csv_text(r.distribution, c, "oracle"));
    auto j = metadata(c, r.seconds);
    j["method"] = c.oracle_method;
    j["norm_deficit"] = r.norm_deficit;
    j["distribution"] = distribution_summary(r.distribution);
    write_text_file(out_path(c, "oracle.json"), j.dump(2) + "\n");
  }
  return r;
}

}  // namespace phasegbs
