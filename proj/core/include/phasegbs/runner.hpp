#pragma once

#include <istream>
#include <string>
#include <vector>

#include "phasegbs/clicks.hpp"
#include "phasegbs/config.hpp"
#include "phasegbs/quadrature.hpp"
#include "phasegbs/validation.hpp"

namespace phasegbs {

/// Output files (when `config.out` is set) embed the resolved config and
/// seed. CSV files depend only on the config; wall-clock timings go to the
/// JSON metadata alone.

struct SimulateResult {
  GroupedDistribution distribution;
  double seconds = 0.0;
};

/// Positive-P grouped click distribution.
/// Writes distribution.csv and distribution.json.
SimulateResult run_simulate(const RunConfig& config);

struct CompareResult {
  GroupedDistribution theory;
  GroupedDistribution experiment;
  BinnedComparison comparison;
  ZScores z;
  ChiSquare chi;
  double seconds = 0.0;
};

/// Simulates the configured model and compares it with measured patterns
/// (`config.patterns`, or the given stream). Writes theory.csv,
/// experiment.csv, comparison.csv and comparison.json.
CompareResult run_compare(const RunConfig& config);
CompareResult run_compare(const RunConfig& config, std::istream& patterns);

struct EntangleResult {
  WitnessReport report;
  double seconds = 0.0;
};

/// Variance witness on the configured network. Writes witness.csv and
/// witness.json.
EntangleResult run_entangle(const RunConfig& config);

struct OracleResult {
  GroupedDistribution distribution;
  double norm_deficit = 0.0;
  double seconds = 0.0;
};

/// Exact grouped distribution from Gaussian moments (M <= 16) or Fock-space
/// truncation (M <= 3). Writes oracle.csv and oracle.json.
OracleResult run_oracle(const RunConfig& config);

/// Comment lines placed at the top of every CSV output.
std::vector<std::string> provenance_comments(const RunConfig& config, const std::string& kind);

}  // namespace phasegbs
