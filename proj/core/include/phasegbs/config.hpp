#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phasegbs/clicks.hpp"
#include "phasegbs/network.hpp"
#include "phasegbs/phase_space.hpp"

namespace phasegbs {

enum class Task { simulate, compare, entangle, oracle, selftest };

std::string_view task_name(Task task);
Task parse_task(std::string_view name);

/// Where the transmission matrix comes from.
///
///   {"kind": "identity"}
///   {"kind": "file", "path": "T.txt"}
///   {"kind": "random_unitary", "seed": 7}          seed defaults to one derived
///                                                  from the master seed
///   {"kind": "entanglement_chain"}
///   {"kind": "scaled", "factor": 0.95, "inner": {...}}
struct TransmissionSource {
  enum class Kind { identity, file, random_unitary, entanglement_chain, scaled };

  Kind kind = Kind::random_unitary;
  std::string path;
  std::optional<std::uint64_t> seed;
  double factor = 1.0;
  std::vector<TransmissionSource> inner;  // exactly one element for `scaled`

  bool operator==(const TransmissionSource&) const = default;
};

/// Everything a run needs. JSON keys match the field names; absent keys keep
/// the task defaults from `RunConfig::defaults`.
struct RunConfig {
  Task task = Task::simulate;
  std::size_t mode_count = 16;

  /// Squeezing: either `squeezing` on the first `squeezed_modes` inputs
  /// (all modes when unset) or per-mode values read from `squeezing_file`.
  double squeezing = 1.0;
  std::optional<std::size_t> squeezed_modes;
  std::string squeezing_file;
  double decoherence = 0.0;
  double ordering = 0.0;

  TransmissionSource transmission;

  /// Detector groups: explicit index sets, or consecutive sizes. Both empty
  /// means one group holding every output mode.
  std::vector<std::size_t> group_sizes;
  std::vector<std::vector<std::size_t>> groups;

  std::size_t samples = 1'200'000;
  std::size_t subensembles = 1200;
  std::uint64_t seed = 1;

  std::string patterns;     // compare: measured click patterns
  std::string out;          // output directory; empty writes nothing
  double min_count = 10.0;  // compare: f_min
  double probability_cutoff = 0.0;

  std::string oracle_method = "gaussian";  // "gaussian" or "fock"
  std::size_t photon_cutoff = 30;

  std::size_t threads = 0;  // 0 = hardware concurrency

  /// Defaults for a task; `entangle` starts from M = 100, r = 3, Wigner
  /// ordering and the entanglement chain.
  static RunConfig defaults(Task task);

  bool operator==(const RunConfig&) const = default;
};

/// Parses a JSON config. Throws InputError with the offending key for unknown
/// keys, wrong types, or values that fail `validate_config`.
RunConfig parse_config(std::string_view json, std::optional<Task> task = std::nullopt);
RunConfig load_config(const std::filesystem::path& path, std::optional<Task> task = std::nullopt);

/// Pretty-printed JSON with every field, so parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config, int indent = 2);

/// Checks cross-field consistency: mode counts, partition range, sample
/// divisibility, ordering in {0, 1/2, 1}. Throws InputError.
void validate_config(const RunConfig& config);

/// Materialises the inputs described by a config.
SqueezerSpec resolve_squeezers(const RunConfig& config);
TransmissionMatrix resolve_transmission(const RunConfig& config);
GroupPartition resolve_partition(const RunConfig& config, std::size_t output_modes);
EnsembleLayout resolve_layout(const RunConfig& config);

}  // namespace phasegbs
