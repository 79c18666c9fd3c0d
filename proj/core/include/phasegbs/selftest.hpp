#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace phasegbs {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;

  bool passed() const;
};

/// A quick end-to-end health check (a few seconds): estimator accuracy
/// against closed forms and exact oracles, normalisation, oracle agreement,
/// the entanglement witness and config round trips.
SelftestReport run_selftest(std::uint64_t seed = 1);

}  // namespace phasegbs
