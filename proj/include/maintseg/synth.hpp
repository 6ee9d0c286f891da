#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "maintseg/core.hpp"
#include "maintseg/ingest.hpp"

namespace maintseg {

/// Generator settings for a synthetic corpus. Daily event counts are Poisson
/// with piecewise-constant rates; the planted failure precursor multiplies
/// the distribution error and warning rates from `change_offset_days` before
/// the end of the cycle.
struct SynthSpec {
  std::uint64_t seed = 1;
  std::size_t n_cycles = 50;
  std::size_t max_cycles_per_atm = 3;
  std::size_t min_days = 60;
  std::size_t max_days = 180;
  double change_offset_days = 10.0;
  double period_hours = 24.0;
  /// Extra activity regimes before the precursor (OK-volume changes only).
  std::size_t background_regimes = 2;
  double ok_rate = 200.0;         // distribution OK events per day
  double error_rate = 2.0;        // distribution errors per day, baseline
  double warning_rate = 2.0;
  double precursor_factor = 25.0; // multiplier on error/warning rates
  double withdrawal_rate = 150.0;

  static SynthSpec from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

/// Deterministic for a given spec (same seed, same corpus). Cycles are built
/// through build_features with CodeGroupingConfig::atm_default().
std::vector<LifeCycle> synthesize(const SynthSpec& spec);

}  // namespace maintseg
