#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tbn/model.hpp"

namespace tbn {

enum class EnumerationFilter { All, Saturated };

struct EnumerationBoundExceeded : std::runtime_error {
  EnumerationBoundExceeded(double estimate, uint64_t bound)
      : std::runtime_error("configuration count estimate " +
                           std::to_string(estimate) + " exceeds bound " +
                           std::to_string(bound)),
        estimate(estimate) {}
  double estimate;
};

// Exact number of configurations passing `filter`. Matchings factor over
// complementary type classes, so this is a closed-form product, saturating
// at overflow. Used as the refusal estimate before enumeration.
double estimate_configuration_count(const Tbn& t, EnumerationFilter filter);

constexpr uint64_t kDefaultEnumerationBound = 10'000'000;

// Visits each configuration exactly once, deterministically: recursion
// branches on the lowest-id undecided site of a limiting type. Throws
// EnumerationBoundExceeded when the estimate is over `bound`.
void enumerate_configurations(const Tbn& t, EnumerationFilter filter,
                              const std::function<void(const Configuration&)>& visit,
                              uint64_t bound = kDefaultEnumerationBound);

std::vector<Configuration> collect_configurations(
    const Tbn& t, EnumerationFilter filter,
    uint64_t bound = kDefaultEnumerationBound);

struct ConfigurationSummary {
  Configuration configuration;
  bool saturated = false;
  int polymer_count = 0;
};

struct EnumerationReport {
  uint64_t total = 0;
  uint64_t saturated = 0;
  uint64_t stable = 0;
  int max_polymers = 0;  // S(T): max over saturated configurations
  std::vector<ConfigurationSummary> samples;  // first `sample_limit` visited
};

EnumerationReport enumerate_report(const Tbn& t,
                                   EnumerationFilter filter = EnumerationFilter::All,
                                   size_t sample_limit = 0,
                                   uint64_t bound = kDefaultEnumerationBound);

struct OracleStableCount {
  int stable_polymer_count = 0;
  uint64_t stable_configurations = 0;
};

OracleStableCount oracle_stable_count(const Tbn& t,
                                      uint64_t bound = kDefaultEnumerationBound);

uint64_t count_saturated(const Tbn& t, uint64_t bound = kDefaultEnumerationBound);

// True iff some stable configuration leaves the monomer bound to no other.
bool oracle_stably_free(const Tbn& t, int monomer_id,
                        uint64_t bound = kDefaultEnumerationBound);

}  // namespace tbn
