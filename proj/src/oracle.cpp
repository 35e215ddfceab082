#include "tbn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace tbn {

namespace {

// Matchings within one complementary class (c sites of a type, cc of its
// complement). All matchings: sum over matching sizes. Saturated: every
// instance on each limiting side is paired, which pins the matching size to
// min(c, cc) and counts falling-factorial many injections.
double class_matching_count(int c, int cc, EnumerationFilter filter) {
  if (c > cc) std::swap(c, cc);
  if (filter == EnumerationFilter::Saturated) {
    double r = 1.0;
    for (int i = 0; i < c; ++i) r *= static_cast<double>(cc - i);
    return r;
  }
  // sum_t C(c,t) * C(cc,t) * t!
  double total = 0.0;
  double term = 1.0;  // t = 0
  for (int t = 0;; ++t) {
    total += term;
    if (t == c || !std::isfinite(total)) break;
    term *= static_cast<double>(c - t) * static_cast<double>(cc - t) /
            static_cast<double>(t + 1);
  }
  return total;
}

}  // namespace

double estimate_configuration_count(const Tbn& t, EnumerationFilter filter) {
  std::set<std::pair<SiteType, SiteType>> seen;
  double total = 1.0;
  for (int s = 0; s < t.site_count(); ++s) {
    SiteType a = t.site_type(s);
    SiteType b = complement(a);
    if (b < a) std::swap(a, b);
    if (!seen.insert({a, b}).second) continue;
    total *= class_matching_count(t.type_count(a), t.type_count(b), filter);
    if (!std::isfinite(total)) return std::numeric_limits<double>::infinity();
  }
  return total;
}

namespace {

struct Enumerator {
  const Tbn& tbn;
  EnumerationFilter filter;
  const std::function<void(const Configuration&)>& visit;

  std::vector<bool> paired;
  std::vector<bool> left_unpaired;  // decided to stay unpaired (All filter)
  std::vector<std::pair<int, int>> stack;

  void run() {
    paired.assign(tbn.site_count(), false);
    left_unpaired.assign(tbn.site_count(), false);
    recurse(0);
  }

  // Branches on the lowest-id undecided limiting site at or after `from`.
  void recurse(int from) {
    int s = from;
    while (s < tbn.site_count() &&
           (!tbn.site_is_limiting(s) || paired[s] || left_unpaired[s]))
      ++s;

    if (s == tbn.site_count()) {
      // Every pair joins a limiting site to something, so deciding all
      // limiting sites decides the whole matching.
      visit(Configuration(stack));
      return;
    }

    if (filter == EnumerationFilter::All) {
      left_unpaired[s] = true;
      recurse(s + 1);
      left_unpaired[s] = false;
    }
    for (int u : tbn.instances_of(complement(tbn.site_type(s)))) {
      if (paired[u] || left_unpaired[u]) continue;
      paired[s] = paired[u] = true;
      stack.emplace_back(s, u);
      recurse(s + 1);
      stack.pop_back();
      paired[s] = paired[u] = false;
    }
  }
};

}  // namespace

void enumerate_configurations(const Tbn& t, EnumerationFilter filter,
                              const std::function<void(const Configuration&)>& visit,
                              uint64_t bound) {
  double estimate = estimate_configuration_count(t, filter);
  if (estimate > static_cast<double>(bound))
    throw EnumerationBoundExceeded(estimate, bound);
  Enumerator e{t, filter, visit, {}, {}, {}};
  e.run();
}

std::vector<Configuration> collect_configurations(const Tbn& t,
                                                  EnumerationFilter filter,
                                                  uint64_t bound) {
  std::vector<Configuration> out;
  enumerate_configurations(
      t, filter, [&](const Configuration& c) { out.push_back(c); }, bound);
  return out;
}

EnumerationReport enumerate_report(const Tbn& t, EnumerationFilter filter,
                                   size_t sample_limit, uint64_t bound) {
  EnumerationReport report;
  enumerate_configurations(
      t, filter,
      [&](const Configuration& c) {
        bool sat = is_saturated(t, c);
        int poly = polymer_count(t, c);
        ++report.total;
        if (sat) {
          ++report.saturated;
          if (poly > report.max_polymers) {
            report.max_polymers = poly;
            report.stable = 1;
          } else if (poly == report.max_polymers) {
            ++report.stable;
          }
        }
        if (report.samples.size() < sample_limit)
          report.samples.push_back({c, sat, poly});
      },
      bound);
  if (filter == EnumerationFilter::Saturated) report.total = 0;
  return report;
}

OracleStableCount oracle_stable_count(const Tbn& t, uint64_t bound) {
  OracleStableCount result;
  enumerate_configurations(
      t, EnumerationFilter::Saturated,
      [&](const Configuration& c) {
        int poly = polymer_count(t, c);
        if (poly > result.stable_polymer_count) {
          result.stable_polymer_count = poly;
          result.stable_configurations = 1;
        } else if (poly == result.stable_polymer_count) {
          ++result.stable_configurations;
        }
      },
      bound);
  return result;
}

uint64_t count_saturated(const Tbn& t, uint64_t bound) {
  uint64_t n = 0;
  enumerate_configurations(
      t, EnumerationFilter::Saturated, [&](const Configuration&) { ++n; },
      bound);
  return n;
}

bool oracle_stably_free(const Tbn& t, int monomer_id, uint64_t bound) {
  if (monomer_id < 0 || monomer_id >= t.monomer_count())
    throw std::out_of_range("monomer id out of range");
  int best = 0;
  bool free_at_best = false;
  enumerate_configurations(
      t, EnumerationFilter::Saturated,
      [&](const Configuration& c) {
        int poly = polymer_count(t, c);
        if (poly > best) {
          best = poly;
          free_at_best = is_free(t, c, monomer_id);
        } else if (poly == best && !free_at_best) {
          free_at_best = is_free(t, c, monomer_id);
        }
      },
      bound);
  return free_at_best;
}

}  // namespace tbn
