#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "tbn/encoder.hpp"
#include "tbn/model.hpp"
#include "tbn/solver.hpp"

namespace tbn {

enum class SolverBackend { Embedded, External };

struct QueryOptions {
  SolverBackend backend = SolverBackend::Embedded;
  std::string external_command;  // DIMACS solver template with {file}
  uint64_t seed = 0;
  sat::Limits limits;
  // Issue the k = 1..n existence queries as one batch instead of a binary
  // search; didactic, and slower on anything but small instances.
  bool batch_queries = false;
  bool decision_hints = true;
};

// The solver gave up within its budget; distinct from a proven "no".
struct SolverBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QueryStats {
  uint64_t solver_calls = 0;
  sat::Stats solver;
};

struct QueryResult {
  int stable_polymer_count = 0;
  std::optional<bool> free_verdict;       // set by stably-free queries
  std::optional<Configuration> witness;   // stable configuration, when found
  std::string method;
  QueryStats stats;
};

// Decision procedures for one TBN. The embedded backend encodes once and
// serves every k through solver assumptions; the external backend emits a
// fixed-k instance per query.
class QueryEngine {
 public:
  explicit QueryEngine(Tbn t, QueryOptions options = {});
  ~QueryEngine();
  QueryEngine(QueryEngine&&) noexcept;
  QueryEngine& operator=(QueryEngine&&) noexcept;

  const Tbn& tbn() const { return tbn_; }

  // Witness with >= k polymers (saturated, constraint respected), or
  // nullopt when proven impossible. Every returned witness is re-checked.
  std::optional<Configuration> saturated_config_exists(
      int k, std::optional<int> free_monomer = {});

  // S(T) by binary search over k, plus a stable witness.
  std::pair<int, Configuration> stable_polymer_count();

  bool can_be_free(int monomer);

  // Two-query method: free-able and S(T \ {m}) >= S(T) - 1.
  QueryResult stably_free(int monomer);
  // Single query at k = S(T) with the monomer forced free.
  QueryResult stably_free_direct(int monomer);

  QueryResult solve_query();  // S(T) + witness packaged as a result

  const QueryStats& stats() const { return stats_; }

 private:
  struct Impl;
  std::optional<Configuration> query(int k, std::optional<int> free_monomer);
  QueryResult stably_free_batch(int monomer);

  Tbn tbn_;
  QueryOptions options_;
  QueryStats stats_;
  std::unique_ptr<Impl> impl_;
  std::optional<std::pair<int, Configuration>> cached_stable_;
};

// One-shot conveniences.
std::optional<Configuration> saturated_config_exists(
    const Tbn& t, int k, std::optional<int> free_monomer = {},
    const QueryOptions& options = {});
std::pair<int, Configuration> stable_polymer_count(const Tbn& t,
                                                   const QueryOptions& options = {});
bool can_be_free(const Tbn& t, int monomer, const QueryOptions& options = {});
QueryResult stably_free(const Tbn& t, int monomer, const QueryOptions& options = {});
QueryResult stably_free_direct(const Tbn& t, int monomer,
                               const QueryOptions& options = {});

// Monomer lookup by 0-based index or label; a label shared by distinct
// monomer contents is ambiguous and rejected.
int resolve_monomer(const Tbn& t, const std::string& selector);

}  // namespace tbn
