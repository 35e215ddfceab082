#include "tbn/queries.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <future>
#include <thread>

#include "tbn/external_solver.hpp"

namespace tbn {

struct QueryEngine::Impl {
  // Embedded backend state: one incremental encoding + solver per TBN.
  std::optional<Encoding> encoding;
  std::optional<sat::Solver> solver;
};

QueryEngine::QueryEngine(Tbn t, QueryOptions options)
    : tbn_(std::move(t)), options_(std::move(options)), impl_(new Impl) {}

QueryEngine::~QueryEngine() = default;
QueryEngine::QueryEngine(QueryEngine&&) noexcept = default;
QueryEngine& QueryEngine::operator=(QueryEngine&&) noexcept = default;

namespace {

std::vector<int> free_monomer_assumptions(const Encoding& enc, int monomer) {
  std::vector<int> out;
  for (const VarMap::PairEntry& p : enc.map.pair_entries())
    if (p.inter && (p.mon_a == monomer || p.mon_b == monomer))
      out.push_back(-p.var);
  return out;
}

void check_witness(const Tbn& t, const Configuration& c, int k,
                   std::optional<int> free_monomer) {
  if (!is_valid_configuration(t, c))
    throw std::logic_error("encoding bug: decoded configuration is invalid");
  if (!is_saturated(t, c))
    throw std::logic_error("encoding bug: decoded configuration is not saturated");
  if (polymer_count(t, c) < k)
    throw std::logic_error("encoding bug: decoded configuration has too few polymers");
  if (free_monomer && !is_free(t, c, *free_monomer))
    throw std::logic_error("encoding bug: constrained monomer is not free");
}

}  // namespace

std::optional<Configuration> QueryEngine::query(int k,
                                                std::optional<int> free_monomer) {
  int n = tbn_.monomer_count();
  if (k > n) return std::nullopt;

  if (options_.backend == SolverBackend::External) {
    Encoding enc = encode_saturation(tbn_);
    encode_polymer_count(enc, tbn_, k, CardinalityLayout::BandedFixedK);
    if (free_monomer) encode_monomer_free(enc, tbn_, *free_monomer);
    ++stats_.solver_calls;
    sat::Outcome out = sat::solve_external(enc.cnf, options_.external_command);
    if (out.verdict == sat::Verdict::Unknown)
      throw SolverBudgetExceeded("external solver returned unknown");
    if (out.verdict == sat::Verdict::Unsat) return std::nullopt;
    Configuration c = decode_model(enc.map, out.model);
    check_witness(tbn_, c, k, free_monomer);
    return c;
  }

  if (!impl_->encoding) {
    Encoding enc = encode_saturation(tbn_);
    encode_polymer_count(enc, tbn_, 1, CardinalityLayout::FullTriangleIncremental);
    impl_->solver.emplace(options_.seed);
    impl_->solver->reserve_vars(enc.cnf.variable_count());
    for (const std::vector<int>& clause : enc.cnf.clauses())
      impl_->solver->add_clause(clause);
    if (options_.decision_hints) {
      // Representative decisions first: asserting Rep on a bound monomer
      // collapses by unit propagation, which is where the learning pays off.
      for (int m = 0; m < n; ++m) {
        impl_->solver->boost_decision_priority(enc.map.rep_variable(m), 100.0);
        impl_->solver->set_initial_phase(enc.map.rep_variable(m), true);
      }
      // Pair decisions default to "paired" so saturation falls out greedily
      // instead of by exhausting at-least-one clauses.
      for (const VarMap::PairEntry& p : enc.map.pair_entries())
        impl_->solver->set_initial_phase(p.var, true);
    }
    impl_->encoding = std::move(enc);
  }

  const Encoding& enc = *impl_->encoding;
  std::vector<int> assumptions;
  assumptions.push_back(enc.map.sum_variable(n, k));
  if (free_monomer) {
    std::vector<int> free_lits = free_monomer_assumptions(enc, *free_monomer);
    assumptions.insert(assumptions.end(), free_lits.begin(), free_lits.end());
  }

  ++stats_.solver_calls;
  sat::Outcome out = impl_->solver->solve(assumptions, options_.limits);
  stats_.solver += out.stats;
  if (out.verdict == sat::Verdict::Unknown)
    throw SolverBudgetExceeded("conflict budget exhausted at k=" + std::to_string(k));
  if (out.verdict == sat::Verdict::Unsat) return std::nullopt;

  Configuration c = decode_model(enc.map, out.model);
  check_witness(tbn_, c, k, free_monomer);
  return c;
}

std::optional<Configuration> QueryEngine::saturated_config_exists(
    int k, std::optional<int> free_monomer) {
  if (k < 1) throw std::invalid_argument("polymer target must be >= 1");
  if (free_monomer &&
      (*free_monomer < 0 || *free_monomer >= tbn_.monomer_count()))
    throw std::out_of_range("monomer id out of range");
  if (tbn_.empty()) return std::nullopt;
  return query(k, free_monomer);
}

std::pair<int, Configuration> QueryEngine::stable_polymer_count() {
  if (cached_stable_) return *cached_stable_;
  if (tbn_.empty()) {
    cached_stable_ = {0, Configuration{}};
    return *cached_stable_;
  }
  int n = tbn_.monomer_count();
  std::optional<Configuration> witness = query(1, std::nullopt);
  if (!witness)
    throw std::logic_error("encoding bug: no saturated configuration found");
  int lo = 1, hi = n;
  while (lo < hi) {
    int mid = lo + (hi - lo + 1) / 2;
    if (std::optional<Configuration> c = query(mid, std::nullopt)) {
      lo = mid;
      witness = std::move(c);
    } else {
      hi = mid - 1;
    }
  }
  // the binary search converges on S, where the witness is exact
  assert(polymer_count(tbn_, *witness) == lo);
  cached_stable_ = {lo, std::move(*witness)};
  return *cached_stable_;
}

bool QueryEngine::can_be_free(int monomer) {
  if (monomer < 0 || monomer >= tbn_.monomer_count())
    throw std::out_of_range("monomer id out of range");

  // Fast path: every type on m is non-limiting AND keeps enough copies off m
  // to absorb all instances of its complement. Then any saturated
  // configuration of T minus m extends with m free. Non-limiting alone is
  // not enough ({{a,a},{a*}}: a is non-limiting, yet a* must pair onto m).
  bool fast = true;
  const Monomer& mon = tbn_.monomer(monomer);
  for (const SiteType& s : mon.sites) {
    if (tbn_.is_limiting(s)) {
      fast = false;
      break;
    }
    int on_m = static_cast<int>(std::count(mon.sites.begin(), mon.sites.end(), s));
    if (tbn_.type_count(s) - on_m < tbn_.type_count(complement(s))) {
      fast = false;
      break;
    }
  }
  if (fast) return true;
  // Only the solver may conclude "cannot be free".
  return saturated_config_exists(1, monomer).has_value();
}

QueryResult QueryEngine::stably_free(int monomer) {
  if (options_.batch_queries) return stably_free_batch(monomer);

  auto [count, stable_witness] = stable_polymer_count();
  QueryResult result;
  result.stable_polymer_count = count;
  result.method = "two-query";

  bool verdict = false;
  if (can_be_free(monomer)) {
    Tbn rest = remove_monomer(tbn_, monomer);
    int count_rest = 0;
    if (!rest.empty()) {
      QueryEngine sub(std::move(rest), options_);
      count_rest = sub.stable_polymer_count().first;
      stats_.solver_calls += sub.stats_.solver_calls;
      stats_.solver += sub.stats_.solver;
    }
    verdict = count_rest >= count - 1;
  }
  result.free_verdict = verdict;
  if (verdict) {
    std::optional<Configuration> w = saturated_config_exists(count, monomer);
    if (!w)
      throw std::logic_error(
          "two-query method accepted but no stable witness with the monomer "
          "free exists");
    result.witness = std::move(*w);
  } else {
    result.witness = std::move(stable_witness);
  }
  result.stats = stats_;
  return result;
}

QueryResult QueryEngine::stably_free_direct(int monomer) {
  auto [count, stable_witness] = stable_polymer_count();
  QueryResult result;
  result.stable_polymer_count = count;
  result.method = "direct";
  std::optional<Configuration> w =
      tbn_.empty() ? std::optional<Configuration>{}
                   : saturated_config_exists(count, monomer);
  result.free_verdict = w.has_value();
  result.witness = w ? std::move(*w) : std::move(stable_witness);
  result.stats = stats_;
  return result;
}

// The parallel-oracle formulation: ask A(T,k) and F(T,m,k) for every k at
// once, then read the verdict off the answer table.
QueryResult QueryEngine::stably_free_batch(int monomer) {
  int n = tbn_.monomer_count();
  if (monomer < 0 || monomer >= n)
    throw std::out_of_range("monomer id out of range");

  struct Answer {
    std::optional<Configuration> a, f;
  };
  std::vector<Answer> answers(n + 1);

  QueryOptions sub_options = options_;
  sub_options.batch_queries = false;

  unsigned window = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  for (int base = 1; base <= n; base += window) {
    int end = std::min(n, base + static_cast<int>(window) - 1);
    std::vector<std::future<Answer>> futures;
    for (int k = base; k <= end; ++k) {
      futures.push_back(std::async(std::launch::async, [&, k]() {
        QueryEngine worker(tbn_, sub_options);
        Answer ans;
        ans.a = worker.saturated_config_exists(k);
        ans.f = worker.saturated_config_exists(k, monomer);
        return ans;
      }));
    }
    for (int k = base; k <= end; ++k)
      answers[k] = futures[k - base].get();
  }

  QueryResult result;
  result.method = "batch";
  int count = 1;
  bool verdict = true;
  for (int k = 1; k <= n; ++k) {
    if (answers[k].a) count = k;
    if (answers[k].a && !answers[k].f) verdict = false;
  }
  result.stable_polymer_count = count;
  result.free_verdict = verdict;
  if (verdict && answers[count].f)
    result.witness = std::move(*answers[count].f);
  else if (answers[count].a)
    result.witness = std::move(*answers[count].a);
  result.stats = stats_;
  return result;
}

QueryResult QueryEngine::solve_query() {
  auto [count, witness] = stable_polymer_count();
  QueryResult result;
  result.stable_polymer_count = count;
  result.witness = std::move(witness);
  result.method = "solve";
  result.stats = stats_;
  return result;
}

std::optional<Configuration> saturated_config_exists(const Tbn& t, int k,
                                                     std::optional<int> free_monomer,
                                                     const QueryOptions& options) {
  return QueryEngine(t, options).saturated_config_exists(k, free_monomer);
}

std::pair<int, Configuration> stable_polymer_count(const Tbn& t,
                                                   const QueryOptions& options) {
  return QueryEngine(t, options).stable_polymer_count();
}

bool can_be_free(const Tbn& t, int monomer, const QueryOptions& options) {
  return QueryEngine(t, options).can_be_free(monomer);
}

QueryResult stably_free(const Tbn& t, int monomer, const QueryOptions& options) {
  return QueryEngine(t, options).stably_free(monomer);
}

QueryResult stably_free_direct(const Tbn& t, int monomer,
                               const QueryOptions& options) {
  return QueryEngine(t, options).stably_free_direct(monomer);
}

int resolve_monomer(const Tbn& t, const std::string& selector) {
  if (!selector.empty() &&
      std::all_of(selector.begin(), selector.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    int id = std::stoi(selector);
    if (id >= t.monomer_count())
      throw std::out_of_range("monomer index " + selector + " out of range (" +
                              std::to_string(t.monomer_count()) + " monomers)");
    return id;
  }
  int found = -1;
  for (int m = 0; m < t.monomer_count(); ++m) {
    if (t.monomer(m).label != selector) continue;
    if (found >= 0 && !(t.monomer(found) == t.monomer(m)))
      throw std::invalid_argument("label '" + selector +
                                  "' is ambiguous; use a monomer index");
    if (found < 0) found = m;
  }
  if (found < 0)
    throw std::invalid_argument("no monomer labeled '" + selector + "'");
  return found;
}

}  // namespace tbn
