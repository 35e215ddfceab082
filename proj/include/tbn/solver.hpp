#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace tbn::sat {

enum class Verdict { Sat, Unsat, Unknown };

struct Stats {
  uint64_t decisions = 0;
  uint64_t conflicts = 0;
  uint64_t propagations = 0;
  uint64_t restarts = 0;
  double seconds = 0.0;

  Stats& operator+=(const Stats& o) {
    decisions += o.decisions;
    conflicts += o.conflicts;
    propagations += o.propagations;
    restarts += o.restarts;
    seconds += o.seconds;
    return *this;
  }
};

struct Limits {
  uint64_t max_conflicts = 1'000'000;  // then Verdict::Unknown
};

struct Outcome {
  Verdict verdict = Verdict::Unknown;
  // Truth value per variable, 1-based; index 0 unused. Valid iff Sat.
  std::vector<bool> model;
  Stats stats;
};

// Conflict-driven clause learning over DIMACS-style signed literals.
// Incremental: clauses persist across solve() calls, per-call assumptions
// select the query. Deterministic for a fixed seed.
class Solver {
 public:
  explicit Solver(uint64_t seed = 0);

  int new_var();
  void reserve_vars(int n);  // ensures variables 1..n exist
  int num_vars() const { return static_cast<int>(activity_.size()); }

  // Returns false when the solver is already unsatisfiable at the root.
  bool add_clause(std::span<const int> lits);
  bool add_clause(std::initializer_list<int> lits) {
    return add_clause(std::span<const int>(lits.begin(), lits.size()));
  }

  // Branching hints: a head start on VSIDS activity and a preferred phase.
  void boost_decision_priority(int var, double amount);
  void set_initial_phase(int var, bool phase);

  Outcome solve(std::span<const int> assumptions = {}, const Limits& limits = {});

  const Stats& cumulative_stats() const { return total_stats_; }

 private:
  using ClauseRef = uint32_t;
  static constexpr ClauseRef kNoReason = std::numeric_limits<ClauseRef>::max();
  static constexpr int kHeaderWords = 3;  // size, flags, activity bits

  struct Watch {
    ClauseRef cref;
    int32_t blocker;
  };

  // Internal literal: 2*var + sign, vars 0-based.
  static int32_t mk_lit(int ext) {
    int v = ext > 0 ? ext : -ext;
    return 2 * (v - 1) + (ext < 0 ? 1 : 0);
  }
  static int to_ext(int32_t lit) {
    int v = (lit >> 1) + 1;
    return (lit & 1) ? -v : v;
  }
  static int32_t neg(int32_t lit) { return lit ^ 1; }
  static int var_of(int32_t lit) { return lit >> 1; }

  // 0 = true, 1 = false, >=2 = unassigned.
  uint8_t value(int32_t lit) const { return assigns_[var_of(lit)] ^ (lit & 1); }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  int32_t* clause_lits(ClauseRef c) { return &arena_[c + kHeaderWords]; }
  const int32_t* clause_lits(ClauseRef c) const { return &arena_[c + kHeaderWords]; }
  int clause_size(ClauseRef c) const { return arena_[c]; }
  bool clause_learnt(ClauseRef c) const { return arena_[c + 1] & 1; }
  float clause_activity(ClauseRef c) const;
  void set_clause_activity(ClauseRef c, float a);

  ClauseRef alloc_clause(std::span<const int32_t> lits, bool learnt);
  void attach_clause(ClauseRef c);
  bool enqueue(int32_t lit, ClauseRef reason);
  ClauseRef propagate();
  void analyze(ClauseRef confl, std::vector<int32_t>& learnt, int& bt_level);
  bool literal_redundant(int32_t lit) const;
  void backtrack(int level);
  int pick_branch_var();
  void bump_var(int v);
  void bump_clause(ClauseRef c);
  void reduce_learnts();
  void rebuild_watches();
  bool verify_model() const;

  // heap of variables ordered by activity, ties by index
  void heap_insert(int v);
  void heap_update(int v);
  int heap_pop();
  bool heap_less(int a, int b) const;
  void heap_sift_up(size_t i);
  void heap_sift_down(size_t i);

  bool ok_ = true;
  std::vector<int32_t> arena_;
  std::vector<ClauseRef> learnts_;
  size_t num_original_clauses_ = 0;
  std::vector<std::vector<Watch>> watches_;  // per internal literal

  std::vector<uint8_t> assigns_;  // per var: 0 true, 1 false, 2 unassigned
  std::vector<int32_t> level_;
  std::vector<ClauseRef> reason_;
  std::vector<int32_t> trail_;
  std::vector<int32_t> trail_lim_;
  size_t propag_head_ = 0;

  std::vector<double> activity_;
  std::vector<uint8_t> phase_;
  std::vector<uint8_t> seen_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;

  std::vector<int32_t> heap_;      // var indices
  std::vector<int32_t> heap_pos_;  // var -> heap slot, -1 if absent

  uint64_t seed_;
  size_t max_learnts_ = 0;

  Stats total_stats_;
};

}  // namespace tbn::sat
