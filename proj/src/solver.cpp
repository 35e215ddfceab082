#include "tbn/solver.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace tbn::sat {

namespace {

constexpr double kVarDecay = 1.0 / 0.95;
constexpr double kClaDecay = 1.0 / 0.999;
constexpr double kActivityRescale = 1e100;
constexpr uint64_t kRestartBase = 100;

// luby(1), luby(2), ... = 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
uint64_t luby(uint64_t i) {
  uint64_t k = 1;
  while (((uint64_t{1} << k) - 1) < i + 1) ++k;
  while (((uint64_t{1} << k) - 1) != i + 1) {
    --k;
    i -= (uint64_t{1} << k) - 1;
  }
  return uint64_t{1} << (k - 1);
}

}  // namespace

Solver::Solver(uint64_t seed) : seed_(seed) {}

int Solver::new_var() {
  int v = num_vars();
  double jitter = 0.0;
  if (seed_ != 0) {
    uint64_t h = (seed_ * 0x9e3779b97f4a7c15ULL) ^ (uint64_t(v) * 0xff51afd7ed558ccdULL);
    h ^= h >> 33;
    jitter = static_cast<double>(h % 1024) * 1e-12;
  }
  activity_.push_back(jitter);
  assigns_.push_back(2);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  phase_.push_back(1);  // default phase: false
  seen_.push_back(0);
  heap_pos_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v + 1;
}

void Solver::reserve_vars(int n) {
  while (num_vars() < n) new_var();
}

float Solver::clause_activity(ClauseRef c) const {
  return std::bit_cast<float>(arena_[c + 2]);
}

void Solver::set_clause_activity(ClauseRef c, float a) {
  arena_[c + 2] = std::bit_cast<int32_t>(a);
}

Solver::ClauseRef Solver::alloc_clause(std::span<const int32_t> lits, bool learnt) {
  ClauseRef c = static_cast<ClauseRef>(arena_.size());
  arena_.push_back(static_cast<int32_t>(lits.size()));
  arena_.push_back(learnt ? 1 : 0);
  arena_.push_back(std::bit_cast<int32_t>(0.0f));
  arena_.insert(arena_.end(), lits.begin(), lits.end());
  return c;
}

void Solver::attach_clause(ClauseRef c) {
  const int32_t* lits = clause_lits(c);
  watches_[neg(lits[0])].push_back({c, lits[1]});
  watches_[neg(lits[1])].push_back({c, lits[0]});
}

bool Solver::add_clause(std::span<const int> ext_lits) {
  if (!ok_) return false;
  assert(decision_level() == 0);

  std::vector<int32_t> lits;
  lits.reserve(ext_lits.size());
  for (int ext : ext_lits) {
    if (ext == 0) throw std::invalid_argument("zero literal in clause");
    int v = std::abs(ext);
    reserve_vars(v);
    lits.push_back(mk_lit(ext));
  }
  std::sort(lits.begin(), lits.end());
  int32_t* out = lits.data();
  size_t kept = 0;
  int32_t prev = -1;
  for (int32_t lit : lits) {
    if (lit == prev) continue;          // duplicate
    if (prev >= 0 && lit == neg(prev)) return true;  // tautology
    if (value(lit) == 0) return true;   // satisfied at root
    if (value(lit) == 1) continue;      // false at root, drop
    out[kept++] = lit;
    prev = lit;
  }
  lits.resize(kept);

  if (lits.empty()) {
    ok_ = false;
    return false;
  }
  if (lits.size() == 1) {
    if (!enqueue(lits[0], kNoReason)) {
      ok_ = false;
      return false;
    }
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  ClauseRef c = alloc_clause(lits, false);
  attach_clause(c);
  ++num_original_clauses_;
  return true;
}

void Solver::boost_decision_priority(int var, double amount) {
  reserve_vars(var);
  activity_[var - 1] += amount;
  heap_update(var - 1);
}

void Solver::set_initial_phase(int var, bool phase) {
  reserve_vars(var);
  phase_[var - 1] = phase ? 0 : 1;
}

bool Solver::enqueue(int32_t lit, ClauseRef reason) {
  uint8_t val = value(lit);
  if (val != 2 && val != 3) return val == 0;
  int v = var_of(lit);
  assigns_[v] = lit & 1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(lit);
  return true;
}

Solver::ClauseRef Solver::propagate() {
  while (propag_head_ < trail_.size()) {
    int32_t lit = trail_[propag_head_++];
    ++total_stats_.propagations;
    std::vector<Watch>& ws = watches_[lit];  // clauses watching ~lit fall here
    size_t read = 0, write = 0;
    ClauseRef confl = kNoReason;
    while (read < ws.size()) {
      Watch w = ws[read++];
      if (value(w.blocker) == 0) {
        ws[write++] = w;
        continue;
      }
      int32_t* lits = clause_lits(w.cref);
      int size = clause_size(w.cref);
      int32_t false_lit = neg(lit);
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      // lits[1] is now the falsified watch
      if (value(lits[0]) == 0) {
        ws[write++] = {w.cref, lits[0]};
        continue;
      }
      bool moved = false;
      for (int i = 2; i < size; ++i) {
        if (value(lits[i]) != 1) {
          std::swap(lits[1], lits[i]);
          watches_[neg(lits[1])].push_back({w.cref, lits[0]});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // unit or conflicting
      ws[write++] = {w.cref, lits[0]};
      if (value(lits[0]) == 1) {
        confl = w.cref;
        propag_head_ = trail_.size();
        while (read < ws.size()) ws[write++] = ws[read++];
        break;
      }
      enqueue(lits[0], w.cref);
    }
    ws.resize(write);
    if (confl != kNoReason) return confl;
  }
  return kNoReason;
}

void Solver::bump_var(int v) {
  activity_[v] += var_inc_;
  if (activity_[v] > kActivityRescale) {
    for (double& a : activity_) a /= kActivityRescale;
    var_inc_ /= kActivityRescale;
  }
  heap_update(v);
}

void Solver::bump_clause(ClauseRef c) {
  float a = clause_activity(c) + static_cast<float>(cla_inc_);
  set_clause_activity(c, a);
  if (a > 1e20f) {
    for (ClauseRef l : learnts_)
      set_clause_activity(l, clause_activity(l) * 1e-20f);
    cla_inc_ *= 1e-20;
  }
}

// True when every antecedent of `lit` is already marked seen at a nonzero
// level; such a literal can be dropped from the learnt clause.
bool Solver::literal_redundant(int32_t lit) const {
  ClauseRef r = reason_[var_of(lit)];
  if (r == kNoReason) return false;
  const int32_t* lits = clause_lits(r);
  int size = clause_size(r);
  for (int i = 0; i < size; ++i) {
    int v = var_of(lits[i]);
    if (v == var_of(lit)) continue;
    if (level_[v] > 0 && !seen_[v]) return false;
  }
  return true;
}

void Solver::analyze(ClauseRef confl, std::vector<int32_t>& learnt, int& bt_level) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  int path_count = 0;
  int32_t lit = -1;
  size_t index = trail_.size();

  do {
    assert(confl != kNoReason);
    if (clause_learnt(confl)) bump_clause(confl);
    const int32_t* lits = clause_lits(confl);
    int size = clause_size(confl);
    for (int i = (lit == -1 ? 0 : 1); i < size; ++i) {
      int32_t q = lits[i];
      int v = var_of(q);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump_var(v);
      if (level_[v] == decision_level())
        ++path_count;
      else
        learnt.push_back(q);
    }
    // next clause to resolve
    while (!seen_[var_of(trail_[--index])]) {
    }
    lit = trail_[index];
    confl = reason_[var_of(lit)];
    seen_[var_of(lit)] = 0;
    --path_count;
  } while (path_count > 0);
  learnt[0] = neg(lit);

  std::vector<int32_t> to_clear(learnt.begin() + 1, learnt.end());

  // conflict clause minimization (cheap, one level deep)
  size_t kept = 1;
  for (size_t i = 1; i < learnt.size(); ++i)
    if (!literal_redundant(learnt[i])) learnt[kept++] = learnt[i];
  learnt.resize(kept);

  bt_level = 0;
  if (learnt.size() > 1) {
    size_t max_i = 1;
    for (size_t i = 2; i < learnt.size(); ++i)
      if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    bt_level = level_[var_of(learnt[1])];
  }

  for (int32_t l : to_clear) seen_[var_of(l)] = 0;
}

void Solver::backtrack(int level) {
  if (decision_level() <= level) return;
  for (size_t i = trail_.size(); i-- > static_cast<size_t>(trail_lim_[level]);) {
    int v = var_of(trail_[i]);
    phase_[v] = assigns_[v];
    assigns_[v] = 2;
    reason_[v] = kNoReason;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  propag_head_ = trail_.size();
}

int Solver::pick_branch_var() {
  while (!heap_.empty()) {
    int v = heap_pop();
    if (assigns_[v] >= 2) return v;
  }
  return -1;
}

// Only called at decision level 0 so the watch rebuild can re-establish the
// two-watch invariant against root assignments.
void Solver::reduce_learnts() {
  assert(decision_level() == 0);
  std::vector<ClauseRef> sorted = learnts_;
  std::sort(sorted.begin(), sorted.end(), [&](ClauseRef a, ClauseRef b) {
    if (clause_activity(a) != clause_activity(b))
      return clause_activity(a) > clause_activity(b);
    return a < b;
  });
  size_t limit = sorted.size() / 2;
  std::vector<ClauseRef> keep, dropped;
  for (size_t i = 0; i < sorted.size(); ++i) {
    ClauseRef c = sorted[i];
    if (i < limit || clause_size(c) == 2)
      keep.push_back(c);
    else
      dropped.push_back(c);
  }
  if (dropped.empty()) return;
  for (ClauseRef c : dropped) arena_[c + 1] |= 2;  // mark deleted
  learnts_ = std::move(keep);
  rebuild_watches();
}

void Solver::rebuild_watches() {
  for (auto& w : watches_) w.clear();
  ClauseRef c = 0;
  while (c < arena_.size()) {
    int size = arena_[c];
    bool deleted = arena_[c + 1] & 2;
    if (!deleted) {
      // move two non-false literals into the watch slots; clauses unit or
      // empty under the root assignment propagate here instead
      int32_t* lits = clause_lits(c);
      int nonfalse = 0;
      for (int i = 0; i < size && nonfalse < 2; ++i) {
        if (value(lits[i]) != 1) std::swap(lits[nonfalse++], lits[i]);
      }
      if (nonfalse == 0) {
        ok_ = false;
      } else if (nonfalse == 1) {
        if (value(lits[0]) != 0) enqueue(lits[0], c);
        attach_clause(c);
      } else {
        attach_clause(c);
      }
    }
    c += kHeaderWords + size;
  }
}

bool Solver::verify_model() const {
  ClauseRef c = 0;
  while (c < arena_.size()) {
    int size = arena_[c];
    bool learnt = arena_[c + 1] & 1;
    bool deleted = arena_[c + 1] & 2;
    if (!learnt && !deleted) {
      bool sat = false;
      for (int i = 0; i < size; ++i)
        if (value(clause_lits(c)[i]) == 0) {
          sat = true;
          break;
        }
      if (!sat) return false;
    }
    c += kHeaderWords + size;
  }
  return true;
}

Outcome Solver::solve(std::span<const int> assumptions, const Limits& limits) {
  auto t0 = std::chrono::steady_clock::now();
  Stats before = total_stats_;
  Outcome out;

  auto finish = [&](Verdict v) {
    backtrack(0);
    out.verdict = v;
    out.stats = total_stats_;
    out.stats.decisions -= before.decisions;
    out.stats.conflicts -= before.conflicts;
    out.stats.propagations -= before.propagations;
    out.stats.restarts -= before.restarts;
    out.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    total_stats_.seconds += out.stats.seconds;
    return out;
  };

  if (!ok_) return finish(Verdict::Unsat);

  std::vector<int32_t> assumed;
  assumed.reserve(assumptions.size());
  for (int ext : assumptions) {
    if (ext == 0) throw std::invalid_argument("zero assumption literal");
    reserve_vars(std::abs(ext));
    assumed.push_back(mk_lit(ext));
  }

  if (max_learnts_ == 0)
    max_learnts_ = std::max<size_t>(10000, num_original_clauses_ / 2);

  uint64_t conflict_budget = limits.max_conflicts;
  uint64_t conflicts_this_call = 0;
  uint64_t restart_count = 0;
  uint64_t next_restart = kRestartBase * luby(restart_count);
  uint64_t conflicts_since_restart = 0;
  std::vector<int32_t> learnt;

  while (true) {
    ClauseRef confl = propagate();
    if (confl != kNoReason) {
      ++total_stats_.conflicts;
      ++conflicts_this_call;
      ++conflicts_since_restart;
      if (decision_level() == 0) {
        ok_ = false;
        return finish(Verdict::Unsat);
      }
      int bt_level = 0;
      analyze(confl, learnt, bt_level);
      backtrack(bt_level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        ClauseRef c = alloc_clause(learnt, true);
        attach_clause(c);
        learnts_.push_back(c);
        set_clause_activity(c, static_cast<float>(cla_inc_));
        enqueue(learnt[0], c);
      }
      var_inc_ *= kVarDecay;
      cla_inc_ *= kClaDecay;
      if (conflicts_this_call >= conflict_budget) return finish(Verdict::Unknown);
      continue;
    }

    if (conflicts_since_restart >= next_restart) {
      ++total_stats_.restarts;
      ++restart_count;
      conflicts_since_restart = 0;
      next_restart = kRestartBase * luby(restart_count);
      backtrack(0);
      if (learnts_.size() >= max_learnts_) {
        reduce_learnts();
        max_learnts_ += max_learnts_ / 2;
        if (!ok_) return finish(Verdict::Unsat);
      }
      continue;
    }

    if (decision_level() < static_cast<int>(assumed.size())) {
      int32_t a = assumed[decision_level()];
      uint8_t val = value(a);
      if (val == 1) return finish(Verdict::Unsat);  // failed assumption
      trail_lim_.push_back(static_cast<int32_t>(trail_.size()));
      if (val != 0) enqueue(a, kNoReason);
      continue;
    }

    int v = pick_branch_var();
    if (v < 0) {
      out.model.assign(num_vars() + 1, false);
      for (int i = 0; i < num_vars(); ++i) out.model[i + 1] = assigns_[i] == 0;
      if (!verify_model())
        throw std::logic_error("internal error: model fails verification");
      for (int32_t a : assumed)
        if (value(a) != 0)
          throw std::logic_error("internal error: assumption not satisfied");
      return finish(Verdict::Sat);
    }
    ++total_stats_.decisions;
    trail_lim_.push_back(static_cast<int32_t>(trail_.size()));
    enqueue(2 * v + phase_[v], kNoReason);
  }
}

// ---- activity-ordered heap ----

bool Solver::heap_less(int a, int b) const {
  if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
  return a < b;
}

void Solver::heap_insert(int v) {
  heap_pos_[v] = static_cast<int32_t>(heap_.size());
  heap_.push_back(v);
  heap_sift_up(heap_.size() - 1);
}

void Solver::heap_update(int v) {
  if (heap_pos_[v] >= 0) {
    heap_sift_up(heap_pos_[v]);
    heap_sift_down(heap_pos_[v]);
  }
}

int Solver::heap_pop() {
  int v = heap_[0];
  heap_pos_[v] = -1;
  if (heap_.size() > 1) {
    heap_[0] = heap_.back();
    heap_pos_[heap_[0]] = 0;
    heap_.pop_back();
    heap_sift_down(0);
  } else {
    heap_.pop_back();
  }
  return v;
}

void Solver::heap_sift_up(size_t i) {
  int v = heap_[i];
  while (i > 0) {
    size_t p = (i - 1) / 2;
    if (!heap_less(v, heap_[p])) break;
    heap_[i] = heap_[p];
    heap_pos_[heap_[i]] = static_cast<int32_t>(i);
    i = p;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int32_t>(i);
}

void Solver::heap_sift_down(size_t i) {
  int v = heap_[i];
  while (true) {
    size_t l = 2 * i + 1, r = 2 * i + 2, best = i;
    int best_v = v;
    if (l < heap_.size() && heap_less(heap_[l], best_v)) {
      best = l;
      best_v = heap_[l];
    }
    if (r < heap_.size() && heap_less(heap_[r], best_v)) {
      best = r;
      best_v = heap_[r];
    }
    if (best == i) break;
    heap_[i] = heap_[best];
    heap_pos_[heap_[i]] = static_cast<int32_t>(i);
    i = best;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int32_t>(i);
}

}  // namespace tbn::sat
