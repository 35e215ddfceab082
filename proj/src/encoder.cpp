#include "tbn/encoder.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tbn/parser.hpp"

namespace tbn {

size_t CnfInstance::group_clause_count(std::string_view tag) const {
  size_t n = 0;
  for (const Group& g : groups_)
    if (g.tag == tag) n += g.end - g.begin;
  return n;
}

int CnfInstance::new_variable() { return ++num_vars_; }

void CnfInstance::begin_group(std::string tag) {
  groups_.push_back({std::move(tag), clauses_.size(), clauses_.size()});
}

void CnfInstance::add_clause(std::vector<int> lits) {
  if (lits.empty())
    throw std::logic_error("attempt to add an empty clause");
  for (int lit : lits)
    if (lit == 0 || std::abs(lit) > num_vars_)
      throw std::logic_error("literal out of range: " + std::to_string(lit));
  clauses_.push_back(std::move(lits));
  if (!groups_.empty()) groups_.back().end = clauses_.size();
}

int VarMap::pair_variable(int site_a, int site_b) const {
  if (site_a > site_b) std::swap(site_a, site_b);
  if (site_a < 0 || site_b >= site_count_) return 0;
  return pair_lookup_[static_cast<size_t>(site_a) * site_count_ + site_b];
}

std::span<const int> VarMap::pair_variables_of_site(int site) const {
  return site_pair_vars_.at(site);
}

int VarMap::bind_variable(int mon_p, int mon_q) const {
  if (mon_p == mon_q) return 0;
  return bind_[static_cast<size_t>(mon_p) * monomer_count_ + mon_q];
}

int VarMap::rep_variable(int mon) const { return rep_.at(mon); }

int VarMap::sum_variable(int i, int j) const {
  if (i < 0 || i > sum_rows_ || j < 0 || j > sum_cols_) return 0;
  return sum_[static_cast<size_t>(i) * (sum_cols_ + 1) + j];
}

// Shared helpers for building the encoding; friend of VarMap.
class EncoderState {
 public:
  static int add_var(Encoding& enc, VarMap::Legend legend) {
    int v = enc.cnf.new_variable();
    enc.map.legends_.push_back(std::move(legend));
    return v;
  }

  static void build_pairs(Encoding& enc, const Tbn& t) {
    VarMap& m = enc.map;
    m.site_count_ = t.site_count();
    m.monomer_count_ = t.monomer_count();
    m.site_pair_vars_.assign(t.site_count(), {});
    m.pair_lookup_.assign(static_cast<size_t>(t.site_count()) * t.site_count(), 0);
    for (int s = 0; s < t.site_count(); ++s) {
      for (int u : t.compatible_sites(s)) {
        if (u <= s) continue;
        int v = add_var(enc, {VarMap::Role::Pair, s, u,
                              site_ref_string(t, s) + " " + site_ref_string(t, u)});
        int ms = t.site_monomer(s), mu = t.site_monomer(u);
        m.pairs_.push_back({v, s, u, ms != mu, ms, mu});
        m.pair_lookup_[static_cast<size_t>(s) * m.site_count_ + u] = v;
        m.site_pair_vars_[s].push_back(v);
        m.site_pair_vars_[u].push_back(v);
      }
    }
  }

  static void build_bind_rep(Encoding& enc, const Tbn& t) {
    VarMap& m = enc.map;
    int n = t.monomer_count();
    m.bind_.assign(static_cast<size_t>(n) * n, 0);
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        int v = add_var(enc, {VarMap::Role::Bind, p, q,
                              std::to_string(p) + " " + std::to_string(q)});
        m.bind_[static_cast<size_t>(p) * n + q] = v;
        m.bind_[static_cast<size_t>(q) * n + p] = v;
      }
    m.rep_.assign(n, 0);
    for (int p = 0; p < n; ++p)
      m.rep_[p] = add_var(enc, {VarMap::Role::Rep, p, 0, std::to_string(p)});
  }

  static void build_sum(Encoding& enc, int rows, int cols,
                        int band_k, int band_n) {
    VarMap& m = enc.map;
    m.sum_rows_ = rows;
    m.sum_cols_ = cols;
    m.sum_.assign(static_cast<size_t>(rows + 1) * (cols + 1), 0);
    for (int i = 1; i <= rows; ++i) {
      int lo = band_k > 0 ? std::max(1, band_k - (band_n - i)) : 1;
      int hi = band_k > 0 ? std::min(i, band_k) : std::min(i, cols);
      for (int j = lo; j <= hi; ++j) {
        int v = add_var(enc, {VarMap::Role::Sum, i, j,
                              std::to_string(i) + " " + std::to_string(j)});
        m.sum_[static_cast<size_t>(i) * (cols + 1) + j] = v;
      }
    }
  }
};

namespace {

constexpr int kConstTrue = std::numeric_limits<int>::max();
constexpr int kConstFalse = -kConstTrue;

// Adds a clause after constant folding; drops satisfied clauses.
void add_folded(CnfInstance& cnf, std::initializer_list<int> lits) {
  std::vector<int> out;
  out.reserve(lits.size());
  for (int lit : lits) {
    if (lit == kConstTrue) return;
    if (lit == kConstFalse) continue;
    out.push_back(lit);
  }
  if (out.empty())
    throw std::logic_error("cardinality clause folded to empty");
  cnf.add_clause(std::move(out));
}

void emit_at_most_one_pairwise(Encoding& enc, std::span<const int> vars) {
  for (size_t a = 0; a < vars.size(); ++a)
    for (size_t b = a + 1; b < vars.size(); ++b)
      enc.cnf.add_clause({-vars[a], -vars[b]});
}

// Sinz-style chain: aux r_i commits to "some of vars[0..i] is true".
void emit_at_most_one_sequential(Encoding& enc, std::span<const int> vars,
                                 const std::string& site_note) {
  size_t n = vars.size();
  if (n < 2) return;
  std::vector<int> aux(n - 1);
  for (size_t i = 0; i < n - 1; ++i)
    aux[i] = EncoderState::add_var(
        enc, {VarMap::Role::Aux, 0, 0, "amo " + site_note + " " + std::to_string(i)});
  for (size_t i = 0; i + 1 < n; ++i) enc.cnf.add_clause({-vars[i], aux[i]});
  for (size_t i = 1; i + 1 < n; ++i) enc.cnf.add_clause({-aux[i - 1], aux[i]});
  for (size_t i = 1; i < n; ++i) enc.cnf.add_clause({-aux[i - 1], -vars[i]});
}

}  // namespace

Encoding encode_saturation(const Tbn& t, const EncodeOptions& options) {
  if (t.empty()) throw std::invalid_argument("cannot encode an empty TBN");
  Encoding enc;
  EncoderState::build_pairs(enc, t);

  enc.cnf.begin_group("pair_at_most_one");
  for (int s = 0; s < t.site_count(); ++s) {
    std::span<const int> vars = enc.map.pair_variables_of_site(s);
    if (options.at_most_one == AtMostOneStyle::Pairwise)
      emit_at_most_one_pairwise(enc, vars);
    else
      emit_at_most_one_sequential(enc, vars, site_ref_string(t, s));
  }

  enc.cnf.begin_group("saturation");
  for (int s = 0; s < t.site_count(); ++s) {
    if (!t.site_is_limiting(s)) continue;
    std::span<const int> vars = enc.map.pair_variables_of_site(s);
    // a limiting type's complement occurs at least once, so C(s) is non-empty
    assert(!vars.empty());
    enc.cnf.add_clause(std::vector<int>(vars.begin(), vars.end()));
  }
  return enc;
}

void encode_polymer_count(Encoding& enc, const Tbn& t, int k,
                          CardinalityLayout layout) {
  int n = t.monomer_count();
  if (n == 0) throw std::invalid_argument("cannot encode an empty TBN");
  if (k < 1) throw std::invalid_argument("polymer target must be >= 1");
  if (k > n) {
    // more polymers than monomers is impossible; emit an UNSAT surrogate
    enc.cnf.begin_group("infeasible_target");
    int v = EncoderState::add_var(enc, {VarMap::Role::Aux, 0, 0, "infeasible"});
    enc.cnf.add_clause({v});
    enc.cnf.add_clause({-v});
    enc.cnf.trivially_unsat = true;
    return;
  }

  EncoderState::build_bind_rep(enc, t);

  enc.cnf.begin_group("pair_implies_bind");
  for (const VarMap::PairEntry& p : enc.map.pair_entries())
    if (p.inter)
      enc.cnf.add_clause({-p.var, enc.map.bind_variable(p.mon_a, p.mon_b)});

  enc.cnf.begin_group("bind_transitivity");
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      for (int r = q + 1; r < n; ++r) {
        int pq = enc.map.bind_variable(p, q);
        int pr = enc.map.bind_variable(p, r);
        int qr = enc.map.bind_variable(q, r);
        enc.cnf.add_clause({-pq, -pr, qr});
        enc.cnf.add_clause({-pq, -qr, pr});
        enc.cnf.add_clause({-pr, -qr, pq});
      }

  enc.cnf.begin_group("representative");
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      enc.cnf.add_clause({-enc.map.bind_variable(p, q), -enc.map.rep_variable(q)});

  bool banded = layout == CardinalityLayout::BandedFixedK;
  int cols = banded ? k : n;
  EncoderState::build_sum(enc, n, cols, banded ? k : 0, n);

  // Sum(i,j) cells outside the stored band are constants: true at or below
  // j = 0 and below the reachable diagonal, false above j = min(i, cols).
  auto cell = [&](int i, int j) -> int {
    if (j <= 0) return kConstTrue;
    if (j > std::min(i, cols)) return kConstFalse;
    if (banded && j < k - (n - i)) return kConstTrue;
    int v = enc.map.sum_variable(i, j);
    assert(v != 0);
    return v;
  };

  // Both clause schemas are instantiated from a virtual row i = 0 with
  // Sum(0,0) true and Sum(0,j>=1) false; the j = 1 instance of the second
  // schema is the base clause Sum(1,1) -> Rep(m_1).
  enc.cnf.begin_group("cardinality_step");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < cols; ++j)
      add_folded(enc.cnf, {cell(i, j), -cell(i + 1, j + 1)});

  enc.cnf.begin_group("cardinality_rep");
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= cols; ++j)
      add_folded(enc.cnf,
                 {cell(i, j), -cell(i + 1, j), enc.map.rep_variable(i)});

  if (banded) {
    enc.cnf.begin_group("cardinality_target");
    add_folded(enc.cnf, {cell(n, k)});
  }
}

void encode_monomer_free(Encoding& enc, const Tbn& t, int monomer) {
  if (monomer < 0 || monomer >= t.monomer_count())
    throw std::out_of_range("monomer id out of range");
  enc.cnf.begin_group("free_monomer");
  for (const VarMap::PairEntry& p : enc.map.pair_entries())
    if (p.inter && (p.mon_a == monomer || p.mon_b == monomer))
      enc.cnf.add_clause({-p.var});
}

Configuration decode_model(const VarMap& map, const std::vector<bool>& model) {
  std::vector<std::pair<int, int>> pairs;
  for (const VarMap::PairEntry& p : map.pair_entries()) {
    if (static_cast<size_t>(p.var) >= model.size())
      throw std::invalid_argument("model does not cover all pair variables");
    if (model[p.var]) pairs.emplace_back(p.site_a, p.site_b);
  }
  return Configuration(std::move(pairs));
}

std::string to_dimacs(const CnfInstance& cnf, const VarMap* map) {
  std::ostringstream out;
  if (map) {
    static const char* kRoleNames[] = {"PAIR", "BIND", "REP", "SUM", "AUX"};
    for (int v = 1; v <= cnf.variable_count(); ++v) {
      const VarMap::Legend& legend = map->legend(v);
      out << "c var " << v << ' ' << kRoleNames[static_cast<int>(legend.role)]
          << ' ' << legend.note << '\n';
    }
    for (const CnfInstance::Group& g : cnf.groups())
      out << "c group " << g.tag << ' ' << g.begin << ' ' << g.end << '\n';
  }
  out << "p cnf " << cnf.variable_count() << ' ' << cnf.clause_count() << '\n';
  for (const std::vector<int>& clause : cnf.clauses()) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

CnfInstance parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  CnfInstance cnf;
  std::string tok;
  int declared_vars = -1;
  long declared_clauses = -1;
  std::vector<int> current;
  while (in >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      if (!(in >> fmt >> declared_vars >> declared_clauses) || fmt != "cnf")
        throw std::invalid_argument("malformed DIMACS header");
      while (cnf.variable_count() < declared_vars) cnf.new_variable();
      continue;
    }
    int lit;
    try {
      lit = std::stoi(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed DIMACS token: '" + tok + "'");
    }
    if (lit == 0) {
      if (!current.empty()) {
        cnf.add_clause(current);
        current.clear();
      }
      continue;
    }
    if (declared_vars < 0)
      throw std::invalid_argument("DIMACS literal before header");
    if (std::abs(lit) > declared_vars)
      throw std::invalid_argument("DIMACS literal out of range: " + tok);
    current.push_back(lit);
  }
  if (!current.empty()) cnf.add_clause(current);
  return cnf;
}

}  // namespace tbn
