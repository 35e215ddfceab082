#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbn/model.hpp"

namespace tbn {

// Clause database. Variables are 1-based; literals are signed variable
// indices. Clause groups record which constraint family emitted each run of
// clauses.
class CnfInstance {
 public:
  int variable_count() const { return num_vars_; }
  size_t clause_count() const { return clauses_.size(); }
  std::span<const std::vector<int>> clauses() const { return clauses_; }

  struct Group {
    std::string tag;
    size_t begin, end;  // clause index range [begin, end)
  };
  std::span<const Group> groups() const { return groups_; }
  size_t group_clause_count(std::string_view tag) const;

  int new_variable();
  void begin_group(std::string tag);
  void add_clause(std::vector<int> lits);
  void add_clause(std::initializer_list<int> lits) {
    add_clause(std::vector<int>(lits));
  }

  // Set when a query was rejected up front (e.g. k > n); the clause list
  // then contains an unsatisfiable surrogate rather than a real encoding.
  bool trivially_unsat = false;

 private:
  int num_vars_ = 0;
  std::vector<std::vector<int>> clauses_;
  std::vector<Group> groups_;
};

// Bidirectional map between SAT variables and their semantic roles.
class VarMap {
 public:
  struct PairEntry {
    int var;
    int site_a, site_b;  // global site ids, site_a < site_b
    bool inter;          // sites on distinct monomers
    int mon_a, mon_b;
  };

  int pair_variable(int site_a, int site_b) const;  // 0 when absent
  std::span<const PairEntry> pair_entries() const { return pairs_; }
  std::span<const int> pair_variables_of_site(int site) const;

  int bind_variable(int mon_p, int mon_q) const;  // symmetric; 0 when absent
  int rep_variable(int mon) const;
  int sum_variable(int i, int j) const;  // 0 when constant / out of band
  int sum_rows() const { return sum_rows_; }
  int sum_cols() const { return sum_cols_; }

  enum class Role { Pair, Bind, Rep, Sum, Aux };
  struct Legend {
    Role role;
    int a = 0, b = 0;
    std::string note;
  };
  // Role of a variable, 1-based; entries appear in allocation order.
  const Legend& legend(int var) const { return legends_.at(var - 1); }

 private:
  friend class EncoderState;
  std::vector<PairEntry> pairs_;
  std::vector<std::vector<int>> site_pair_vars_;  // per site id
  std::vector<int> pair_lookup_;                  // site_a * S + site_b -> var
  int site_count_ = 0;
  std::vector<int> bind_;  // n*n matrix
  std::vector<int> rep_;
  std::vector<int> sum_;  // (rows+1) x (cols+1), index i*(cols+1)+j
  int sum_rows_ = 0, sum_cols_ = 0;
  int monomer_count_ = 0;
  std::vector<Legend> legends_;
};

struct Encoding {
  CnfInstance cnf;
  VarMap map;
};

enum class AtMostOneStyle { Pairwise, Sequential };

// Full triangle keeps Sum(i,j) for every j <= i and omits the target unit
// clause so one encoding serves every k via an assumption on Sum(n,k).
// Banded keeps only the cells feasible for one fixed k and asserts the unit.
enum class CardinalityLayout { BandedFixedK, FullTriangleIncremental };

struct EncodeOptions {
  AtMostOneStyle at_most_one = AtMostOneStyle::Pairwise;
};

// Pair variables for every compatible site pair, at-most-one per site, and
// one at-least-one clause per limiting site. Models are exactly the
// saturated configurations.
Encoding encode_saturation(const Tbn& t, const EncodeOptions& options = {});

// Adds Bind conversion + transitivity, Rep, and the sequential-counter
// cardinality grid. With BandedFixedK the result is satisfiable iff some
// saturated configuration has at least k polymers.
void encode_polymer_count(Encoding& enc, const Tbn& t, int k,
                          CardinalityLayout layout = CardinalityLayout::BandedFixedK);

// Unit clauses forcing every inter-monomer pair touching `monomer` off.
// Intra-monomer pairs on it stay unconstrained.
void encode_monomer_free(Encoding& enc, const Tbn& t, int monomer);

// Configuration containing exactly the Pair variables assigned true.
// `model` is indexed by variable (1-based), as produced by the solver.
Configuration decode_model(const VarMap& map, const std::vector<bool>& model);

std::string to_dimacs(const CnfInstance& cnf, const VarMap* map = nullptr);

// Parses DIMACS text (comments tolerated) back into a clause database.
CnfInstance parse_dimacs(std::string_view text);

}  // namespace tbn
