// tbn: thermodynamic binding network solver front end.
//
// Exit codes: 0 success (stably-free queries: the monomer is stably free),
// 1 stably-free verdict "no", 2 input/usage error, 3 solver or enumeration
// budget exceeded, 4 external-solver or internal failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tbn/encoder.hpp"
#include "tbn/external_solver.hpp"
#include "tbn/model.hpp"
#include "tbn/oracle.hpp"
#include "tbn/parser.hpp"
#include "tbn/queries.hpp"
#include "tbn/reductions.hpp"
#include "tbn/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotFree = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitRuntime = 4;

struct CommonOptions {
  std::string solver = "embedded";
  bool solver_given = false;
  uint64_t seed = 0;
  uint64_t max_conflicts = 1'000'000;
  bool json = false;
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--solver", common.solver,
                  "'embedded' or an external DIMACS solver command with a "
                  "{file} placeholder (default: $TBN_SOLVER or embedded)")
      ->each([&common](const std::string&) { common.solver_given = true; });
  cmd->add_option("--seed", common.seed, "embedded solver tie-breaking seed");
  cmd->add_option("--max-conflicts", common.max_conflicts,
                  "embedded solver conflict budget");
  cmd->add_flag("--json", common.json, "machine-readable output on stdout");
  cmd->add_flag("--strict", common.strict,
                "reject TBNs with a self-complementary monomer");
}

tbn::QueryOptions query_options(const CommonOptions& common) {
  tbn::QueryOptions opt;
  std::string solver = common.solver;
  if (!common.solver_given) {
    if (const char* env = std::getenv("TBN_SOLVER"); env && *env) solver = env;
  }
  if (solver != "embedded") {
    opt.backend = tbn::SolverBackend::External;
    opt.external_command = solver;
  }
  opt.seed = common.seed;
  opt.limits.max_conflicts = common.max_conflicts;
  return opt;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << content;
}

tbn::Tbn load_tbn(const std::string& path, const CommonOptions& common) {
  return tbn::parse_tbn(read_file(path), {.strict = common.strict});
}

std::string monomer_text(const tbn::Tbn& t, int m) {
  std::ostringstream out;
  if (t.monomer(m).label)
    out << *t.monomer(m).label;
  else
    out << '#' << m;
  out << '{';
  const auto& sites = t.monomer(m).sites;
  for (size_t i = 0; i < sites.size(); ++i) {
    if (i) out << ' ';
    out << tbn::to_string(sites[i]);
  }
  out << '}';
  return out.str();
}

void print_witness(const tbn::Tbn& t, const tbn::Configuration& c) {
  tbn::PolymerPartition part = tbn::polymers(t, c);
  for (int g = 0; g < part.count(); ++g) {
    std::cout << "polymer " << g + 1 << ':';
    for (int m : part.groups[g]) std::cout << ' ' << monomer_text(t, m);
    std::cout << '\n';
  }
  if (!c.pairs().empty()) {
    std::cout << "pairs:";
    for (const auto& [a, b] : c.pairs())
      std::cout << ' ' << tbn::site_ref_string(t, a) << '-'
                << tbn::site_ref_string(t, b);
    std::cout << '\n';
  }
}

// ---- solve ----

int run_solve(const std::string& file, const CommonOptions& common,
              std::optional<int> min_polymers, bool from_dimacs) {
  if (from_dimacs) {
    tbn::CnfInstance cnf = tbn::parse_dimacs(read_file(file));
    tbn::sat::Solver solver(common.seed);
    solver.reserve_vars(cnf.variable_count());
    for (const auto& clause : cnf.clauses()) solver.add_clause(clause);
    tbn::sat::Outcome out = solver.solve({}, {common.max_conflicts});
    if (out.verdict == tbn::sat::Verdict::Unknown) {
      std::cout << "s UNKNOWN\n";
      return kExitBudget;
    }
    if (out.verdict == tbn::sat::Verdict::Unsat) {
      std::cout << "s UNSATISFIABLE\n";
      return kExitOk;
    }
    std::cout << "s SATISFIABLE\n";
    std::cout << "v";
    for (int v = 1; v <= cnf.variable_count(); ++v)
      std::cout << ' ' << (out.model[v] ? v : -v);
    std::cout << " 0\n";
    return kExitOk;
  }

  tbn::Tbn t = load_tbn(file, common);
  tbn::QueryEngine engine(t, query_options(common));

  if (min_polymers) {
    if (*min_polymers < 1) throw std::invalid_argument("--min-polymers must be >= 1");
    std::optional<tbn::Configuration> witness =
        t.empty() ? std::nullopt : engine.saturated_config_exists(*min_polymers);
    if (common.json) {
      nlohmann::json doc;
      doc["schema_version"] = 1;
      doc["min_polymers"] = *min_polymers;
      doc["satisfiable"] = witness.has_value();
      doc["polymers"] = nlohmann::json::array();
      if (witness)
        for (const auto& group : tbn::polymers(t, *witness).groups) {
          nlohmann::json members = nlohmann::json::array();
          for (int m : group)
            if (t.monomer(m).label)
              members.push_back(*t.monomer(m).label);
            else
              members.push_back(m);
          doc["polymers"].push_back(members);
        }
      std::cout << doc.dump(2) << '\n';
    } else if (witness) {
      std::cout << "saturated configuration with >= " << *min_polymers
                << " polymers: found\n";
      print_witness(t, *witness);
    } else {
      std::cout << "saturated configuration with >= " << *min_polymers
                << " polymers: none\n";
    }
    return kExitOk;
  }

  tbn::QueryResult result = engine.solve_query();
  if (common.json) {
    std::cout << tbn::emit_result_json(result, t) << '\n';
  } else {
    std::cout << "S = " << result.stable_polymer_count << '\n';
    if (result.witness) print_witness(t, *result.witness);
  }
  return kExitOk;
}

// ---- stably-free ----

int run_stably_free(const std::string& file, const std::string& monomer,
                    const CommonOptions& common, bool direct, bool batch) {
  tbn::Tbn t = load_tbn(file, common);
  int m = tbn::resolve_monomer(t, monomer);
  tbn::QueryOptions opt = query_options(common);
  opt.batch_queries = batch;
  tbn::QueryEngine engine(t, opt);
  tbn::QueryResult result =
      direct ? engine.stably_free_direct(m) : engine.stably_free(m);
  if (common.json) {
    std::cout << tbn::emit_result_json(result, t) << '\n';
  } else {
    std::cout << "S = " << result.stable_polymer_count << '\n';
    std::cout << "monomer " << monomer_text(t, m)
              << " stably free: " << (*result.free_verdict ? "yes" : "no") << '\n';
    if (result.witness) print_witness(t, *result.witness);
  }
  return *result.free_verdict ? kExitOk : kExitNotFree;
}

// ---- encode ----

int run_encode(const std::string& file, const CommonOptions& common, int k,
               const std::string& out_path, const std::string& free_monomer,
               const std::string& amo) {
  tbn::Tbn t = load_tbn(file, common);
  if (t.empty()) throw std::invalid_argument("cannot encode an empty TBN");
  if (k < 1 || k > t.monomer_count())
    throw std::invalid_argument("k must be between 1 and the monomer count (" +
                                std::to_string(t.monomer_count()) + ")");
  tbn::EncodeOptions opts;
  opts.at_most_one = amo == "sequential" ? tbn::AtMostOneStyle::Sequential
                                         : tbn::AtMostOneStyle::Pairwise;
  tbn::Encoding enc = tbn::encode_saturation(t, opts);
  tbn::encode_polymer_count(enc, t, k, tbn::CardinalityLayout::BandedFixedK);
  if (!free_monomer.empty())
    tbn::encode_monomer_free(enc, t, tbn::resolve_monomer(t, free_monomer));
  write_output(out_path, tbn::to_dimacs(enc.cnf, &enc.map));
  return kExitOk;
}

// ---- enumerate ----

int run_enumerate(const std::string& file, const CommonOptions& common,
                  const std::string& filter, size_t limit, uint64_t bound) {
  tbn::Tbn t = load_tbn(file, common);
  tbn::EnumerationFilter f = filter == "saturated"
                                 ? tbn::EnumerationFilter::Saturated
                                 : tbn::EnumerationFilter::All;
  tbn::EnumerationReport report = tbn::enumerate_report(t, f, limit, bound);
  if (common.json) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["filter"] = filter;
    if (f == tbn::EnumerationFilter::All) doc["total"] = report.total;
    doc["saturated"] = report.saturated;
    doc["stable"] = report.stable;
    doc["stable_polymer_count"] = report.max_polymers;
    std::cout << doc.dump(2) << '\n';
  } else {
    if (f == tbn::EnumerationFilter::All) std::cout << report.total << " total, ";
    std::cout << report.saturated << " saturated, " << report.stable
              << " stable, S=" << report.max_polymers << '\n';
    for (size_t i = 0; i < report.samples.size(); ++i) {
      const auto& sample = report.samples[i];
      std::cout << "config " << i + 1
                << ": polymers=" << sample.polymer_count
                << (sample.saturated ? " saturated" : "") << " pairs:";
      for (const auto& [a, b] : sample.configuration.pairs())
        std::cout << ' ' << tbn::site_ref_string(t, a) << '-'
                  << tbn::site_ref_string(t, b);
      std::cout << '\n';
    }
  }
  return kExitOk;
}

// ---- gen ----

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

tbn::Graph parse_edge_list(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (const std::string& edge : split(text, ',')) {
    std::vector<std::string> ends = split(edge, '-');
    if (ends.size() != 2)
      throw std::invalid_argument("malformed edge '" + edge + "' (expected 'u-v')");
    edges.emplace_back(ends[0], ends[1]);
  }
  return tbn::Graph::from_edges(std::move(edges));
}

int run_gen(const std::string& family, const std::string& sets_text, int j_copies,
            const std::string& edges_text, const std::string& target, int depth,
            bool shuffle, uint64_t seed, const std::string& out_path) {
  std::ostringstream out;
  if (family == "exact-cover") {
    tbn::ExactCoverInstance x;
    for (const std::string& s : split(sets_text, ';')) x.sets.push_back(split(s, ','));
    tbn::Tbn t = tbn::exact_cover_to_tbn(x, j_copies);
    out << "# exact-cover instance: " << sets_text << ", j=" << j_copies << '\n'
        << tbn::serialize_tbn(t);
  } else if (family == "graph-mis") {
    tbn::Graph g = parse_edge_list(edges_text);
    auto [t, vertex_map] = tbn::graph_mis_to_tbn(g);
    out << "# graph: " << edges_text << '\n'
        << "# S = max independent set + 1; a vertex monomer is stably free\n"
        << "# iff the vertex is in some maximum independent set\n"
        << tbn::serialize_tbn(t);
  } else if (family == "vc-transform") {
    tbn::Graph g = parse_edge_list(edges_text);
    auto [gdot, mdot] = tbn::vc_member_to_mis_member(g, target);
    auto [t, vertex_map] = tbn::graph_mis_to_tbn(gdot);
    out << "# vertex-cover membership transform of: " << edges_text
        << " target=" << target << '\n'
        << "# transformed graph edges:";
    for (const auto& [a, b] : gdot.edges) out << ' ' << a << '-' << b;
    out << '\n'
        << "# query monomer '" << mdot << "': stably free iff '" << target
        << "' is in some minimum vertex cover\n"
        << tbn::serialize_tbn(t);
  } else if (family == "tree") {
    tbn::Tbn t = shuffle ? tbn::tree_tbn_shuffled(depth, seed) : tbn::tree_tbn(depth);
    out << tbn::serialize_tbn(t);
  } else {
    throw std::invalid_argument("unknown generator family: " + family);
  }
  write_output(out_path, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamic binding network solver"};
  app.require_subcommand(1);

  CommonOptions common;

  auto* solve = app.add_subcommand(
      "solve", "compute the stable polymer count S(T) and one witness");
  std::string solve_file;
  std::optional<int> min_polymers;
  bool from_dimacs = false;
  solve->add_option("file", solve_file, "TBN file (or DIMACS with --from-dimacs)")
      ->required();
  solve->add_option("--min-polymers", min_polymers,
                    "single existence query for >= k polymers instead of the "
                    "full search");
  solve->add_flag("--from-dimacs", from_dimacs,
                  "treat the input as a DIMACS CNF and report s/v lines");
  add_common(solve, common);

  auto* sfree = app.add_subcommand(
      "stably-free",
      "decide whether a monomer is free in some stable configuration");
  std::string sfree_file, sfree_monomer;
  bool direct = false, batch = false;
  sfree->add_option("file", sfree_file, "TBN file")->required();
  sfree->add_option("--monomer", sfree_monomer, "monomer label or 0-based index")
      ->required();
  sfree->add_flag("--direct", direct,
                  "decide by one query at k = S(T) instead of the two-query method");
  sfree->add_flag("--batch", batch, "issue all 2n existence queries as one batch");
  add_common(sfree, common);

  auto* encode = app.add_subcommand(
      "encode", "write the CNF for 'some saturated configuration has >= k "
                "polymers' as DIMACS");
  std::string encode_file, encode_out, encode_free, encode_amo = "pairwise";
  int encode_k = 0;
  encode->add_option("file", encode_file, "TBN file")->required();
  encode->add_option("-k,--min-polymers", encode_k, "polymer target")->required();
  encode->add_option("-o,--output", encode_out, "output path (default stdout)");
  encode->add_option("--free-monomer", encode_free,
                     "also force this monomer free (label or index)");
  encode->add_option("--amo", encode_amo, "at-most-one style")
      ->check(CLI::IsMember({"pairwise", "sequential"}));
  add_common(encode, common);

  auto* enumerate = app.add_subcommand(
      "enumerate", "exhaustively enumerate configurations (small TBNs)");
  std::string enum_file, enum_filter = "all";
  size_t enum_limit = 0;
  uint64_t enum_bound = tbn::kDefaultEnumerationBound;
  enumerate->add_option("file", enum_file, "TBN file")->required();
  enumerate->add_option("--filter", enum_filter, "all | saturated")
      ->check(CLI::IsMember({"all", "saturated"}));
  enumerate->add_option("--limit", enum_limit,
                        "also print up to this many configurations");
  enumerate->add_option("--bound", enum_bound,
                        "refuse when the configuration-count estimate exceeds this");
  add_common(enumerate, common);

  auto* gen = app.add_subcommand("gen", "generate TBN instances");
  std::string gen_family, gen_sets, gen_edges, gen_target, gen_out;
  int gen_j = 2, gen_depth = 3;
  bool gen_shuffle = false;
  uint64_t gen_seed = 0;
  gen->add_option("family", gen_family,
                  "exact-cover | graph-mis | vc-transform | tree")
      ->required()
      ->check(CLI::IsMember({"exact-cover", "graph-mis", "vc-transform", "tree"}));
  gen->add_option("--sets", gen_sets, "exact-cover sets, e.g. \"a,b;b,c;c\"");
  gen->add_option("-j,--copies", gen_j, "gap amplification factor (>= 2)");
  gen->add_option("--edges", gen_edges, "edge list, e.g. \"a-b,b-c\"");
  gen->add_option("--target", gen_target, "target vertex (vc-transform)");
  gen->add_option("-n,--depth", gen_depth, "tree depth (tree)");
  gen->add_flag("--shuffle", gen_shuffle, "shuffle tree monomer order");
  gen->add_option("--seed", gen_seed, "shuffle seed");
  gen->add_option("-o,--output", gen_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return run_solve(solve_file, common, min_polymers, from_dimacs);
    if (sfree->parsed())
      return run_stably_free(sfree_file, sfree_monomer, common, direct, batch);
    if (encode->parsed())
      return run_encode(encode_file, common, encode_k, encode_out, encode_free,
                        encode_amo);
    if (enumerate->parsed())
      return run_enumerate(enum_file, common, enum_filter, enum_limit, enum_bound);
    if (gen->parsed())
      return run_gen(gen_family, gen_sets, gen_j, gen_edges, gen_target,
                     gen_depth, gen_shuffle, gen_seed, gen_out);
  } catch (const tbn::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const tbn::SolverBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const tbn::EnumerationBoundExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const tbn::sat::ExternalSolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInput;
}
