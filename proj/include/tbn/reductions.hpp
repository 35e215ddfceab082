#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tbn/model.hpp"

namespace tbn {

// An ExactCover question: does some subset of `sets` partition their union?
struct ExactCoverInstance {
  std::vector<std::vector<std::string>> sets;  // duplicates within a set rejected

  std::vector<std::string> universe() const;          // sorted union Y
  std::vector<std::string> flatten_multiset() const;  // sorted multiset X'
};

// T_j(X): j-1 site-renamed copies of the basic transform, with the leftover
// (X' - Y) monomers merged into one. j = 2 is the basic transform with
// unrenamed sites. Rejects instances where X' - Y is empty (that monomer
// would have no sites and the polymer-count gap collapses).
Tbn exact_cover_to_tbn(const ExactCoverInstance& x, int j = 2);

struct Graph {
  std::vector<std::string> vertices;                            // sorted, unique
  std::vector<std::pair<std::string, std::string>> edges;       // lo < hi, unique

  static Graph from_edges(std::vector<std::pair<std::string, std::string>> edges);
  bool has_vertex(const std::string& v) const;
  std::vector<std::string> neighbors(const std::string& v) const;
};

// Template monomer carrying one site per edge, plus one monomer per vertex
// with the complemented incident edges. S equals the maximum independent set
// size plus one, and a vertex monomer is stably free exactly when the vertex
// lies in some maximum independent set. Requires every vertex to have an
// incident edge.
std::pair<Tbn, std::map<std::string, int>> graph_mis_to_tbn(const Graph& g);

// Duplicate-graph transform: returns (G-dot, m-dot) such that `target` is in
// some minimum vertex cover of g iff m-dot is in some maximum independent
// set of G-dot. Duplicated vertices get a "_p" suffix.
std::pair<Graph, std::string> vc_member_to_mis_member(const Graph& g,
                                                      const std::string& target);

// Perfect-binary-tree family: 2^n - 1 monomers in level order (root first),
// each with two child-link sites, one parent-link site, and a unique marker
// site. Its saturated configurations blow up super-exponentially while S is
// always 1.
Tbn tree_tbn(int n);
Tbn tree_tbn_shuffled(int n, uint64_t seed);

}  // namespace tbn
