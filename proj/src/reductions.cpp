#include "tbn/reductions.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace tbn {

std::vector<std::string> ExactCoverInstance::universe() const {
  std::set<std::string> u;
  for (const auto& s : sets) u.insert(s.begin(), s.end());
  return {u.begin(), u.end()};
}

std::vector<std::string> ExactCoverInstance::flatten_multiset() const {
  std::vector<std::string> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  return all;
}

Tbn exact_cover_to_tbn(const ExactCoverInstance& x, int j) {
  if (j < 2) throw std::invalid_argument("copy parameter j must be >= 2");
  if (x.sets.empty()) throw std::invalid_argument("instance has no sets");
  for (const auto& s : x.sets) {
    if (s.empty()) throw std::invalid_argument("instance contains an empty set");
    std::set<std::string> dedup(s.begin(), s.end());
    if (dedup.size() != s.size())
      throw std::invalid_argument("a set contains a duplicate element");
  }

  std::vector<std::string> y = x.universe();
  std::vector<std::string> flat = x.flatten_multiset();
  std::vector<std::string> leftover;  // X' - Y as a multiset difference
  {
    auto it = y.begin();
    for (const std::string& e : flat) {
      if (it != y.end() && *it == e) {
        ++it;  // one copy of each element is consumed by Y
        continue;
      }
      leftover.push_back(e);
    }
  }
  if (leftover.empty())
    throw std::invalid_argument(
        "X' - Y is empty (X itself partitions its union); the transform "
        "needs at least one repeated element");

  auto prefixed = [&](int copy, const std::string& name, bool starred) {
    std::string full = j == 2 ? name : std::to_string(copy) + "_" + name;
    return SiteType{full, starred};
  };

  std::vector<Monomer> monomers;
  for (const auto& s : x.sets)
    for (int copy = 1; copy <= j - 1; ++copy) {
      Monomer m;
      for (const std::string& e : s) m.sites.push_back(prefixed(copy, e, false));
      monomers.push_back(std::move(m));
    }
  for (int copy = 1; copy <= j - 1; ++copy) {
    Monomer m;
    for (const std::string& e : y) m.sites.push_back(prefixed(copy, e, true));
    monomers.push_back(std::move(m));
  }
  Monomer merged;
  for (int copy = 1; copy <= j - 1; ++copy)
    for (const std::string& e : leftover)
      merged.sites.push_back(prefixed(copy, e, true));
  monomers.push_back(std::move(merged));
  return Tbn(std::move(monomers));
}

Graph Graph::from_edges(std::vector<std::pair<std::string, std::string>> edges) {
  Graph g;
  std::set<std::pair<std::string, std::string>> edge_set;
  std::set<std::string> vertex_set;
  for (auto& [a, b] : edges) {
    if (a == b) throw std::invalid_argument("self-loop on vertex '" + a + "'");
    if (a > b) std::swap(a, b);
    edge_set.insert({a, b});
    vertex_set.insert(a);
    vertex_set.insert(b);
  }
  g.vertices.assign(vertex_set.begin(), vertex_set.end());
  g.edges.assign(edge_set.begin(), edge_set.end());
  return g;
}

bool Graph::has_vertex(const std::string& v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::vector<std::string> Graph::neighbors(const std::string& v) const {
  std::vector<std::string> out;
  for (const auto& [a, b] : edges) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  return out;
}

std::pair<Tbn, std::map<std::string, int>> graph_mis_to_tbn(const Graph& g) {
  if (g.edges.empty())
    throw std::invalid_argument("graph has no edges; the template monomer would be empty");
  for (const std::string& v : g.vertices)
    if (g.neighbors(v).empty())
      throw std::invalid_argument("vertex '" + v +
                                  "' has no incident edge; its monomer would be empty");

  auto edge_site = [](const std::pair<std::string, std::string>& e) {
    return e.first + "_" + e.second;
  };
  {
    std::set<std::string> names;
    for (const auto& e : g.edges)
      if (!names.insert(edge_site(e)).second)
        throw std::invalid_argument("edge site name collision on '" +
                                    edge_site(e) + "'");
  }

  std::vector<Monomer> monomers;
  Monomer tmpl;
  tmpl.label = "template";
  for (const auto& e : g.edges) tmpl.sites.push_back({edge_site(e), false});
  monomers.push_back(std::move(tmpl));

  std::map<std::string, int> vertex_monomer;
  for (const std::string& v : g.vertices) {
    Monomer m;
    m.label = v;
    for (const auto& e : g.edges)
      if (e.first == v || e.second == v) m.sites.push_back({edge_site(e), true});
    vertex_monomer[v] = static_cast<int>(monomers.size());
    monomers.push_back(std::move(m));
  }
  return {Tbn(std::move(monomers)), std::move(vertex_monomer)};
}

std::pair<Graph, std::string> vc_member_to_mis_member(const Graph& g,
                                                      const std::string& target) {
  if (!g.has_vertex(target))
    throw std::invalid_argument("target vertex '" + target + "' not in graph");

  auto dup = [](const std::string& v) { return v + "_p"; };
  const std::string new_vertex = "m_dot";
  for (const std::string& v : g.vertices) {
    if (g.has_vertex(dup(v)))
      throw std::invalid_argument("vertex name collision on '" + dup(v) + "'");
    if (v == new_vertex)
      throw std::invalid_argument("vertex name collision on '" + new_vertex + "'");
  }

  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [a, b] : g.edges) {
    edges.emplace_back(a, b);
    edges.emplace_back(dup(a), dup(b));
    // cross edges tie each duplicate to its original's neighborhood
    edges.emplace_back(a, dup(b));
    edges.emplace_back(b, dup(a));
  }
  edges.emplace_back(new_vertex, target);
  edges.emplace_back(new_vertex, dup(target));
  return {Graph::from_edges(std::move(edges)), new_vertex};
}

namespace {

Tbn tree_tbn_with_order(int n, const std::vector<int>* order) {
  if (n < 1) throw std::invalid_argument("tree depth must be >= 1");
  if (n > 20) throw std::invalid_argument("tree depth too large");

  // level n is the root; a level-h monomer carries two child-link sites
  // d_{h-1}, one parent-link site d_h*, and a unique marker.
  struct Proto {
    int level;
  };
  std::vector<Proto> protos;
  for (int level = n; level >= 1; --level) {
    int count = 1 << (n - level);
    for (int i = 0; i < count; ++i) protos.push_back({level});
  }

  std::vector<Monomer> monomers;
  for (size_t idx = 0; idx < protos.size(); ++idx) {
    const Proto& p = protos[order ? (*order)[idx] : idx];
    Monomer m;
    std::string child = "d" + std::to_string(p.level - 1);
    m.sites.push_back({child, false});
    m.sites.push_back({child, false});
    m.sites.push_back({"d" + std::to_string(p.level), true});
    m.sites.push_back({"m" + std::to_string(idx + 1), false});
    monomers.push_back(std::move(m));
  }
  return Tbn(std::move(monomers));
}

}  // namespace

Tbn tree_tbn(int n) { return tree_tbn_with_order(n, nullptr); }

Tbn tree_tbn_shuffled(int n, uint64_t seed) {
  int total = (1 << n) - 1;
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  // xorshift-based Fisher-Yates so the permutation is stable across builds
  uint64_t state = seed ? seed : 0x9e3779b97f4a7c15ULL;
  for (int i = total - 1; i > 0; --i) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    std::swap(order[i], order[state % (i + 1)]);
  }
  return tree_tbn_with_order(n, &order);
}

}  // namespace tbn
