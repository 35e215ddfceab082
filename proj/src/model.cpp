#include "tbn/model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tbn {

SiteType complement(const SiteType& t) { return {t.name, !t.starred}; }

std::string to_string(const SiteType& t) {
  return t.starred ? t.name + "*" : t.name;
}

Tbn::Tbn(std::vector<Monomer> monomers) : monomers_(std::move(monomers)) {
  site_offsets_.reserve(monomers_.size());
  for (size_t m = 0; m < monomers_.size(); ++m) {
    if (monomers_[m].sites.empty())
      throw std::invalid_argument("monomer " + std::to_string(m) +
                                  " has no sites");
    site_offsets_.push_back(static_cast<int>(site_types_.size()));
    for (const SiteType& s : monomers_[m].sites) {
      instances_[s].push_back(static_cast<int>(site_types_.size()));
      site_types_.push_back(s);
      site_monomer_.push_back(static_cast<int>(m));
    }
  }
  limiting_flag_.resize(site_types_.size());
  for (size_t s = 0; s < site_types_.size(); ++s)
    limiting_flag_[s] = is_limiting(site_types_[s]);
}

int Tbn::site_id(SiteRef ref) const {
  const Monomer& m = monomer(ref.monomer);
  if (ref.slot < 0 || ref.slot >= static_cast<int>(m.sites.size()))
    throw std::out_of_range("site slot out of range");
  return site_offsets_[ref.monomer] + ref.slot;
}

SiteRef Tbn::site_ref(int site) const {
  int m = site_monomer_.at(site);
  return {m, site - site_offsets_[m]};
}

int Tbn::type_count(const SiteType& t) const {
  auto it = instances_.find(t);
  return it == instances_.end() ? 0 : static_cast<int>(it->second.size());
}

const std::vector<int>& Tbn::instances_of(const SiteType& t) const {
  static const std::vector<int> kNone;
  auto it = instances_.find(t);
  return it == instances_.end() ? kNone : it->second;
}

bool Tbn::is_limiting(const SiteType& t) const {
  return type_count(complement(t)) >= type_count(t);
}

std::vector<SiteType> Tbn::limiting_site_types() const {
  std::vector<SiteType> out;
  for (const auto& [type, ids] : instances_)
    if (!ids.empty() && is_limiting(type)) out.push_back(type);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Tbn::compatible_sites(int site) const {
  return instances_of(complement(site_type(site)));
}

bool Tbn::has_self_complementary_monomer() const {
  for (const Monomer& m : monomers_) {
    for (size_t i = 0; i < m.sites.size(); ++i) {
      SiteType want = complement(m.sites[i]);
      for (size_t j = i + 1; j < m.sites.size(); ++j)
        if (m.sites[j] == want) return true;
    }
  }
  return false;
}

Tbn remove_monomer(const Tbn& t, int monomer_id) {
  if (monomer_id < 0 || monomer_id >= t.monomer_count())
    throw std::out_of_range("monomer id out of range");
  std::vector<Monomer> rest;
  rest.reserve(t.monomer_count() - 1);
  for (int m = 0; m < t.monomer_count(); ++m)
    if (m != monomer_id) rest.push_back(t.monomer(m));
  return Tbn(std::move(rest));
}

Configuration::Configuration(std::vector<std::pair<int, int>> pairs)
    : pairs_(std::move(pairs)) {
  for (auto& [a, b] : pairs_)
    if (a > b) std::swap(a, b);
  std::sort(pairs_.begin(), pairs_.end());
}

int Configuration::partner(int site) const {
  for (const auto& [a, b] : pairs_) {
    if (a == site) return b;
    if (b == site) return a;
  }
  return -1;
}

bool is_valid_configuration(const Tbn& t, const Configuration& c) {
  std::vector<bool> used(t.site_count(), false);
  for (const auto& [a, b] : c.pairs()) {
    if (a < 0 || b < 0 || a >= t.site_count() || b >= t.site_count()) return false;
    if (a == b || used[a] || used[b]) return false;
    used[a] = used[b] = true;
    if (t.site_type(a) != complement(t.site_type(b))) return false;
  }
  return true;
}

bool is_saturated(const Tbn& t, const Configuration& c) {
  std::vector<bool> paired(t.site_count(), false);
  for (const auto& [a, b] : c.pairs()) paired[a] = paired[b] = true;
  for (int s = 0; s < t.site_count(); ++s)
    if (t.site_is_limiting(s) && !paired[s]) return false;
  return true;
}

bool is_saturated_by_maximality(const Tbn& t, const Configuration& c) {
  std::vector<bool> paired(t.site_count(), false);
  for (const auto& [a, b] : c.pairs()) paired[a] = paired[b] = true;
  for (int s = 0; s < t.site_count(); ++s) {
    if (paired[s]) continue;
    for (int u : t.compatible_sites(s))
      if (!paired[u]) return false;
  }
  return true;
}

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

PolymerPartition polymers(const Tbn& t, const Configuration& c) {
  int n = t.monomer_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& [a, b] : c.pairs()) {
    int ma = t.site_monomer(a), mb = t.site_monomer(b);
    if (ma == mb) continue;  // intra-monomer pairs do not bind
    parent[find_root(parent, ma)] = find_root(parent, mb);
  }
  std::unordered_map<int, int> group_of_root;
  PolymerPartition part;
  for (int m = 0; m < n; ++m) {
    int r = find_root(parent, m);
    auto [it, inserted] = group_of_root.try_emplace(r, part.count());
    if (inserted) part.groups.emplace_back();
    part.groups[it->second].push_back(m);
  }
  return part;
}

int polymer_count(const Tbn& t, const Configuration& c) {
  return polymers(t, c).count();
}

bool is_free(const Tbn& t, const Configuration& c, int monomer_id) {
  for (const auto& [a, b] : c.pairs()) {
    int ma = t.site_monomer(a), mb = t.site_monomer(b);
    if (ma != mb && (ma == monomer_id || mb == monomer_id)) return false;
  }
  return true;
}

}  // namespace tbn
