#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tbn {

// A binding domain. Complementation is purely syntactic: `b` pairs with `b*`.
struct SiteType {
  std::string name;
  bool starred = false;

  friend bool operator==(const SiteType&, const SiteType&) = default;
  friend auto operator<=>(const SiteType&, const SiteType&) = default;
};

SiteType complement(const SiteType& t);
std::string to_string(const SiteType& t);

struct SiteTypeHash {
  size_t operator()(const SiteType& t) const {
    return std::hash<std::string>()(t.name) * 2 + (t.starred ? 1 : 0);
  }
};

// An unstructured multiset of sites, optionally labeled. Within a Tbn the
// monomer id is its position; duplicate monomers are distinct instances.
struct Monomer {
  std::optional<std::string> label;
  std::vector<SiteType> sites;

  friend bool operator==(const Monomer&, const Monomer&) = default;
};

// Identifies one site instance as (monomer id, slot within the monomer).
struct SiteRef {
  int monomer = 0;
  int slot = 0;

  friend bool operator==(const SiteRef&, const SiteRef&) = default;
};

class Tbn {
 public:
  Tbn() = default;
  explicit Tbn(std::vector<Monomer> monomers);

  int monomer_count() const { return static_cast<int>(monomers_.size()); }
  bool empty() const { return monomers_.empty(); }
  const Monomer& monomer(int id) const { return monomers_.at(id); }
  std::span<const Monomer> monomers() const { return monomers_; }

  // Global site ids enumerate the sites of all monomers in order, each once.
  int site_count() const { return static_cast<int>(site_types_.size()); }
  int site_id(SiteRef ref) const;
  SiteRef site_ref(int site) const;
  const SiteType& site_type(int site) const { return site_types_.at(site); }
  int site_monomer(int site) const { return site_monomer_.at(site); }

  int type_count(const SiteType& t) const;
  const std::vector<int>& instances_of(const SiteType& t) const;

  // A type is limiting when its complement occurs at least as often.
  bool is_limiting(const SiteType& t) const;
  std::vector<SiteType> limiting_site_types() const;
  bool site_is_limiting(int site) const { return limiting_flag_.at(site); }

  // C(s): every site instance whose type complements type(s), any monomer.
  std::vector<int> compatible_sites(int site) const;

  // True when some monomer carries two complementary sites of its own.
  bool has_self_complementary_monomer() const;

 private:
  std::vector<Monomer> monomers_;
  std::vector<int> site_offsets_;     // per monomer, start of its global ids
  std::vector<SiteType> site_types_;  // per global site id
  std::vector<int> site_monomer_;     // per global site id
  std::vector<bool> limiting_flag_;   // per global site id
  std::unordered_map<SiteType, std::vector<int>, SiteTypeHash> instances_;
};

// New TBN with one monomer instance removed; remaining ids stay in order.
Tbn remove_monomer(const Tbn& t, int monomer_id);

// A matching among complementary site instances, stored as unordered pairs
// of global site ids. Construction normalizes and sorts; it does not
// validate against any particular TBN.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<std::pair<int, int>> pairs);

  std::span<const std::pair<int, int>> pairs() const { return pairs_; }
  size_t size() const { return pairs_.size(); }

  // Partner of `site`, or -1 when unpaired. Linear scan; fine at our sizes.
  int partner(int site) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<std::pair<int, int>> pairs_;  // each (lo, hi), sorted
};

bool is_valid_configuration(const Tbn& t, const Configuration& c);

// Saturation via the limiting-site criterion: every site instance of a
// limiting type is paired. Assumes a valid configuration.
bool is_saturated(const Tbn& t, const Configuration& c);

// Direct maximality check (no unpaired complementary pair remains), used to
// cross-validate the criterion above.
bool is_saturated_by_maximality(const Tbn& t, const Configuration& c);

// Connected components of monomers under inter-monomer pairing. Pairs within
// a single monomer never bind.
struct PolymerPartition {
  std::vector<std::vector<int>> groups;  // sorted members, sorted by minimum

  int count() const { return static_cast<int>(groups.size()); }
};

PolymerPartition polymers(const Tbn& t, const Configuration& c);
int polymer_count(const Tbn& t, const Configuration& c);

// A monomer is free when it is bound to no other monomer.
bool is_free(const Tbn& t, const Configuration& c, int monomer_id);

}  // namespace tbn
