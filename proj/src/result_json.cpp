#include "json.hpp"
#include "tbn/parser.hpp"
#include "tbn/queries.hpp"

namespace tbn {

std::string emit_result_json(const QueryResult& r, const Tbn& t) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["stable_polymer_count"] = r.stable_polymer_count;
  doc["monomer_free"] =
      r.free_verdict ? nlohmann::json(*r.free_verdict) : nlohmann::json(nullptr);

  nlohmann::json polymer_list = nlohmann::json::array();
  nlohmann::json pair_list = nlohmann::json::array();
  if (r.witness) {
    for (const std::vector<int>& group : polymers(t, *r.witness).groups) {
      nlohmann::json members = nlohmann::json::array();
      for (int m : group) {
        const auto& label = t.monomer(m).label;
        if (label)
          members.push_back(*label);
        else
          members.push_back(m);
      }
      polymer_list.push_back(std::move(members));
    }
    for (const auto& [a, b] : r.witness->pairs())
      pair_list.push_back({site_ref_string(t, a), site_ref_string(t, b)});
  }
  doc["polymers"] = std::move(polymer_list);
  doc["pairs"] = std::move(pair_list);
  return doc.dump(2);
}

}  // namespace tbn
