#include <cmath>

#include "congest_light/verify.hpp"
#include "json.hpp"

namespace congest_light {

namespace {

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json pair_json(std::pair<NodeId, NodeId> p) {
  if (p.first == kNoNode) return nullptr;
  return nlohmann::json::array({p.first, p.second});
}

}  // namespace

std::string report_to_json(const AuditReport& r) {
  nlohmann::ordered_json j;
  j["mode"] = r.mode == StretchMode::PerEdge ? "per_edge" : "sampled_pairs";
  j["max_stretch"] = number(r.max_stretch);
  j["max_stretch_edge"] = number(r.max_stretch_edge);
  j["max_stretch_sampled"] = number(r.max_stretch_sampled);
  j["pairs_checked"] = r.pairs_checked;
  j["worst_pair"] = pair_json(r.worst_pair);
  j["weight"] = number(r.weight);
  j["mst_weight"] = number(r.mst_weight);
  j["lightness"] = number(r.lightness);
  j["edge_count"] = r.edge_count;
  j["covering_radius"] = number(r.covering_radius);
  j["min_separation"] = number(r.min_separation);
  j["rounds"] = r.rounds;
  j["messages"] = r.messages;
  j["budget_violations"] = r.budget_violations;
  j["deviations"] = r.deviations;
  return j.dump();
}

std::string net_audit_to_json(const NetAudit& a) {
  nlohmann::ordered_json j;
  j["ok"] = a.ok;
  j["covering_radius"] = number(a.covering_radius);
  j["farthest"] = a.farthest;
  j["farthest_center"] = a.farthest_center;
  j["min_separation"] = number(a.min_separation);
  j["closest_pair"] = pair_json(a.closest_pair);
  j["uncovered"] = a.uncovered;
  auto close = nlohmann::json::array();
  for (const auto& p : a.close_pairs) close.push_back({p.first, p.second});
  j["close_pairs"] = close;
  return j.dump();
}

}  // namespace congest_light
