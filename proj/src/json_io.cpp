#include "cqrw/json_io.hpp"

#include "cqrw/text_io.hpp"

namespace cqrw {

namespace {

json atoms_json(std::span<const Atom> atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back(to_string(a));
  return out;
}

}  // namespace

json to_json(const Substitution& s) {
  json out = json::object();
  for (const auto& [v, t] : s.entries()) out[v] = t.name();
  return out;
}

json to_json(const JoinTree& tree) {
  json edges = json::array();
  for (auto [a, b] : tree.edges) edges.push_back({a, b});
  return {{"nodes", atoms_json(tree.nodes)}, {"edges", edges}};
}

json to_json(const ClassReport& r) {
  json out{{"acyclic", r.acyclic},
           {"free_connex", r.free_connex},
           {"hierarchical", r.hierarchical},
           {"q_hierarchical", r.q_hierarchical},
           {"weak_head_arity", r.weak_head_arity}};
  out["join_tree"] = r.join_tree ? to_json(*r.join_tree) : json(nullptr);
  out["free_connex_tree"] = r.free_connex_tree ? to_json(*r.free_connex_tree) : json(nullptr);
  return out;
}

json to_json(const CoverPartition& cp) {
  json descriptions = json::array();
  for (const auto& d : cp.descriptions)
    descriptions.push_back({{"atoms", atoms_json(d.atoms)},
                            {"view", d.view.name()},
                            {"alpha", to_json(d.alpha)},
                            {"psi", to_json(d.psi)}});
  return {{"consistent", cp.consistent}, {"descriptions", descriptions}};
}

json to_json(const SplitViews& split) {
  json views = json::array();
  for (const auto& v : split.views.views()) views.push_back(serialize_query(v));
  json back = json::array();
  for (const auto& f : split.fragments)
    back.push_back({{"view", f.name}, {"original", f.original}, {"kept", f.kept}, {"original_head", f.original_head}});
  return {{"views", views}, {"back_map", back}};
}

json to_json(const RewriteReport& r) {
  json out;
  out["status"] = r.found ? "FOUND" : "NONE";
  out["rewriting"] = r.rewriting ? json(serialize_query(*r.rewriting)) : json(nullptr);
  out["class"] = r.classes ? to_json(*r.classes) : json(nullptr);
  if (!r.found) {
    out["witness"] = {{"reason", r.reason}};
    return out;
  }
  json witness;
  witness["expansion"] = serialize_query(r.expansion->query);
  witness["query_to_expansion"] = to_json(r.query_to_expansion);
  witness["expansion_to_query"] = to_json(r.expansion_to_query);
  witness["cover_partition"] = to_json(*r.partition);
  witness["induced_rewriting"] = serialize_query(*r.induced);
  witness["split_views"] = r.split ? to_json(*r.split) : json(nullptr);
  out["witness"] = witness;
  return out;
}

}  // namespace cqrw
