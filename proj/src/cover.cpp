#include "cqrw/cover.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "cqrw/error.hpp"
#include "cqrw/homomorphism.hpp"

namespace cqrw {

namespace {

bool is_subset(std::span<const Atom> small, std::span<const Atom> sorted_big) {
  return std::all_of(small.begin(), small.end(), [&](const Atom& a) { return contains(sorted_big, a); });
}

// Components of `atoms` (canonical) under `linked`, ordered by smallest atom.
template <typename Linked>
std::vector<std::vector<Atom>> components_of(const std::vector<Atom>& atoms, Linked linked) {
  const std::size_t n = atoms.size();
  std::vector<std::size_t> comp(n, n);
  std::vector<std::vector<Atom>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    const std::size_t id = out.size();
    out.emplace_back();
    std::deque<std::size_t> queue{s};
    comp[s] = id;
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      out[id].push_back(atoms[u]);
      for (std::size_t w = 0; w < n; ++w)
        if (comp[w] == n && linked(u, w)) {
          comp[w] = id;
          queue.push_back(w);
        }
    }
    canonicalize(out[id]);
  }
  return out;
}

Schema schema_of(const CoverPartition& cp) {
  Schema s;
  for (const auto& d : cp.descriptions) s.emplace(d.view.name(), d.view.arity());
  return s;
}

}  // namespace

VarSet CoverDescription::applied_variables() const { return alpha.apply(view.variables()); }

VarSet CoverDescription::applied_head_variables() const { return alpha.apply(view.head_variables()); }

VarSet bridge_vars(const ConjunctiveQuery& q, std::span<const Atom> atoms) {
  if (!is_subset(atoms, q.body())) throw Error(ErrorCode::NotASubset, to_string(atoms) + " is not part of the body");
  VarSet outside = q.head_variables();
  for (const auto& a : q.body())
    if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) collect_vars(a, outside);
  VarSet out;
  for (const auto& v : vars(atoms))
    if (outside.contains(v)) out.insert(v);
  return out;
}

std::string_view to_string(CoverCondition c) noexcept {
  switch (c) {
    case CoverCondition::Application: return "application";
    case CoverCondition::AtomsCovered: return "atoms-covered";
    case CoverCondition::BridgeInHead: return "bridge-in-head";
    case CoverCondition::PsiHomomorphism: return "psi-homomorphism";
    case CoverCondition::PsiIdentity: return "psi-identity";
  }
  return "?";
}

std::vector<CoverCondition> validate_cover_description(const CoverDescription& cd, const ConjunctiveQuery& q) {
  std::vector<CoverCondition> out;
  if (!is_view_application(cd.view, cd.alpha)) {
    // nothing below is meaningful without a total α
    out.push_back(CoverCondition::Application);
    return out;
  }
  const std::vector<Atom> applied = cd.alpha.apply(cd.view.body());
  if (!is_subset(cd.atoms, applied)) out.push_back(CoverCondition::AtomsCovered);

  bool bridge_ok = is_subset(cd.atoms, q.body());
  if (bridge_ok) {
    const VarSet head = cd.applied_head_variables();
    for (const auto& b : bridge_vars(q, cd.atoms))
      if (!head.contains(b)) bridge_ok = false;
  }
  if (!bridge_ok) out.push_back(CoverCondition::BridgeInHead);

  bool psi_ok = true;
  for (const auto& v : vars(std::span<const Atom>(applied))) {
    const Term* t = cd.psi.find(v);
    if (t == nullptr || !t->is_variable()) psi_ok = false;
  }
  if (psi_ok)
    for (const auto& a : applied)
      if (!contains(q.body(), cd.psi.apply(a))) psi_ok = false;
  if (!psi_ok) out.push_back(CoverCondition::PsiHomomorphism);

  for (const auto& v : vars(std::span<const Atom>(cd.atoms)))
    if (cd.psi.image(v) != Term::variable(v)) {
      out.push_back(CoverCondition::PsiIdentity);
      break;
    }
  return out;
}

bool is_consistent_partition(const CoverPartition& cp) {
  const std::size_t n = cp.descriptions.size();
  std::vector<VarSet> ranges;
  ranges.reserve(n);
  for (const auto& d : cp.descriptions) ranges.push_back(d.applied_variables());
  for (std::size_t j = 0; j < n; ++j) {
    const VarSet bridges = bridge_vars(cp.query, cp.descriptions[j].atoms);
    for (const auto& z : ranges[j]) {
      if (bridges.contains(z)) continue;
      for (std::size_t i = 0; i < n; ++i)
        if (i != j && ranges[i].contains(z)) return false;
    }
  }
  return true;
}

std::vector<std::string> validate_cover_partition(const CoverPartition& cp) {
  std::vector<std::string> problems;
  std::vector<Atom> all;
  for (const auto& d : cp.descriptions) {
    if (d.atoms.empty()) problems.emplace_back("empty atom set for view " + d.view.name());
    all.insert(all.end(), d.atoms.begin(), d.atoms.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    problems.emplace_back("atom sets overlap");
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all != cp.query.body_atoms()) {
    problems.emplace_back("atom sets do not cover the body exactly");
    return problems;
  }
  for (std::size_t i = 0; i < cp.descriptions.size(); ++i)
    for (auto c : validate_cover_description(cp.descriptions[i], cp.query))
      problems.push_back("description " + std::to_string(i) + " violates " + std::string(to_string(c)));
  if (cp.consistent && problems.empty() && !is_consistent_partition(cp))
    problems.emplace_back("partition flagged consistent but shares non-bridge variables");
  return problems;
}

CoverPartition extract_cover_partition(const ConjunctiveQuery& q_min, const ViewSet& views,
                                       const ConjunctiveQuery& rewriting) {
  VarSet reserved = q_min.variables();
  for (const auto& v : rewriting.variables()) reserved.insert(v);
  for (const auto& v : views.variables()) reserved.insert(v);
  FreshVariableSource fresh(reserved);

  const ConjunctiveQuery aligned =
      rewriting.name() == q_min.name() ? rewriting : with_head_relation(rewriting, q_min.name());
  Expansion e = expand(aligned, views, fresh);
  auto h = find_homomorphism(q_min, e.query, HomomorphismKind::Full);
  if (!h) throw Error(ErrorCode::PreconditionViolated, "rewriting is not contained in the query");
  const Homomorphism back = invert_on_image(q_min, e.query, *h);

  const VarSet qvars = q_min.variables();
  if (!h->mapping.is_injective_on(qvars))
    throw Error(ErrorCode::PreconditionViolated, "query is not minimal");

  // ρ: rename the expansion so that h becomes the identity.
  Substitution rho;
  Substitution rho_inv;
  for (const auto& x : qvars) {
    const std::string y = h->mapping.image(x).name();
    rho.set(y, Term::variable(x));
    rho_inv.set(x, Term::variable(y));
  }
  for (const auto& y : e.query.variables()) {
    if (rho.contains(y)) continue;
    const std::string to = qvars.contains(y) ? fresh.next() : y;
    rho.set(y, Term::variable(to));
    rho_inv.set(to, Term::variable(y));
  }

  CoverPartition cp{{}, q_min, false};
  std::vector<std::vector<Atom>> applied;
  std::vector<Substitution> alphas;
  for (const auto& app : e.applications) {
    Substitution alpha = compose(rho, app.alpha).restricted_to(app.view.variables());
    applied.push_back(alpha.apply(app.view.body()));
    alphas.push_back(std::move(alpha));
  }
  std::vector<std::vector<Atom>> blocks(alphas.size());
  for (const auto& a : q_min.body()) {
    std::size_t i = 0;
    while (i < applied.size() && !contains(applied[i], a)) ++i;
    if (i == applied.size()) throw Error(ErrorCode::InternalError, "atom " + to_string(a) + " is not covered");
    blocks[i].push_back(a);
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (blocks[i].empty()) continue;
    const View& view = e.applications[i].view;
    Substitution psi;
    for (const auto& z : alphas[i].apply(view.variables()))
      psi.set(z, back.mapping.image(rho_inv.image(z).name()));
    cp.descriptions.push_back(CoverDescription{std::move(blocks[i]), view, std::move(alphas[i]), std::move(psi)});
  }
  if (auto problems = validate_cover_partition(cp); !problems.empty())
    throw Error(ErrorCode::InternalError, "extracted partition: " + problems.front());
  cp.consistent = is_consistent_partition(cp);
  return cp;
}

CoverPartition make_consistent(const CoverPartition& cp, FreshVariableSource& fresh, std::size_t* renamed_variables) {
  CoverPartition out = cp;
  fresh.reserve(cp.query.variables());
  for (const auto& d : cp.descriptions) {
    fresh.reserve(d.view.variables());
    fresh.reserve(d.applied_variables());
  }

  std::map<std::string, std::vector<std::size_t>> users;
  for (std::size_t i = 0; i < out.descriptions.size(); ++i)
    for (const auto& z : out.descriptions[i].applied_variables()) users[z].push_back(i);

  std::size_t renamed = 0;
  for (const auto& [z, list] : users) {
    if (list.size() < 2) continue;
    std::vector<std::size_t> keep;
    for (auto i : list)
      if (vars(std::span<const Atom>(out.descriptions[i].atoms)).contains(z)) keep.push_back(i);
    if (keep.empty()) keep.push_back(list.front());
    if (keep.size() == list.size()) continue;
    ++renamed;
    for (auto j : list) {
      if (std::find(keep.begin(), keep.end(), j) != keep.end()) continue;
      auto& d = out.descriptions[j];
      const Term zt = Term::variable(z);
      const Term fresh_z = Term::variable(fresh.next());
      Substitution alpha;
      for (const auto& [v, t] : d.alpha.entries()) alpha.set(v, t == zt ? fresh_z : t);
      d.alpha = std::move(alpha);
      const Term target = d.psi.image(z);
      d.psi.erase(z);
      d.psi.set(fresh_z.name(), target);
    }
  }
  if (renamed_variables != nullptr) *renamed_variables = renamed;
  out.consistent = true;
  if (auto problems = validate_cover_partition(out); !problems.empty())
    throw Error(ErrorCode::InternalError, "make_consistent: " + problems.front());
  return out;
}

ConjunctiveQuery induced_rewriting(const CoverPartition& cp) {
  if (!is_consistent_partition(cp))
    throw Error(ErrorCode::InconsistentPartition, "partition shares non-bridge variables");
  std::vector<Atom> body;
  for (const auto& d : cp.descriptions) body.push_back(d.alpha.apply(d.view.head()));
  return make_query(cp.query.head(), std::move(body), schema_of(cp));
}

Expansion induced_expansion(const CoverPartition& cp) {
  std::vector<Atom> body;
  std::vector<ViewApplication> apps;
  for (const auto& d : cp.descriptions) {
    for (const auto& a : d.view.body()) body.push_back(d.alpha.apply(a));
    apps.push_back(ViewApplication{d.view, d.alpha});
  }
  return Expansion{make_query(cp.query.head(), std::move(body), cp.query.schema()), std::move(apps)};
}

CoverPartition split_connected(const CoverPartition& cp, const JoinTree& tree) {
  const auto adj = tree.adjacency();
  CoverPartition out{{}, cp.query, cp.consistent};
  for (const auto& d : cp.descriptions) {
    std::vector<std::size_t> node;
    for (const auto& a : d.atoms) {
      const std::size_t k = tree.index_of(a);
      if (k == tree.nodes.size()) throw Error(ErrorCode::PreconditionViolated, to_string(a) + " is not a tree node");
      node.push_back(k);
    }
    auto parts = components_of(d.atoms, [&](std::size_t u, std::size_t w) {
      return std::binary_search(adj[node[u]].begin(), adj[node[u]].end(), node[w]);
    });
    if (parts.size() > 1) out.consistent = false;
    for (auto& p : parts) out.descriptions.push_back(CoverDescription{std::move(p), d.view, d.alpha, d.psi});
  }
  return out;
}

std::vector<CoverDescription> hierarchical_split(const CoverDescription& cd, const ConjunctiveQuery& q) {
  if (!is_hierarchical(q)) throw Error(ErrorCode::NotHierarchical, "query is not hierarchical");
  const VarSet head = cd.applied_head_variables();
  std::vector<VarSet> local;
  for (const auto& a : cd.atoms) {
    VarSet vs;
    for (const auto& v : vars(a))
      if (!head.contains(v)) vs.insert(v);
    local.push_back(std::move(vs));
  }
  auto parts = components_of(cd.atoms, [&](std::size_t u, std::size_t w) {
    return std::any_of(local[u].begin(), local[u].end(), [&](const std::string& v) { return local[w].contains(v); });
  });

  // (B): a component with several atoms has a non-head variable in all of them.
  for (const auto& p : parts) {
    if (p.size() < 2) continue;
    VarSet common;
    for (const auto& v : vars(p.front()))
      if (!head.contains(v)) common.insert(v);
    for (const auto& a : p) {
      const VarSet av = vars(a);
      std::erase_if(common, [&](const std::string& v) { return !av.contains(v); });
    }
    if (common.empty()) throw Error(ErrorCode::InternalError, "component " + to_string(p) + " has no common variable");
  }

  std::vector<CoverDescription> out;
  for (auto& p : parts) out.push_back(CoverDescription{std::move(p), cd.view, cd.alpha, cd.psi});
  return out;
}

CoverPartition rename_partition(const CoverPartition& cp, const Substitution& renaming) {
  CoverPartition out{{}, cp.query, cp.consistent};
  for (const auto& d : cp.descriptions) {
    Substitution alpha;
    for (const auto& [v, t] : d.alpha.entries()) alpha.set(v, renaming.apply(t));
    Substitution psi;
    for (const auto& [z, t] : d.psi.entries()) psi.set(renaming.image(z).name(), t);
    std::vector<Atom> atoms = renaming.apply(std::span<const Atom>(d.atoms));
    out.descriptions.push_back(CoverDescription{std::move(atoms), d.view, std::move(alpha), std::move(psi)});
  }
  return out;
}

}  // namespace cqrw
