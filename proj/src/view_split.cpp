#include "cqrw/view_split.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "cqrw/error.hpp"
#include "cqrw/structure.hpp"

namespace cqrw {

namespace {

// Atom groups whose variables decide each fragment's head.
std::vector<std::vector<Atom>> groups_free_connex(const View& v) {
  auto tree = free_connex_tree(v);
  const std::size_t root = tree->index_of(v.head());
  const auto adj = tree->adjacency();
  std::vector<std::vector<Atom>> out;
  for (std::size_t child : adj[root]) {
    std::vector<Atom> group;
    std::vector<bool> seen(tree->nodes.size(), false);
    seen[root] = seen[child] = true;
    std::deque<std::size_t> queue{child};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      group.push_back(tree->nodes[u]);
      for (std::size_t w : adj[u])
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
    }
    out.push_back(std::move(group));
  }
  return out;
}

std::string unique_name(const std::string& base, std::set<std::string>& taken) {
  std::string name = base;
  while (taken.contains(name)) name += "_";
  taken.insert(name);
  return name;
}

}  // namespace

const ViewFragment* SplitViews::fragment(const std::string& name) const {
  for (const auto& f : fragments)
    if (f.name == name) return &f;
  return nullptr;
}

bool SplitViews::changed() const {
  return std::any_of(fragments.begin(), fragments.end(), [](const ViewFragment& f) {
    return f.name != f.original || f.kept != f.original_head;
  });
}

SplitViews split_views_bounded(const ViewSet& views, SplitMode mode, bool strict) {
  std::set<std::string> taken;
  for (const auto& [r, a] : views.base_schema()) taken.insert(r);
  for (const auto& v : views.views()) taken.insert(v.name());

  std::vector<View> out_views;
  std::vector<ViewFragment> fragments;
  for (const auto& v : views.views()) {
    std::vector<std::string> head;
    for (const auto& t : v.head().args) head.push_back(t.name());

    std::vector<std::vector<Atom>> groups;
    if (mode == SplitMode::WeakHead) {
      groups = cover_graph(v).components();
    } else if (is_free_connex(v)) {
      groups = groups_free_connex(v);
    } else if (strict) {
      throw Error(ErrorCode::NotFreeConnex, "view " + v.name() + " is not free-connex");
    }

    std::vector<std::vector<std::string>> kept_sets;
    for (const auto& g : groups) {
      const VarSet gv = vars(g);
      std::vector<std::string> kept;
      for (const auto& h : head)
        if (gv.contains(h) && std::find(kept.begin(), kept.end(), h) == kept.end()) kept.push_back(h);
      if (std::find(kept_sets.begin(), kept_sets.end(), kept) == kept_sets.end()) kept_sets.push_back(kept);
    }
    if (kept_sets.empty() || (kept_sets.size() == 1 && kept_sets.front() == head)) {
      out_views.push_back(v);
      fragments.push_back(ViewFragment{v.name(), v.name(), head, head});
      continue;
    }
    for (std::size_t i = 0; i < kept_sets.size(); ++i) {
      const std::string name = unique_name(v.name() + "__" + std::to_string(i + 1), taken);
      out_views.push_back(make_query(make_atom(name, kept_sets[i]), v.body_atoms(), v.schema()));
      fragments.push_back(ViewFragment{name, v.name(), kept_sets[i], head});
    }
  }
  return SplitViews{ViewSet(std::move(out_views)), std::move(fragments)};
}

ConjunctiveQuery translate_rewriting_back(const ConjunctiveQuery& w_rewriting, const SplitViews& split,
                                          FreshVariableSource& fresh) {
  fresh.reserve(w_rewriting.variables());
  Schema schema;
  std::vector<Atom> body;
  for (const auto& atom : w_rewriting.body()) {
    const ViewFragment* f = split.fragment(atom.relation);
    if (f == nullptr) throw Error(ErrorCode::UnknownView, "no split view named " + atom.relation);
    if (f->kept.size() != atom.arity())
      throw Error(ErrorCode::ArityMismatch, "atom " + to_string(atom) + " does not match its split view");
    std::map<std::string, Term> image;
    for (std::size_t p = 0; p < f->kept.size(); ++p) image.emplace(f->kept[p], atom.args[p]);
    Atom full{f->original, {}};
    for (const auto& h : f->original_head) {
      auto it = image.find(h);
      if (it == image.end()) it = image.emplace(h, Term::variable(fresh.next())).first;
      full.args.push_back(it->second);
    }
    schema.emplace(f->original, f->original_head.size());
    body.push_back(std::move(full));
  }
  return make_query(w_rewriting.head(), std::move(body), schema);
}

}  // namespace cqrw
