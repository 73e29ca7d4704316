#include "cqrw/structure.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace cqrw {

namespace {

std::vector<VarSet> vars_per_atom(std::span<const Atom> atoms) {
  std::vector<VarSet> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(vars(a));
  return out;
}

bool is_subset(const VarSet& a, const VarSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

// atoms(x) for every variable of the body, as sorted atom indices.
std::map<std::string, std::vector<std::size_t>> atoms_of_vars(const ConjunctiveQuery& q) {
  std::map<std::string, std::vector<std::size_t>> out;
  auto body = q.body();
  for (std::size_t i = 0; i < body.size(); ++i)
    for (const auto& v : vars(body[i])) {
      auto& list = out[v];
      if (list.empty() || list.back() != i) list.push_back(i);
    }
  return out;
}

bool includes(const std::vector<std::size_t>& big, const std::vector<std::size_t>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

}  // namespace

std::vector<std::vector<std::size_t>> JoinTree::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

std::size_t JoinTree::index_of(const Atom& atom) const {
  auto it = std::find(nodes.begin(), nodes.end(), atom);
  return static_cast<std::size_t>(it - nodes.begin());
}

bool is_valid_join_tree(const JoinTree& tree) {
  const std::size_t n = tree.nodes.size();
  if (n == 0) return tree.edges.empty();
  if (tree.edges.size() != n - 1) return false;
  for (auto [a, b] : tree.edges)
    if (a >= n || b >= n || a == b) return false;
  const auto adj = tree.adjacency();

  // Connected on a node subset, by BFS restricted to that subset.
  auto connected_within = [&](const std::vector<bool>& in) {
    std::size_t start = n;
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (in[i]) {
        ++total;
        if (start == n) start = i;
      }
    if (total == 0) return true;
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    std::size_t reached = 0;
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      ++reached;
      for (std::size_t w : adj[u])
        if (in[w] && !seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
    }
    return reached == total;
  };

  if (!connected_within(std::vector<bool>(n, true))) return false;
  const auto node_vars = vars_per_atom(tree.nodes);
  VarSet all;
  for (const auto& vs : node_vars) all.insert(vs.begin(), vs.end());
  for (const auto& x : all) {
    std::vector<bool> in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = node_vars[i].contains(x);
    if (!connected_within(in)) return false;
  }
  return true;
}

std::optional<JoinTree> gyo_join_tree(std::span<const Atom> atoms) {
  JoinTree tree;
  tree.nodes.assign(atoms.begin(), atoms.end());
  canonicalize(tree.nodes);
  const std::size_t n = tree.nodes.size();
  const auto node_vars = vars_per_atom(tree.nodes);
  std::map<std::string, std::size_t> live_count;
  for (const auto& vs : node_vars)
    for (const auto& v : vs) ++live_count[v];

  std::vector<bool> alive(n, true);
  std::size_t remaining = n;
  while (remaining > 1) {
    bool removed = false;
    for (std::size_t ear = 0; ear < n && !removed; ++ear) {
      if (!alive[ear]) continue;
      VarSet shared;
      for (const auto& v : node_vars[ear])
        if (live_count[v] > 1) shared.insert(v);
      for (std::size_t witness = 0; witness < n; ++witness) {
        if (witness == ear || !alive[witness] || !is_subset(shared, node_vars[witness])) continue;
        tree.edges.emplace_back(ear, witness);
        alive[ear] = false;
        --remaining;
        for (const auto& v : node_vars[ear]) --live_count[v];
        removed = true;
        break;
      }
    }
    if (!removed) return std::nullopt;
  }
  return tree;
}

std::optional<JoinTree> join_tree(const ConjunctiveQuery& q) { return gyo_join_tree(q.body()); }

std::optional<JoinTree> free_connex_tree(const ConjunctiveQuery& q) {
  std::vector<Atom> atoms = q.body_atoms();
  atoms.push_back(q.head());
  return gyo_join_tree(atoms);
}

bool is_acyclic(const ConjunctiveQuery& q) { return join_tree(q).has_value(); }

bool is_free_connex(const ConjunctiveQuery& q) { return is_acyclic(q) && free_connex_tree(q).has_value(); }

bool is_hierarchical(const ConjunctiveQuery& q) {
  const auto occ = atoms_of_vars(q);
  for (auto x = occ.begin(); x != occ.end(); ++x)
    for (auto y = std::next(x); y != occ.end(); ++y)
      if (!includes(x->second, y->second) && !includes(y->second, x->second) && !disjoint(x->second, y->second))
        return false;
  return true;
}

bool is_q_hierarchical(const ConjunctiveQuery& q) {
  if (!is_hierarchical(q)) return false;
  const auto occ = atoms_of_vars(q);
  const VarSet head = q.head_variables();
  for (const auto& [x, ax] : occ) {
    if (!head.contains(x)) continue;
    for (const auto& [y, ay] : occ)
      if (ax.size() < ay.size() && includes(ay, ax) && !head.contains(y)) return false;
  }
  return true;
}

std::vector<std::vector<Atom>> CoverGraph::components() const {
  const std::size_t n = nodes.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (auto [a, b] : edges) {
    std::size_t ra = find(a);
    std::size_t rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<std::size_t, std::vector<Atom>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(nodes[i]);
  std::vector<std::vector<Atom>> out;
  out.reserve(groups.size());
  for (auto& [root, atoms] : groups) out.push_back(std::move(atoms));
  return out;
}

CoverGraph cover_graph(const ConjunctiveQuery& q) {
  CoverGraph g;
  g.nodes = q.body_atoms();
  const VarSet head = q.head_variables();
  const auto node_vars = vars_per_atom(g.nodes);
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      bool linked = std::any_of(node_vars[i].begin(), node_vars[i].end(),
                                [&](const std::string& v) { return !head.contains(v) && node_vars[j].contains(v); });
      if (linked) g.edges.emplace_back(i, j);
    }
  return g;
}

WeakHeadArity weak_head_arity(const ConjunctiveQuery& q) {
  WeakHeadArity out;
  out.partition = cover_graph(q).components();
  const VarSet head = q.head_variables();
  for (const auto& block : out.partition) {
    std::size_t count = 0;
    for (const auto& v : vars(block)) count += head.contains(v) ? 1 : 0;
    out.arity = std::max(out.arity, count);
  }
  return out;
}

bool satisfies_weak_head_conditions(const ConjunctiveQuery& q, std::span<const std::vector<Atom>> blocks,
                                    std::size_t k) {
  std::vector<Atom> seen;
  for (const auto& b : blocks) {
    if (b.empty()) return false;
    seen.insert(seen.end(), b.begin(), b.end());
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  if (seen != q.body_atoms()) return false;

  const VarSet head = q.head_variables();
  std::vector<VarSet> block_vars;
  for (const auto& b : blocks) block_vars.push_back(vars(b));
  for (std::size_t i = 0; i < block_vars.size(); ++i) {
    std::size_t count = 0;
    for (const auto& v : block_vars[i]) count += head.contains(v) ? 1 : 0;
    if (count > k) return false;
    for (std::size_t j = 0; j < i; ++j)
      for (const auto& v : block_vars[i])
        if (block_vars[j].contains(v) && !head.contains(v)) return false;
  }
  return true;
}

ClassReport classify(const ConjunctiveQuery& q) {
  ClassReport r;
  r.join_tree = join_tree(q);
  r.acyclic = r.join_tree.has_value();
  if (r.acyclic) r.free_connex_tree = free_connex_tree(q);
  r.free_connex = r.free_connex_tree.has_value();
  r.hierarchical = is_hierarchical(q);
  r.q_hierarchical = r.hierarchical && is_q_hierarchical(q);
  r.weak_head_arity = weak_head_arity(q).arity;
  return r;
}

bool is_consistent(const ClassReport& r) {
  if (r.q_hierarchical && !(r.hierarchical && r.free_connex)) return false;
  if (r.free_connex && !r.acyclic) return false;
  if (r.hierarchical && !r.acyclic) return false;
  if (r.acyclic != r.join_tree.has_value()) return false;
  if (r.free_connex != r.free_connex_tree.has_value()) return false;
  return true;
}

}  // namespace cqrw
