#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cqrw/query.hpp"

namespace cqrw {

/// Undirected tree over atoms. Edges index into `nodes`.
struct JoinTree {
  std::vector<Atom> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::vector<std::vector<std::size_t>> adjacency() const;
  std::size_t index_of(const Atom& atom) const;  // nodes.size() when absent
};

/// True iff `tree` is a tree on its nodes and, for every variable x, the
/// nodes containing x induce a connected subtree.
bool is_valid_join_tree(const JoinTree& tree);

/// GYO ear removal. Returns a join tree iff the atom set is alpha-acyclic.
/// Ears and witnesses are chosen in canonical atom order; each edge joins a
/// removed ear to its witness.
std::optional<JoinTree> gyo_join_tree(std::span<const Atom> atoms);

std::optional<JoinTree> join_tree(const ConjunctiveQuery& q);
/// Join tree of body(q) ∪ {head(q)}; the head atom is a node of the tree.
std::optional<JoinTree> free_connex_tree(const ConjunctiveQuery& q);

bool is_acyclic(const ConjunctiveQuery& q);
bool is_free_connex(const ConjunctiveQuery& q);
bool is_hierarchical(const ConjunctiveQuery& q);
bool is_q_hierarchical(const ConjunctiveQuery& q);

/// Body atoms as nodes; an edge joins two atoms sharing a variable that is
/// not a head variable.
struct CoverGraph {
  std::vector<Atom> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, lexicographic

  std::vector<std::vector<Atom>> components() const;
};

CoverGraph cover_graph(const ConjunctiveQuery& q);

struct WeakHeadArity {
  std::size_t arity = 0;
  std::vector<std::vector<Atom>> partition;  // components of the cover graph
};

WeakHeadArity weak_head_arity(const ConjunctiveQuery& q);

/// Direct check of the two partition conditions defining weak head arity:
/// every block holds at most k head variables, and distinct blocks share
/// only head variables. Also checks that `blocks` partitions body(q).
bool satisfies_weak_head_conditions(const ConjunctiveQuery& q, std::span<const std::vector<Atom>> blocks,
                                    std::size_t k);

struct ClassReport {
  bool acyclic = false;
  bool free_connex = false;
  bool hierarchical = false;
  bool q_hierarchical = false;
  std::size_t weak_head_arity = 0;
  std::optional<JoinTree> join_tree;
  std::optional<JoinTree> free_connex_tree;
};

ClassReport classify(const ConjunctiveQuery& q);

/// The class implications (q-hier ⇒ hier, q-hier ⇒ free-connex,
/// free-connex ⇒ acyclic, hier ⇒ acyclic) and witness presence.
bool is_consistent(const ClassReport& report);

}  // namespace cqrw
