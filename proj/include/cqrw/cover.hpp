#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cqrw/evaluation.hpp"
#include "cqrw/query.hpp"
#include "cqrw/structure.hpp"
#include "cqrw/substitution.hpp"

namespace cqrw {

/// (𝒜, V, α, ψ): a set of body atoms of Q explained by one application of V.
///
/// Valid when α is a view application and
///   (1) 𝒜 ⊆ α(body(V)),
///   (2) B(𝒜) ⊆ α(vars(head(V))),
///   (3) ψ is a body homomorphism from α(V) into Q,
///   (4) ψ is the identity on vars(𝒜).
struct CoverDescription {
  std::vector<Atom> atoms;  // canonical
  View view;
  Substitution alpha;  // vars(V) -> variables
  Substitution psi;    // vars(α(V)) -> vars(Q)

  /// vars(α(V)): the domain of ψ.
  VarSet applied_variables() const;
  /// α(vars(head(V))).
  VarSet applied_head_variables() const;
};

/// Descriptions whose atom sets partition body(query).
struct CoverPartition {
  std::vector<CoverDescription> descriptions;
  ConjunctiveQuery query;
  bool consistent = false;
};

/// B(𝒜) = vars(𝒜) ∩ (vars(head(Q)) ∪ vars(body(Q) ∖ 𝒜)). Throws NotASubset.
VarSet bridge_vars(const ConjunctiveQuery& q, std::span<const Atom> atoms);

enum class CoverCondition {
  Application = 0,      // α unifies a quantified variable of V, or is not total
  AtomsCovered = 1,     // (1)
  BridgeInHead = 2,     // (2)
  PsiHomomorphism = 3,  // (3)
  PsiIdentity = 4,      // (4)
};

std::string_view to_string(CoverCondition c) noexcept;

/// Every violated condition, in order. Empty means valid.
std::vector<CoverCondition> validate_cover_description(const CoverDescription& cd, const ConjunctiveQuery& q);

/// Variables of some α_j(V_j) occur in the range of another α_i only if they
/// are bridge variables of 𝒜_j.
bool is_consistent_partition(const CoverPartition& cp);

/// Human-readable list of problems: non-partition, invalid descriptions, and
/// (when flagged consistent) consistency violations.
std::vector<std::string> validate_cover_partition(const CoverPartition& cp);

/// Cover partition read off a verified rewriting of a minimal query. The
/// expansion is renamed so that the homomorphism from q_min into it is the
/// identity; 𝒜_i holds the atoms whose first covering application is i and
/// ψ_i restricts the inverse homomorphism. Applications covering nothing are
/// dropped. Throws PreconditionViolated if `rewriting` is not a rewriting of
/// q_min or q_min is not minimal.
CoverPartition extract_cover_partition(const ConjunctiveQuery& q_min, const ViewSet& views,
                                       const ConjunctiveQuery& rewriting);

/// Renames shared variables out of every application whose atom set does not
/// contain them (adjusting ψ), leaving the atom partition untouched. The
/// optional counter receives the number of renamed variables.
CoverPartition make_consistent(const CoverPartition& cp, FreshVariableSource& fresh,
                               std::size_t* renamed_variables = nullptr);

/// Q_C: head(Q) :- { α_i(head(V_i)) }. Throws InconsistentPartition.
ConjunctiveQuery induced_rewriting(const CoverPartition& cp);
/// Q'_C: head(Q) :- ⋃ α_i(body(V_i)); applications align with the descriptions.
Expansion induced_expansion(const CoverPartition& cp);

/// Splits every atom set into its connected components in `tree` (nodes not
/// in the set, such as a head node, do not connect anything).
CoverPartition split_connected(const CoverPartition& cp, const JoinTree& tree);

/// Components of the graph on cd.atoms linking atoms that share a variable
/// outside α(vars(head(V))). Requires hierarchical q (NotHierarchical).
std::vector<CoverDescription> hierarchical_split(const CoverDescription& cd, const ConjunctiveQuery& q);

/// Applies ρ to the partition's variables (α images and ψ domains).
CoverPartition rename_partition(const CoverPartition& cp, const Substitution& renaming);

}  // namespace cqrw
