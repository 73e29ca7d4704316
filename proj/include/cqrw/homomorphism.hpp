#pragma once

#include <functional>
#include <optional>
#include <span>

#include "cqrw/query.hpp"
#include "cqrw/substitution.hpp"

namespace cqrw {

enum class HomomorphismKind {
  BodyOnly,  // h(body(source)) ⊆ body(target)
  Full,      // additionally h(head(source)) = head(target)
};

struct Homomorphism {
  Substitution mapping;  // total on vars(source)
  ConjunctiveQuery source;
  ConjunctiveQuery target;
  HomomorphismKind kind = HomomorphismKind::Full;
};

/// First substitution σ extending `fixed` with σ(from) ⊆ into, in the
/// deterministic search order of the matcher.
std::optional<Substitution> find_atom_mapping(std::span<const Atom> from, std::span<const Atom> into,
                                              const Substitution& fixed = {});

/// Enumerates every σ extending `fixed` with σ(from) ⊆ into; stops when
/// `visit` returns false.
void for_each_atom_mapping(std::span<const Atom> from, std::span<const Atom> into, const Substitution& fixed,
                           const std::function<bool(const Substitution&)>& visit);

std::optional<Homomorphism> find_homomorphism(const ConjunctiveQuery& source, const ConjunctiveQuery& target,
                                              HomomorphismKind kind = HomomorphismKind::Full);

/// Checks conditions (1) and, for Full, (2) directly on the atoms.
bool is_homomorphism(const Substitution& mapping, const ConjunctiveQuery& source, const ConjunctiveQuery& target,
                     HomomorphismKind kind);
inline bool is_valid(const Homomorphism& h) { return is_homomorphism(h.mapping, h.source, h.target, h.kind); }

/// q1 ⊑ q2. Head relation symbols are ignored; head arities must agree
/// (HeadArityMismatch otherwise).
bool contained(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2);
bool equivalent(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2);

/// Both homomorphisms witnessing q1 ≡ q2 (heads compared positionally).
struct EquivalenceWitness {
  Substitution first_to_second;  // vars(q1) -> vars(q2), shows q2 ⊑ q1
  Substitution second_to_first;  // vars(q2) -> vars(q1), shows q1 ⊑ q2
};
std::optional<EquivalenceWitness> equivalence_witness(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2);

struct CoreResult {
  ConjunctiveQuery query;
  Substitution retraction;  // full homomorphism from the input into `query`
};

/// Removes body atoms in canonical order while a full homomorphism from the
/// input into the reduced query exists. The result is minimal and equivalent.
CoreResult compute_core(const ConjunctiveQuery& q);
ConjunctiveQuery core(const ConjunctiveQuery& q);

/// Order of a permutation of `domain` (lcm of its cycle lengths). Throws
/// PreconditionViolated if `perm` does not permute `domain`.
std::size_t permutation_order(const Substitution& perm, const VarSet& domain);

/// Given minimal q_min, q_other ≡ q_min and a full homomorphism
/// h1: q_min -> q_other, returns h2: q_other -> q_min with h2(h1(A)) = A for
/// every A in body(q_min), built as (h2'∘h1)^(k-1) ∘ h2'.
Homomorphism invert_on_image(const ConjunctiveQuery& q_min, const ConjunctiveQuery& q_other,
                             const Homomorphism& h1);

}  // namespace cqrw
