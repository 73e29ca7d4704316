#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqrw/query.hpp"
#include "cqrw/substitution.hpp"

namespace cqrw {

/// Default bound on |𝒱(D^Q)| when building canonical candidates.
inline constexpr std::size_t kDefaultCandidateLimit = 100000;

/// Q(D) under set semantics: head images of every valuation satisfying the body.
Database evaluate(const ConjunctiveQuery& q, const Database& d);

/// 𝒱(D): union of the view results, each under its own head relation.
Database evaluate_views(const ViewSet& views, const Database& d);

/// Answer tuples of Q(D), independent of the head relation name.
std::set<std::vector<Term>> answers(const ConjunctiveQuery& q, const Database& d);

/// Q'(𝒱(D)) = Q(D) on this database.
bool agrees_on(const ConjunctiveQuery& q, const ConjunctiveQuery& rewriting, const ViewSet& views,
               const Database& d);

/// The body of Q frozen into facts. Each variable x becomes the constant x;
/// both directions of the correspondence are recorded.
struct CanonicalDatabase {
  Database database;
  std::map<std::string, std::string> constant_of;  // variable -> constant
  std::map<std::string, std::string> variable_of;  // constant -> variable
};

CanonicalDatabase canonical_database(const ConjunctiveQuery& q);

/// Valuation that produced one candidate atom: view variables -> query variables.
struct CandidateWitness {
  std::size_t view_index = 0;
  Substitution valuation;
};

struct CanonicalCandidate {
  ConjunctiveQuery query;                  // head(Q) :- 𝒱(D^Q)
  std::vector<CandidateWitness> witnesses;  // aligned with query.body()
};

/// head(Q) :- 𝒱(D^Q). Absent when 𝒱(D^Q) is empty or misses a head variable
/// of Q. Throws SizeLimitExceeded when |𝒱(D^Q)| exceeds `limit`.
std::optional<CanonicalCandidate> canonical_candidate(const ConjunctiveQuery& q, const ViewSet& views,
                                                      std::size_t limit = kDefaultCandidateLimit);

/// A view together with a substitution α on its variables.
struct ViewApplication {
  View view;
  Substitution alpha;
};

struct Expansion {
  ConjunctiveQuery query;                     // head(Q') :- ⋃ α_i(body(V_i))
  std::vector<ViewApplication> applications;  // aligned with rewriting.body()
};

/// α never unifies a quantified variable of `view` with another variable.
bool is_view_application(const View& view, const Substitution& alpha);

/// No quantified-variable image of one application equals the image of any
/// variable of another application.
bool has_quantified_disjointness(std::span<const ViewApplication> applications);

/// Inlines every view atom of `rewriting`. Head variables of a view map
/// positionally onto the atom's arguments; quantified variables get fresh
/// names. Throws UnknownView, ArityMismatch or RepeatedHeadMismatch.
Expansion expand(const ConjunctiveQuery& rewriting, const ViewSet& views, FreshVariableSource& fresh);

/// Structural re-check of an expansion against its rewriting; returns the
/// list of violated properties (empty when valid).
std::vector<std::string> validate_expansion(const Expansion& expansion, const ConjunctiveQuery& rewriting);

enum class BaselineStatus {
  Rewritable,
  NoCandidate,    // canonical candidate does not exist
  NotARewriting,  // candidate exists but is not contained in Q
};

struct BaselineResult {
  BaselineStatus status = BaselineStatus::NoCandidate;
  ConjunctiveQuery core;          // minimal query equivalent to the input
  Substitution core_retraction;   // input -> core
  std::optional<CanonicalCandidate> candidate;
  std::optional<Expansion> expansion;
  Substitution expansion_to_query;  // built from candidate witnesses; shows Q ⊑ cand
  Substitution query_to_expansion;  // set when Rewritable; shows cand ⊑ Q
};

/// Cores Q, builds the canonical candidate and decides rewritability with a
/// single containment check.
BaselineResult run_baseline(const ConjunctiveQuery& q, const ViewSet& views,
                            std::size_t limit = kDefaultCandidateLimit);

std::optional<ConjunctiveQuery> decide_and_rewrite_baseline(const ConjunctiveQuery& q, const ViewSet& views,
                                                            std::size_t limit = kDefaultCandidateLimit);

}  // namespace cqrw
