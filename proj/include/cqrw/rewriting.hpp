#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "cqrw/cover.hpp"
#include "cqrw/evaluation.hpp"
#include "cqrw/structure.hpp"
#include "cqrw/view_split.hpp"

namespace cqrw {

enum class RewriteTarget { Any, Acyclic, FreeConnex, Hierarchical, QHierarchical };
enum class ViewSplitPolicy { Auto, Off, WeakHead };

std::string_view to_string(RewriteTarget t) noexcept;
std::optional<RewriteTarget> parse_target(std::string_view s);
std::string_view to_string(ViewSplitPolicy p) noexcept;
std::optional<ViewSplitPolicy> parse_split_policy(std::string_view s);

/// Result of one characterization pipeline run (no view splitting).
struct PipelineResult {
  BaselineStatus status = BaselineStatus::NoCandidate;
  ConjunctiveQuery core;
  std::optional<CoverPartition> partition;  // consistent, when found
  std::optional<ConjunctiveQuery> rewriting;
};

/// core → baseline → extract → make_consistent → induced rewriting.
PipelineResult characterization_pipeline(const ConjunctiveQuery& q, const ViewSet& views,
                                         std::size_t limit = kDefaultCandidateLimit);

/// As above, splitting the partition along a join tree of the core (and
/// alternating with the free-connex tree when the core is free-connex).
/// Throws NotAcyclic.
PipelineResult acyclic_pipeline(const ConjunctiveQuery& q, const ViewSet& views,
                                std::size_t limit = kDefaultCandidateLimit);

/// As above, splitting every description with hierarchical_split. Throws
/// NotHierarchical.
PipelineResult hierarchical_pipeline(const ConjunctiveQuery& q, const ViewSet& views,
                                     std::size_t limit = kDefaultCandidateLimit);

std::optional<ConjunctiveQuery> acyclic_rewriting(const ConjunctiveQuery& q, const ViewSet& views,
                                                  std::size_t limit = kDefaultCandidateLimit);
std::optional<ConjunctiveQuery> hierarchical_rewriting(const ConjunctiveQuery& q, const ViewSet& views,
                                                       std::size_t limit = kDefaultCandidateLimit);

struct RewriteOptions {
  RewriteTarget target = RewriteTarget::Any;
  std::size_t limit = kDefaultCandidateLimit;
  ViewSplitPolicy split = ViewSplitPolicy::Auto;
  std::size_t fresh_start = 1;  // first index of _fN names in the output
};

struct RewriteReport {
  bool found = false;
  std::string reason;  // NO_CANDIDATE or NOT_CONTAINED when not found
  std::optional<ConjunctiveQuery> rewriting;
  std::optional<ClassReport> classes;
  std::optional<CoverPartition> partition;  // over `split.views`
  std::optional<ConjunctiveQuery> induced;  // what `partition` induces, before translation back and minimization
  std::optional<SplitViews> split;          // set when views were split
  std::optional<Expansion> expansion;       // of the rewriting over the input views
  Substitution query_to_expansion;
  Substitution expansion_to_query;
};

/// Full dispatcher: class check on core(q), optional view splitting, the
/// pipeline for `target`, translation back, minimization of the result when
/// that stays in the target class, renaming of fresh variables to
/// _fN in first-use order, and verification over the input views. Throws
/// NotAcyclic / NotFreeConnex / NotHierarchical / NotQHierarchical when q is
/// outside the target class, SizeLimitExceeded from the candidate.
RewriteReport rewrite(const ConjunctiveQuery& q, const ViewSet& views, const RewriteOptions& options = {});

/// Expansion of `rewriting` over `views` and both homomorphisms with q, when
/// the rewriting is exact.
struct VerifyResult {
  bool ok = false;
  Expansion expansion;
  std::optional<Substitution> query_to_expansion;
  std::optional<Substitution> expansion_to_query;
};
VerifyResult verify_rewriting(const ConjunctiveQuery& q, const ViewSet& views, const ConjunctiveQuery& rewriting);

}  // namespace cqrw
