#include "cqrw/rewriting.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>

#include "cqrw/error.hpp"
#include "cqrw/homomorphism.hpp"

namespace cqrw {

namespace {

enum class Splitting { None, Acyclic, Hierarchical };

void check_partition(const CoverPartition& cp, const char* stage) {
  if (auto problems = validate_cover_partition(cp); !problems.empty())
    throw Error(ErrorCode::InternalError, std::string(stage) + ": " + problems.front());
}

CoverPartition refine_acyclic(CoverPartition cp, const ConjunctiveQuery& core) {
  const auto jt = join_tree(core);
  cp = split_connected(cp, *jt);
  if (!is_free_connex(core)) return cp;
  const auto jplus = free_connex_tree(core);
  const std::size_t cap = core.body().size();
  for (std::size_t round = 0;; ++round) {
    if (round > cap) throw Error(ErrorCode::InternalError, "free-connex refinement did not stabilise");
    const std::size_t before = cp.descriptions.size();
    cp = split_connected(split_connected(cp, *jplus), *jt);
    if (cp.descriptions.size() == before) break;
  }
  return cp;
}

CoverPartition refine_hierarchical(const CoverPartition& cp) {
  CoverPartition out{{}, cp.query, false};
  for (const auto& d : cp.descriptions)
    for (auto& part : hierarchical_split(d, cp.query)) out.descriptions.push_back(std::move(part));
  if (out.descriptions.size() == cp.descriptions.size()) out.consistent = cp.consistent;
  return out;
}

PipelineResult run_pipeline(const ConjunctiveQuery& q, const ViewSet& views, std::size_t limit, Splitting how) {
  BaselineResult base = run_baseline(q, views, limit);
  PipelineResult out{base.status, base.core, {}, {}};
  if (base.status != BaselineStatus::Rewritable) return out;

  const ConjunctiveQuery& core = base.core;
  const CoverPartition extracted = extract_cover_partition(core, views, base.candidate->query);
  VarSet reserved = core.variables();
  for (const auto& v : views.variables()) reserved.insert(v);

  auto finish = [&](const CoverPartition& split) {
    check_partition(split, "split partition");
    FreshVariableSource fresh(reserved);
    CoverPartition cp = make_consistent(split, fresh);
    check_partition(cp, "consistent partition");
    ConjunctiveQuery r = induced_rewriting(cp);
    return std::pair{std::move(cp), std::move(r)};
  };
  auto [cp, r] = finish(extracted);
  // split only when the plain rewriting misses the class
  if (how == Splitting::Acyclic && !(is_acyclic(r) && (!is_free_connex(core) || is_free_connex(r))))
    std::tie(cp, r) = finish(refine_acyclic(extracted, core));
  if (how == Splitting::Hierarchical && !(is_hierarchical(r) && (!is_q_hierarchical(core) || is_q_hierarchical(r))))
    std::tie(cp, r) = finish(refine_hierarchical(extracted));

  if (!verify_rewriting(core, views, r).ok)
    throw Error(ErrorCode::InternalError, "induced rewriting " + to_string(r) + " is not equivalent");
  out.partition = std::move(cp);
  out.rewriting = std::move(r);
  return out;
}

void require_class(const ConjunctiveQuery& core, RewriteTarget target) {
  switch (target) {
    case RewriteTarget::Any: return;
    case RewriteTarget::Acyclic:
      if (!is_acyclic(core)) throw Error(ErrorCode::NotAcyclic, "query is not acyclic");
      return;
    case RewriteTarget::FreeConnex:
      if (!is_free_connex(core)) throw Error(ErrorCode::NotFreeConnex, "query is not free-connex acyclic");
      return;
    case RewriteTarget::Hierarchical:
      if (!is_hierarchical(core)) throw Error(ErrorCode::NotHierarchical, "query is not hierarchical");
      return;
    case RewriteTarget::QHierarchical:
      if (!is_q_hierarchical(core)) throw Error(ErrorCode::NotQHierarchical, "query is not q-hierarchical");
      return;
  }
}

// Head-position bindings from `from` onto `to`; absent on a clash.
std::optional<Substitution> bind_head(const Atom& from, const Atom& to) {
  Substitution s;
  for (std::size_t p = 0; p < from.arity(); ++p) {
    const std::string& x = from.args[p].name();
    if (const Term* prev = s.find(x); prev != nullptr && *prev != to.args[p]) return std::nullopt;
    s.set(x, to.args[p]);
  }
  return s;
}

bool in_class(const ClassReport& r, RewriteTarget target) {
  switch (target) {
    case RewriteTarget::Any: return true;
    case RewriteTarget::Acyclic: return r.acyclic;
    case RewriteTarget::FreeConnex: return r.free_connex;
    case RewriteTarget::Hierarchical: return r.hierarchical;
    case RewriteTarget::QHierarchical: return r.q_hierarchical;
  }
  return false;
}

}  // namespace

std::string_view to_string(RewriteTarget t) noexcept {
  switch (t) {
    case RewriteTarget::Any: return "any";
    case RewriteTarget::Acyclic: return "acyclic";
    case RewriteTarget::FreeConnex: return "free-connex";
    case RewriteTarget::Hierarchical: return "hierarchical";
    case RewriteTarget::QHierarchical: return "q-hierarchical";
  }
  return "?";
}

std::optional<RewriteTarget> parse_target(std::string_view s) {
  for (auto t : {RewriteTarget::Any, RewriteTarget::Acyclic, RewriteTarget::FreeConnex, RewriteTarget::Hierarchical,
                 RewriteTarget::QHierarchical})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::string_view to_string(ViewSplitPolicy p) noexcept {
  switch (p) {
    case ViewSplitPolicy::Auto: return "auto";
    case ViewSplitPolicy::Off: return "off";
    case ViewSplitPolicy::WeakHead: return "weak-head";
  }
  return "?";
}

std::optional<ViewSplitPolicy> parse_split_policy(std::string_view s) {
  for (auto p : {ViewSplitPolicy::Auto, ViewSplitPolicy::Off, ViewSplitPolicy::WeakHead})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

PipelineResult characterization_pipeline(const ConjunctiveQuery& q, const ViewSet& views, std::size_t limit) {
  return run_pipeline(q, views, limit, Splitting::None);
}

PipelineResult acyclic_pipeline(const ConjunctiveQuery& q, const ViewSet& views, std::size_t limit) {
  const ConjunctiveQuery c = core(q);
  require_class(c, RewriteTarget::Acyclic);
  PipelineResult r = run_pipeline(c, views, limit, Splitting::Acyclic);
  if (r.rewriting) {
    const bool fc = is_free_connex(c);
    if (!is_acyclic(*r.rewriting) || (fc && !is_free_connex(*r.rewriting)))
      throw Error(ErrorCode::InternalError, "acyclic pipeline lost the query class");
  }
  return r;
}

PipelineResult hierarchical_pipeline(const ConjunctiveQuery& q, const ViewSet& views, std::size_t limit) {
  const ConjunctiveQuery c = core(q);
  require_class(c, RewriteTarget::Hierarchical);
  PipelineResult r = run_pipeline(c, views, limit, Splitting::Hierarchical);
  if (r.rewriting) {
    const bool qh = is_q_hierarchical(c);
    if (!is_hierarchical(*r.rewriting) || (qh && !is_q_hierarchical(*r.rewriting)))
      throw Error(ErrorCode::InternalError, "hierarchical pipeline lost the query class");
  }
  return r;
}

std::optional<ConjunctiveQuery> acyclic_rewriting(const ConjunctiveQuery& q, const ViewSet& views,
                                                  std::size_t limit) {
  return acyclic_pipeline(q, views, limit).rewriting;
}

std::optional<ConjunctiveQuery> hierarchical_rewriting(const ConjunctiveQuery& q, const ViewSet& views,
                                                       std::size_t limit) {
  return hierarchical_pipeline(q, views, limit).rewriting;
}

VerifyResult verify_rewriting(const ConjunctiveQuery& q, const ViewSet& views, const ConjunctiveQuery& rewriting) {
  VarSet reserved = q.variables();
  for (const auto& v : rewriting.variables()) reserved.insert(v);
  for (const auto& v : views.variables()) reserved.insert(v);
  FreshVariableSource fresh(std::move(reserved));
  VerifyResult out{false, expand(rewriting, views, fresh), {}, {}};
  const ConjunctiveQuery& e = out.expansion.query;
  if (e.arity() != q.arity()) return out;
  if (auto fixed = bind_head(q.head(), e.head())) out.query_to_expansion = find_atom_mapping(q.body(), e.body(), *fixed);
  if (auto fixed = bind_head(e.head(), q.head())) out.expansion_to_query = find_atom_mapping(e.body(), q.body(), *fixed);
  out.ok = out.query_to_expansion && out.expansion_to_query;
  return out;
}

RewriteReport rewrite(const ConjunctiveQuery& q, const ViewSet& views, const RewriteOptions& options) {
  const ConjunctiveQuery c = core(q);
  require_class(c, options.target);

  RewriteReport report;
  if (options.split == ViewSplitPolicy::WeakHead) {
    report.split = split_views_bounded(views, SplitMode::WeakHead);
  } else if (options.split == ViewSplitPolicy::Auto &&
             std::all_of(views.views().begin(), views.views().end(), [](const View& v) { return is_free_connex(v); })) {
    report.split = split_views_bounded(views, SplitMode::FreeConnex);
  }
  if (report.split && !report.split->changed()) report.split.reset();
  const ViewSet& w = report.split ? report.split->views : views;

  PipelineResult pr = [&] {
    switch (options.target) {
      case RewriteTarget::Acyclic:
      case RewriteTarget::FreeConnex: return acyclic_pipeline(c, w, options.limit);
      case RewriteTarget::Hierarchical:
      case RewriteTarget::QHierarchical: return hierarchical_pipeline(c, w, options.limit);
      case RewriteTarget::Any: break;
    }
    return characterization_pipeline(c, w, options.limit);
  }();
  if (!pr.rewriting) {
    report.reason = pr.status == BaselineStatus::NoCandidate ? "NO_CANDIDATE" : "NOT_CONTAINED";
    return report;
  }

  ConjunctiveQuery induced = *pr.rewriting;
  ConjunctiveQuery r = induced;
  CoverPartition cp = *pr.partition;
  VarSet reserved = q.variables();
  for (const auto& v : r.variables()) reserved.insert(v);
  for (const auto& d : cp.descriptions)
    for (const auto& v : d.applied_variables()) reserved.insert(v);
  if (report.split) {
    FreshVariableSource fresh(reserved, "_t");
    r = translate_rewriting_back(r, *report.split, fresh);
  }
  // the rewriting is a query over the views, so its core is one too
  if (ConjunctiveQuery m = core(r); m.body().size() < r.body().size() && in_class(classify(m), options.target))
    r = std::move(m);

  // Output names: _fN in order of first use, rewriting first, then partition.
  FreshVariableSource names(q.variables(), "_f", options.fresh_start);
  std::map<std::string, std::string> rho;
  const VarSet qvars = q.variables();
  auto visit = [&](const Term& t) {
    if (!qvars.contains(t.name()) && !rho.contains(t.name())) rho.emplace(t.name(), names.next());
  };
  for (const auto& a : r.body())
    for (const auto& t : a.args) visit(t);
  for (const auto& a : induced.body())
    for (const auto& t : a.args) visit(t);
  for (const auto& d : cp.descriptions)
    for (const auto& x : d.view.variables()) visit(d.alpha.image(x));
  r = rename_query(r, rho);
  induced = rename_query(induced, rho);
  Substitution rho_sub;
  for (const auto& [from, to] : rho) rho_sub.set(from, Term::variable(to));
  cp = rename_partition(cp, rho_sub);
  check_partition(cp, "renamed partition");

  VerifyResult v = verify_rewriting(q, views, r);
  if (!v.ok) throw Error(ErrorCode::InternalError, "rewriting " + to_string(r) + " failed verification");
  ClassReport classes = classify(r);
  if (!in_class(classes, options.target))
    throw Error(ErrorCode::InternalError, "rewriting is not " + std::string(to_string(options.target)));

  report.found = true;
  report.rewriting = std::move(r);
  report.classes = std::move(classes);
  report.partition = std::move(cp);
  report.induced = std::move(induced);
  report.expansion = std::move(v.expansion);
  report.query_to_expansion = std::move(*v.query_to_expansion);
  report.expansion_to_query = std::move(*v.expansion_to_query);
  return report;
}

}  // namespace cqrw
