#include "cqrw/evaluation.hpp"

#include <algorithm>

#include "cqrw/error.hpp"
#include "cqrw/homomorphism.hpp"
#include "detail/matcher.hpp"

namespace cqrw {

namespace {

std::vector<Atom> facts_of(const Database& d) { return {d.facts().begin(), d.facts().end()}; }

}  // namespace

Database evaluate(const ConjunctiveQuery& q, const Database& d) {
  Database out;
  const std::vector<Atom> facts = facts_of(d);
  detail::AtomMatcher matcher(q.body(), facts);
  matcher.for_each([&](const Substitution& valuation) {
    out.insert(valuation.apply(q.head()));
    return true;
  });
  return out;
}

Database evaluate_views(const ViewSet& views, const Database& d) {
  Database out;
  for (const auto& v : views.views()) {
    const Database part = evaluate(v, d);
    for (const auto& f : part.facts()) out.insert(f);
  }
  return out;
}

std::set<std::vector<Term>> answers(const ConjunctiveQuery& q, const Database& d) {
  std::set<std::vector<Term>> out;
  const Database result = evaluate(q, d);
  for (const auto& f : result.facts()) out.insert(f.args);
  return out;
}

bool agrees_on(const ConjunctiveQuery& q, const ConjunctiveQuery& rewriting, const ViewSet& views,
               const Database& d) {
  return answers(rewriting, evaluate_views(views, d)) == answers(q, d);
}

CanonicalDatabase canonical_database(const ConjunctiveQuery& q) {
  CanonicalDatabase out;
  for (const auto& v : q.variables()) {
    out.constant_of.emplace(v, v);
    out.variable_of.emplace(v, v);
  }
  for (const auto& a : q.body()) {
    Atom fact{a.relation, {}};
    for (const auto& t : a.args) fact.args.push_back(Term::constant(out.constant_of.at(t.name())));
    out.database.insert(std::move(fact));
  }
  return out;
}

std::optional<CanonicalCandidate> canonical_candidate(const ConjunctiveQuery& q, const ViewSet& views,
                                                      std::size_t limit) {
  const CanonicalDatabase canon = canonical_database(q);
  const std::vector<Atom> facts = facts_of(canon.database);
  auto back = [&](const Term& c) { return Term::variable(canon.variable_of.at(c.name())); };

  std::map<Atom, CandidateWitness> produced;
  for (std::size_t i = 0; i < views.size(); ++i) {
    const View& view = views[i];
    detail::AtomMatcher matcher(view.body(), facts);
    matcher.for_each([&](const Substitution& valuation) {
      Atom atom{view.name(), {}};
      for (const auto& t : view.head().args) atom.args.push_back(back(valuation.image(t.name())));
      if (produced.contains(atom)) return true;
      Substitution witness;
      for (const auto& [v, c] : valuation.entries()) witness.set(v, back(c));
      produced.emplace(std::move(atom), CandidateWitness{i, std::move(witness)});
      if (produced.size() > limit)
        throw Error(ErrorCode::SizeLimitExceeded,
                    "canonical candidate exceeds " + std::to_string(limit) + " view atoms");
      return true;
    });
  }
  if (produced.empty()) return std::nullopt;

  std::vector<Atom> body;
  body.reserve(produced.size());
  for (const auto& [atom, w] : produced) body.push_back(atom);
  const VarSet covered = vars(std::span<const Atom>(body));
  for (const auto& v : q.head_variables())
    if (!covered.contains(v)) return std::nullopt;

  ConjunctiveQuery query = make_query(q.head(), std::move(body), views.view_schema());
  std::vector<CandidateWitness> witnesses;
  witnesses.reserve(query.body().size());
  for (const auto& a : query.body()) witnesses.push_back(produced.at(a));
  return CanonicalCandidate{std::move(query), std::move(witnesses)};
}

bool is_view_application(const View& view, const Substitution& alpha) {
  const VarSet all = view.variables();
  for (const auto& v : all) {
    const Term* t = alpha.find(v);
    if (t == nullptr || !t->is_variable()) return false;
  }
  for (const auto& x : view.quantified_variables())
    for (const auto& y : all)
      if (x != y && alpha.image(x) == alpha.image(y)) return false;
  return true;
}

bool has_quantified_disjointness(std::span<const ViewApplication> applications) {
  for (std::size_t i = 0; i < applications.size(); ++i) {
    const VarSet quantified = applications[i].alpha.apply(applications[i].view.quantified_variables());
    for (std::size_t j = 0; j < applications.size(); ++j) {
      if (i == j) continue;
      for (const auto& y : applications[j].alpha.apply(applications[j].view.variables()))
        if (quantified.contains(y)) return false;
    }
  }
  return true;
}

Expansion expand(const ConjunctiveQuery& rewriting, const ViewSet& views, FreshVariableSource& fresh) {
  fresh.reserve(rewriting.variables());
  std::vector<ViewApplication> applications;
  std::vector<Atom> body;
  for (const auto& atom : rewriting.body()) {
    const View* view = views.find(atom.relation);
    if (view == nullptr) throw Error(ErrorCode::UnknownView, "no view named " + atom.relation);
    if (view->arity() != atom.arity())
      throw Error(ErrorCode::ArityMismatch, "atom " + to_string(atom) + " does not match view arity " +
                                                std::to_string(view->arity()));
    Substitution alpha;
    for (std::size_t p = 0; p < atom.arity(); ++p) {
      const std::string& hv = view->head().args[p].name();
      if (const Term* prev = alpha.find(hv); prev != nullptr && *prev != atom.args[p])
        throw Error(ErrorCode::RepeatedHeadMismatch,
                    "atom " + to_string(atom) + " disagrees where view " + view->name() + " repeats " + hv);
      alpha.set(hv, atom.args[p]);
    }
    for (const auto& x : view->quantified_variables()) alpha.set(x, Term::variable(fresh.next()));
    for (const auto& a : view->body()) body.push_back(alpha.apply(a));
    applications.push_back(ViewApplication{*view, std::move(alpha)});
  }
  ConjunctiveQuery query = make_query(rewriting.head(), std::move(body), views.base_schema());
  return Expansion{std::move(query), std::move(applications)};
}

std::vector<std::string> validate_expansion(const Expansion& expansion, const ConjunctiveQuery& rewriting) {
  std::vector<std::string> problems;
  if (expansion.applications.size() != rewriting.body().size()) {
    problems.emplace_back("application count differs from rewriting body size");
    return problems;
  }
  std::vector<Atom> body;
  for (std::size_t i = 0; i < expansion.applications.size(); ++i) {
    const auto& app = expansion.applications[i];
    if (!is_view_application(app.view, app.alpha))
      problems.push_back("application " + std::to_string(i) + " unifies a quantified variable");
    if (app.alpha.apply(app.view.head()) != rewriting.body()[i])
      problems.push_back("application " + std::to_string(i) + " does not produce " + to_string(rewriting.body()[i]));
    for (const auto& a : app.view.body()) body.push_back(app.alpha.apply(a));
  }
  if (!has_quantified_disjointness(expansion.applications))
    problems.emplace_back("quantified variable disjointness violated");
  canonicalize(body);
  if (body != expansion.query.body_atoms()) problems.emplace_back("body is not the union of the applied view bodies");
  if (expansion.query.head() != rewriting.head()) problems.emplace_back("head differs from the rewriting head");
  return problems;
}

BaselineResult run_baseline(const ConjunctiveQuery& q, const ViewSet& views, std::size_t limit) {
  CoreResult cored = compute_core(q);
  BaselineResult result{BaselineStatus::NoCandidate, cored.query, std::move(cored.retraction), {}, {}, {}, {}};
  result.candidate = canonical_candidate(result.core, views, limit);
  if (!result.candidate) return result;

  VarSet reserved = result.core.variables();
  const VarSet view_vars = views.variables();
  reserved.insert(view_vars.begin(), view_vars.end());
  FreshVariableSource fresh(std::move(reserved));
  result.expansion = expand(result.candidate->query, views, fresh);
  if (auto problems = validate_expansion(*result.expansion, result.candidate->query); !problems.empty())
    throw Error(ErrorCode::InternalError, "invalid expansion: " + problems.front());

  // Q ⊑ cand: combine the witnessing valuations into expansion -> Q.
  Substitution back;
  for (std::size_t i = 0; i < result.expansion->applications.size(); ++i) {
    const auto& app = result.expansion->applications[i];
    const auto& witness = result.candidate->witnesses[i];
    for (const auto& x : app.view.variables()) {
      const std::string from = app.alpha.image(x).name();
      const Term to = witness.valuation.image(x);
      if (const Term* prev = back.find(from); prev != nullptr && *prev != to)
        throw Error(ErrorCode::InternalError, "witness valuations disagree on " + from);
      back.set(from, to);
    }
  }
  if (!is_homomorphism(back, result.expansion->query, result.core, HomomorphismKind::Full))
    throw Error(ErrorCode::InternalError, "witness valuations do not form a homomorphism");
  result.expansion_to_query = std::move(back);

  if (auto h = find_homomorphism(result.core, result.expansion->query, HomomorphismKind::Full)) {
    result.query_to_expansion = std::move(h->mapping);
    result.status = BaselineStatus::Rewritable;
  } else {
    result.status = BaselineStatus::NotARewriting;
  }
  return result;
}

std::optional<ConjunctiveQuery> decide_and_rewrite_baseline(const ConjunctiveQuery& q, const ViewSet& views,
                                                            std::size_t limit) {
  BaselineResult r = run_baseline(q, views, limit);
  if (r.status != BaselineStatus::Rewritable) return std::nullopt;
  return r.candidate->query;
}

}  // namespace cqrw
