#include "cqrw/query.hpp"

#include <algorithm>

#include "cqrw/error.hpp"
#include "cqrw/substitution.hpp"

namespace cqrw {

namespace {

void require_variables(const Atom& atom) {
  for (const auto& t : atom.args)
    if (!t.is_variable())
      throw Error(ErrorCode::ConstantInQuery, "constant '" + t.name() + "' in atom " + to_string(atom));
}

}  // namespace

VarSet ConjunctiveQuery::variables() const {
  VarSet out = vars(body());
  collect_vars(head_, out);
  return out;
}

VarSet ConjunctiveQuery::head_variables() const { return vars(head_); }

VarSet ConjunctiveQuery::quantified_variables() const {
  VarSet out = vars(body());
  for (const auto& t : head_.args) out.erase(t.name());
  return out;
}

Schema infer_schema(std::span<const Atom> atoms) {
  Schema schema;
  for (const auto& a : atoms) {
    auto [it, inserted] = schema.emplace(a.relation, a.arity());
    if (!inserted && it->second != a.arity())
      throw Error(ErrorCode::ArityMismatch, "relation " + a.relation + " used with arities " +
                                                std::to_string(it->second) + " and " +
                                                std::to_string(a.arity()));
  }
  return schema;
}

ConjunctiveQuery make_query(Atom head, std::vector<Atom> body, const Schema& schema) {
  if (body.empty()) throw Error(ErrorCode::EmptyBody, "query " + head.relation + " has an empty body");
  require_variables(head);
  for (const auto& a : body) require_variables(a);
  for (const auto& a : body) {
    auto it = schema.find(a.relation);
    if (it == schema.end()) throw Error(ErrorCode::UnknownRelation, "relation " + a.relation + " not in schema");
    if (it->second != a.arity())
      throw Error(ErrorCode::ArityMismatch, "atom " + to_string(a) + " does not have arity " +
                                                std::to_string(it->second));
  }
  for (const auto& a : body)
    if (a.relation == head.relation)
      throw Error(ErrorCode::HeadInBody, "head relation " + head.relation + " occurs in the body");
  canonicalize(body);
  VarSet body_vars = vars(std::span<const Atom>(body));
  for (const auto& t : head.args)
    if (!body_vars.contains(t.name()))
      throw Error(ErrorCode::UnsafeQuery, "head variable " + t.name() + " does not occur in the body");

  // Keep only the relations the body actually uses.
  auto used = std::make_shared<Schema>();
  for (const auto& a : body) used->emplace(a.relation, a.arity());
  return ConjunctiveQuery(std::move(head), std::move(body), std::move(used));
}

ConjunctiveQuery make_query(Atom head, std::vector<Atom> body) {
  Schema schema = infer_schema(body);
  return make_query(std::move(head), std::move(body), schema);
}

ConjunctiveQuery rename_query(const ConjunctiveQuery& q, const std::map<std::string, std::string>& renaming) {
  Substitution s;
  for (const auto& [from, to] : renaming) s.set(from, Term::variable(to));
  std::vector<Atom> body;
  body.reserve(q.body().size());
  for (const auto& a : q.body()) body.push_back(s.apply(a));
  return make_query(s.apply(q.head()), std::move(body), q.schema());
}

ConjunctiveQuery with_head_relation(const ConjunctiveQuery& q, std::string relation) {
  Atom head = q.head();
  head.relation = std::move(relation);
  return make_query(std::move(head), q.body_atoms(), q.schema());
}

ViewSet::ViewSet(std::vector<View> views) {
  std::set<std::string> names;
  for (const auto& v : views) {
    if (!names.insert(v.name()).second) throw Error(ErrorCode::DuplicateView, "view " + v.name() + " defined twice");
    for (const auto& [rel, arity] : v.schema()) {
      auto [it, inserted] = base_schema_.emplace(rel, arity);
      if (!inserted && it->second != arity)
        throw Error(ErrorCode::ArityMismatch, "relation " + rel + " used with different arities across views");
    }
  }
  for (const auto& n : names)
    if (base_schema_.contains(n))
      throw Error(ErrorCode::ViewNameClash, "view name " + n + " is also a base relation");

  VarSet all;
  for (const auto& v : views) {
    VarSet vv = v.variables();
    all.insert(vv.begin(), vv.end());
  }
  VarSet taken;
  views_.reserve(views.size());
  for (auto& v : views) {
    std::map<std::string, std::string> renaming;
    for (const auto& x : v.variables()) {
      if (!taken.contains(x)) continue;
      std::string candidate = x + "_" + v.name();
      while (all.contains(candidate)) candidate += '\'';
      all.insert(candidate);
      renaming.emplace(x, candidate);
    }
    View normalized = renaming.empty() ? std::move(v) : rename_query(v, renaming);
    VarSet vv = normalized.variables();
    taken.insert(vv.begin(), vv.end());
    views_.push_back(std::move(normalized));
  }
}

const View* ViewSet::find(std::string_view name) const {
  std::size_t i = index_of(name);
  return i == views_.size() ? nullptr : &views_[i];
}

std::size_t ViewSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < views_.size(); ++i)
    if (views_[i].name() == name) return i;
  return views_.size();
}

Schema ViewSet::view_schema() const {
  Schema s;
  for (const auto& v : views_) s.emplace(v.name(), v.arity());
  return s;
}

VarSet ViewSet::variables() const {
  VarSet out;
  for (const auto& v : views_) {
    VarSet vv = v.variables();
    out.insert(vv.begin(), vv.end());
  }
  return out;
}

Database::Database(std::vector<Atom> facts) {
  for (auto& f : facts) insert(std::move(f));
}

void Database::insert(Atom fact) {
  if (!fact.is_ground()) throw Error(ErrorCode::NonGroundFact, "fact " + to_string(fact) + " is not ground");
  auto [it, inserted] = schema_.emplace(fact.relation, fact.arity());
  if (!inserted && it->second != fact.arity())
    throw Error(ErrorCode::ArityMismatch, "fact " + to_string(fact) + " does not have arity " +
                                              std::to_string(it->second));
  facts_.insert(std::move(fact));
}

FreshVariableSource::FreshVariableSource(VarSet in_use, std::string prefix, std::size_t first_index)
    : in_use_(std::move(in_use)), prefix_(std::move(prefix)), counter_(first_index) {}

std::string FreshVariableSource::next() {
  for (;;) {
    std::string name = prefix_ + std::to_string(counter_++);
    if (in_use_.insert(name).second) return name;
  }
}

std::string to_string(const ConjunctiveQuery& q) {
  return to_string(q.head()) + " :- " + to_string(q.body()) + ".";
}

}  // namespace cqrw
