#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqrw/term.hpp"

namespace cqrw {

/// Relation symbol -> arity.
using Schema = std::map<std::string, std::size_t>;

/// Head relation used for queries when none is given.
inline constexpr std::string_view kDefaultHeadRelation = "Ans";

/// A conjunctive query `head :- body`. Always valid once constructed:
/// non-empty body, safe, head symbol absent from the body, arities agree with
/// the schema, only variables as arguments. The body is kept as a canonical
/// (sorted, duplicate-free) atom set.
class ConjunctiveQuery {
 public:
  const Atom& head() const noexcept { return head_; }
  std::span<const Atom> body() const noexcept { return body_; }
  const std::vector<Atom>& body_atoms() const noexcept { return body_; }
  const Schema& schema() const noexcept { return *schema_; }

  const std::string& name() const noexcept { return head_.relation; }
  std::size_t arity() const noexcept { return head_.arity(); }
  bool is_boolean() const noexcept { return head_.args.empty(); }

  VarSet variables() const;
  VarSet head_variables() const;
  VarSet quantified_variables() const;

  /// Same head and same body (as sets).
  friend bool operator==(const ConjunctiveQuery& a, const ConjunctiveQuery& b) {
    return a.head_ == b.head_ && a.body_ == b.body_;
  }

 private:
  friend ConjunctiveQuery make_query(Atom, std::vector<Atom>, const Schema&);

  ConjunctiveQuery(Atom head, std::vector<Atom> body, std::shared_ptr<const Schema> schema)
      : head_(std::move(head)), body_(std::move(body)), schema_(std::move(schema)) {}

  Atom head_;
  std::vector<Atom> body_;
  std::shared_ptr<const Schema> schema_;
};

/// Views are queries; their head relation names the derived relation.
using View = ConjunctiveQuery;

/// Validates and builds a query. Throws cqrw::Error with EmptyBody,
/// ConstantInQuery, UnknownRelation, ArityMismatch, HeadInBody or UnsafeQuery.
ConjunctiveQuery make_query(Atom head, std::vector<Atom> body, const Schema& schema);
/// As above with the schema inferred from the body atoms.
ConjunctiveQuery make_query(Atom head, std::vector<Atom> body);

/// Schema of the body relations, throwing ArityMismatch on a conflict.
Schema infer_schema(std::span<const Atom> atoms);

/// Copy of `q` with every variable renamed through `renaming` (which must be
/// injective on vars(q)).
ConjunctiveQuery rename_query(const ConjunctiveQuery& q, const std::map<std::string, std::string>& renaming);

/// Copy of `q` with its head relation replaced.
ConjunctiveQuery with_head_relation(const ConjunctiveQuery& q, std::string relation);

/// An ordered set of views over one base schema. On construction view names
/// must be distinct and disjoint from the base schema; variables are renamed
/// so that no two views share a variable name.
class ViewSet {
 public:
  ViewSet() = default;
  explicit ViewSet(std::vector<View> views);

  std::span<const View> views() const noexcept { return views_; }
  std::size_t size() const noexcept { return views_.size(); }
  bool empty() const noexcept { return views_.empty(); }
  const View& operator[](std::size_t i) const { return views_[i]; }

  const View* find(std::string_view name) const;
  /// Index of the view named `name`, or size() when absent.
  std::size_t index_of(std::string_view name) const;

  const Schema& base_schema() const noexcept { return base_schema_; }
  /// Head relations of the views with their arities.
  Schema view_schema() const;
  /// All variable names used by any view.
  VarSet variables() const;

 private:
  std::vector<View> views_;
  Schema base_schema_;
};

/// A finite set of ground facts with consistent arities per relation.
class Database {
 public:
  Database() = default;
  explicit Database(std::vector<Atom> facts);

  /// Throws NonGroundFact or ArityMismatch.
  void insert(Atom fact);
  bool contains(const Atom& fact) const { return facts_.contains(fact); }

  const std::set<Atom>& facts() const noexcept { return facts_; }
  std::size_t size() const noexcept { return facts_.size(); }
  bool empty() const noexcept { return facts_.empty(); }
  const Schema& schema() const noexcept { return schema_; }

  friend bool operator==(const Database& a, const Database& b) { return a.facts_ == b.facts_; }

 private:
  std::set<Atom> facts_;
  Schema schema_;
};

/// Deterministic generator of variable names `<prefix><n>` (n = 1, 2, ...)
/// that never collide with reserved names or with earlier draws.
class FreshVariableSource {
 public:
  explicit FreshVariableSource(VarSet in_use = {}, std::string prefix = "_f", std::size_t first_index = 1);

  void reserve(const std::string& name) { in_use_.insert(name); }
  void reserve(const VarSet& names) { in_use_.insert(names.begin(), names.end()); }

  std::string next();

 private:
  VarSet in_use_;
  std::string prefix_;
  std::size_t counter_;
};

std::string to_string(const ConjunctiveQuery& q);

}  // namespace cqrw
