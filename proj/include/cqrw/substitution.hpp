#pragma once

#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqrw/term.hpp"

namespace cqrw {

/// Finite map from variable names to terms. Variables outside the domain
/// are fixed points, and constants are never rewritten.
class Substitution {
 public:
  using Map = std::map<std::string, Term>;

  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, std::string>> var_to_var);
  explicit Substitution(Map map) : map_(std::move(map)) {}

  static Substitution identity(const VarSet& domain);

  void set(const std::string& var, Term image) { map_.insert_or_assign(var, std::move(image)); }
  void erase(const std::string& var) { map_.erase(var); }

  bool contains(const std::string& var) const { return map_.contains(var); }
  const Term* find(const std::string& var) const;
  std::size_t size() const noexcept { return map_.size(); }
  bool empty() const noexcept { return map_.empty(); }
  const Map& entries() const noexcept { return map_; }

  /// Image of variable `var`; unmapped variables map to themselves.
  Term image(const std::string& var) const;
  Term apply(const Term& term) const;
  Atom apply(const Atom& atom) const;
  /// Image of an atom set, canonicalized.
  std::vector<Atom> apply(std::span<const Atom> atoms) const;
  VarSet apply(const VarSet& vars) const;

  /// Variables (of the images) that are reached from `domain`.
  VarSet range_over(const VarSet& domain) const;
  Substitution restricted_to(const VarSet& domain) const;

  /// True if the variable-to-variable part is injective on `domain`.
  bool is_injective_on(const VarSet& domain) const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  Map map_;
};

/// outer ∘ inner: first inner, then outer. Defined on dom(inner) ∪ dom(outer).
Substitution compose(const Substitution& outer, const Substitution& inner);

inline Atom apply_substitution(const Substitution& s, const Atom& a) { return s.apply(a); }

std::string to_string(const Substitution& s);

}  // namespace cqrw
