#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cqrw {

/// A variable or a constant. The two namespaces are disjoint: a variable
/// named `a` and a constant `a` are different terms.
class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Constant };

  static Term variable(std::string name) { return Term(Kind::Variable, std::move(name)); }
  static Term constant(std::string value) { return Term(Kind::Constant, std::move(value)); }

  Kind kind() const noexcept { return kind_; }
  bool is_variable() const noexcept { return kind_ == Kind::Variable; }
  bool is_constant() const noexcept { return kind_ == Kind::Constant; }
  const std::string& name() const noexcept { return name_; }

  // Variables order before constants; then by name.
  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
};

/// R(t1,...,tr). The defaulted ordering (relation, then arguments) is the
/// canonical atom order used wherever iteration order matters.
struct Atom {
  std::string relation;
  std::vector<Term> args;

  std::size_t arity() const noexcept { return args.size(); }
  bool is_ground() const noexcept;

  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;
};

using VarSet = std::set<std::string>;

/// Atom whose arguments are all variables.
Atom make_atom(std::string relation, std::initializer_list<std::string_view> variables);
Atom make_atom(std::string relation, const std::vector<std::string>& variables);
/// Atom whose arguments are all constants.
Atom make_fact(std::string relation, std::initializer_list<std::string_view> constants);

void collect_vars(const Atom& atom, VarSet& out);
VarSet vars(const Atom& atom);
VarSet vars(std::span<const Atom> atoms);

/// Sorts and removes duplicates in place; the result is a canonical atom set.
void canonicalize(std::vector<Atom>& atoms);
bool contains(std::span<const Atom> sorted_atoms, const Atom& atom);

std::string to_string(const Term& term);
std::string to_string(const Atom& atom);
std::string to_string(std::span<const Atom> atoms);

}  // namespace cqrw
