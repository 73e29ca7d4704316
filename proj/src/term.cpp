#include "cqrw/term.hpp"

#include <algorithm>

namespace cqrw {

bool Atom::is_ground() const noexcept {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_constant(); });
}

Atom make_atom(std::string relation, std::initializer_list<std::string_view> variables) {
  Atom atom{std::move(relation), {}};
  atom.args.reserve(variables.size());
  for (auto v : variables) atom.args.push_back(Term::variable(std::string(v)));
  return atom;
}

Atom make_atom(std::string relation, const std::vector<std::string>& variables) {
  Atom atom{std::move(relation), {}};
  atom.args.reserve(variables.size());
  for (const auto& v : variables) atom.args.push_back(Term::variable(v));
  return atom;
}

Atom make_fact(std::string relation, std::initializer_list<std::string_view> constants) {
  Atom atom{std::move(relation), {}};
  atom.args.reserve(constants.size());
  for (auto c : constants) atom.args.push_back(Term::constant(std::string(c)));
  return atom;
}

void collect_vars(const Atom& atom, VarSet& out) {
  for (const auto& t : atom.args)
    if (t.is_variable()) out.insert(t.name());
}

VarSet vars(const Atom& atom) {
  VarSet out;
  collect_vars(atom, out);
  return out;
}

VarSet vars(std::span<const Atom> atoms) {
  VarSet out;
  for (const auto& a : atoms) collect_vars(a, out);
  return out;
}

void canonicalize(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

bool contains(std::span<const Atom> sorted_atoms, const Atom& atom) {
  return std::binary_search(sorted_atoms.begin(), sorted_atoms.end(), atom);
}

std::string to_string(const Term& term) { return term.name(); }

std::string to_string(const Atom& atom) {
  std::string out = atom.relation;
  out += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ',';
    out += atom.args[i].name();
  }
  out += ')';
  return out;
}

std::string to_string(std::span<const Atom> atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += ", ";
    out += to_string(atoms[i]);
  }
  return out;
}

}  // namespace cqrw
