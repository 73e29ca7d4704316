#include "cqrw/substitution.hpp"

#include <algorithm>

namespace cqrw {

Substitution::Substitution(std::initializer_list<std::pair<const std::string, std::string>> var_to_var) {
  for (const auto& [from, to] : var_to_var) map_.insert_or_assign(from, Term::variable(to));
}

Substitution Substitution::identity(const VarSet& domain) {
  Substitution s;
  for (const auto& v : domain) s.set(v, Term::variable(v));
  return s;
}

const Term* Substitution::find(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::image(const std::string& var) const {
  if (const Term* t = find(var)) return *t;
  return Term::variable(var);
}

Term Substitution::apply(const Term& term) const {
  if (!term.is_variable()) return term;
  return image(term.name());
}

Atom Substitution::apply(const Atom& atom) const {
  Atom out{atom.relation, {}};
  out.args.reserve(atom.args.size());
  for (const auto& t : atom.args) out.args.push_back(apply(t));
  return out;
}

std::vector<Atom> Substitution::apply(std::span<const Atom> atoms) const {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(apply(a));
  canonicalize(out);
  return out;
}

VarSet Substitution::apply(const VarSet& vars) const {
  VarSet out;
  for (const auto& v : vars) {
    Term t = image(v);
    if (t.is_variable()) out.insert(t.name());
  }
  return out;
}

VarSet Substitution::range_over(const VarSet& domain) const { return apply(domain); }

Substitution Substitution::restricted_to(const VarSet& domain) const {
  Substitution out;
  for (const auto& [k, v] : map_)
    if (domain.contains(k)) out.map_.emplace(k, v);
  return out;
}

bool Substitution::is_injective_on(const VarSet& domain) const {
  std::set<Term> seen;
  for (const auto& v : domain)
    if (!seen.insert(image(v)).second) return false;
  return true;
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
  Substitution out;
  for (const auto& [k, v] : inner.entries()) out.set(k, outer.apply(v));
  for (const auto& [k, v] : outer.entries())
    if (!inner.contains(k)) out.set(k, v);
  return out;
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : s.entries()) {
    if (!first) out += ", ";
    first = false;
    out += k;
    out += "->";
    out += v.name();
  }
  out += '}';
  return out;
}

}  // namespace cqrw
