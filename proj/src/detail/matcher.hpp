#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqrw/substitution.hpp"
#include "cqrw/term.hpp"

namespace cqrw::detail {

/// Backtracking search for substitutions σ with σ(pattern) ⊆ target.
///
/// Pattern variables may be pre-bound with bind(). Atoms are placed greedily:
/// next is the atom with most already-bound variables, then the one with
/// fewest candidate target atoms, then the earliest in canonical order.
class AtomMatcher {
 public:
  AtomMatcher(std::span<const Atom> pattern, std::span<const Atom> target);

  /// Returns false if `var` is already bound to a different term.
  bool bind(const std::string& var, const Term& value);

  /// Calls visit(solution) per solution until it returns false.
  /// Solutions bind every pattern variable and every pre-bound variable.
  template <class Visit>
  void for_each(Visit&& visit);

 private:
  struct PatternAtom {
    const std::vector<int>* candidates = nullptr;  // flattened, stride = arity
    std::size_t arity = 0;
    std::vector<int> slots;  // >= 0: variable id; < 0: -(term id) - 1
  };

  int intern_term(const Term& t);
  int intern_var(const std::string& name);
  void plan();
  template <class Visit>
  bool search(std::size_t depth, Visit& visit);
  Substitution snapshot() const;

  std::map<Term, int> term_ids_;
  std::vector<Term> terms_;
  std::map<std::string, int> var_ids_;
  std::vector<std::string> var_names_;
  std::map<std::pair<std::string, std::size_t>, std::vector<int>> target_by_relation_;
  std::vector<PatternAtom> atoms_;
  std::vector<int> binding_;
  std::vector<int> trail_;
  std::vector<std::size_t> order_;
  bool impossible_ = false;
};

template <class Visit>
void AtomMatcher::for_each(Visit&& visit) {
  if (impossible_) return;
  plan();
  search(0, visit);
}

template <class Visit>
bool AtomMatcher::search(std::size_t depth, Visit& visit) {
  if (depth == order_.size()) return visit(snapshot());
  const PatternAtom& pa = atoms_[order_[depth]];
  const std::vector<int>& cands = *pa.candidates;
  const std::size_t arity = pa.arity;
  const std::size_t count = arity == 0 ? (cands.empty() ? 0 : 1) : cands.size() / arity;
  for (std::size_t c = 0; c < count; ++c) {
    const int* tuple = cands.data() + c * arity;
    const std::size_t mark = trail_.size();
    bool ok = true;
    for (std::size_t k = 0; k < arity && ok; ++k) {
      const int slot = pa.slots[k];
      const int value = tuple[k];
      if (slot < 0) {
        ok = (-slot - 1) == value;
      } else if (binding_[slot] < 0) {
        binding_[slot] = value;
        trail_.push_back(slot);
      } else {
        ok = binding_[slot] == value;
      }
    }
    bool keep_going = true;
    if (ok) keep_going = search(depth + 1, visit);
    while (trail_.size() > mark) {
      binding_[trail_.back()] = -1;
      trail_.pop_back();
    }
    if (!keep_going) return false;
  }
  return true;
}

}  // namespace cqrw::detail
