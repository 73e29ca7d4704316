#include "detail/matcher.hpp"

#include <limits>

namespace cqrw::detail {

namespace {
const std::vector<int> kNoCandidates{};
}  // namespace

AtomMatcher::AtomMatcher(std::span<const Atom> pattern, std::span<const Atom> target) {
  for (const auto& a : target) {
    auto& flat = target_by_relation_[{a.relation, a.arity()}];
    if (a.args.empty()) {
      if (flat.empty()) flat.push_back(0);
      continue;
    }
    for (const auto& t : a.args) flat.push_back(intern_term(t));
  }
  atoms_.reserve(pattern.size());
  for (const auto& a : pattern) {
    PatternAtom pa;
    pa.arity = a.arity();
    auto it = target_by_relation_.find({a.relation, a.arity()});
    if (it == target_by_relation_.end()) {
      impossible_ = true;
      pa.candidates = &kNoCandidates;
    } else {
      pa.candidates = &it->second;
    }
    for (const auto& t : a.args) {
      if (t.is_variable()) {
        pa.slots.push_back(intern_var(t.name()));
      } else {
        auto tid = term_ids_.find(t);
        if (tid == term_ids_.end()) impossible_ = true;
        pa.slots.push_back(tid == term_ids_.end() ? -1 : -tid->second - 1);
      }
    }
    atoms_.push_back(std::move(pa));
  }
}

int AtomMatcher::intern_term(const Term& t) {
  auto [it, inserted] = term_ids_.emplace(t, static_cast<int>(terms_.size()));
  if (inserted) terms_.push_back(t);
  return it->second;
}

int AtomMatcher::intern_var(const std::string& name) {
  auto [it, inserted] = var_ids_.emplace(name, static_cast<int>(var_names_.size()));
  if (inserted) {
    var_names_.push_back(name);
    binding_.push_back(-1);
  }
  return it->second;
}

bool AtomMatcher::bind(const std::string& var, const Term& value) {
  const int v = intern_var(var);
  const int t = intern_term(value);
  if (binding_[v] >= 0) return binding_[v] == t;
  binding_[v] = t;
  return true;
}

void AtomMatcher::plan() {
  order_.clear();
  std::vector<bool> bound(var_names_.size(), false);
  for (std::size_t v = 0; v < binding_.size(); ++v) bound[v] = binding_[v] >= 0;
  std::vector<bool> placed(atoms_.size(), false);
  for (std::size_t step = 0; step < atoms_.size(); ++step) {
    std::size_t best = atoms_.size();
    long best_bound = -1;
    std::size_t best_cands = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (placed[i]) continue;
      long nbound = 0;
      for (int s : atoms_[i].slots)
        if (s < 0 || bound[s]) ++nbound;
      const std::size_t arity = atoms_[i].arity;
      const std::size_t cands = arity == 0 ? 1 : atoms_[i].candidates->size() / arity;
      if (nbound > best_bound || (nbound == best_bound && cands < best_cands)) {
        best = i;
        best_bound = nbound;
        best_cands = cands;
      }
    }
    placed[best] = true;
    order_.push_back(best);
    for (int s : atoms_[best].slots)
      if (s >= 0) bound[s] = true;
  }
}

Substitution AtomMatcher::snapshot() const {
  Substitution out;
  for (std::size_t v = 0; v < var_names_.size(); ++v)
    if (binding_[v] >= 0) out.set(var_names_[v], terms_[binding_[v]]);
  return out;
}

}  // namespace cqrw::detail
