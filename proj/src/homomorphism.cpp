#include "cqrw/homomorphism.hpp"

#include <numeric>

#include "cqrw/error.hpp"
#include "detail/matcher.hpp"

namespace cqrw {

namespace {

// Pins head(source) onto head(target) position by position.
std::optional<Substitution> head_binding(const Atom& source_head, const Atom& target_head) {
  if (source_head.arity() != target_head.arity()) return std::nullopt;
  Substitution fixed;
  for (std::size_t i = 0; i < source_head.arity(); ++i) {
    const std::string& v = source_head.args[i].name();
    const Term& image = target_head.args[i];
    if (const Term* prev = fixed.find(v)) {
      if (*prev != image) return std::nullopt;
    } else {
      fixed.set(v, image);
    }
  }
  return fixed;
}

std::optional<Substitution> head_preserving_mapping(const ConjunctiveQuery& source, const ConjunctiveQuery& target) {
  auto fixed = head_binding(source.head(), target.head());
  if (!fixed) return std::nullopt;
  return find_atom_mapping(source.body(), target.body(), *fixed);
}

void require_same_arity(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2) {
  if (q1.arity() != q2.arity())
    throw Error(ErrorCode::HeadArityMismatch, "cannot compare queries of arity " + std::to_string(q1.arity()) +
                                                  " and " + std::to_string(q2.arity()));
}

// σ^m on `domain`, walking each cycle m steps.
Substitution permutation_power(const Substitution& perm, const VarSet& domain, std::size_t m) {
  Substitution out;
  for (const auto& x : domain) {
    std::size_t len = 1;
    for (std::string y = perm.image(x).name(); y != x; y = perm.image(y).name()) ++len;
    std::string y = x;
    for (std::size_t step = 0; step < m % len; ++step) y = perm.image(y).name();
    out.set(x, Term::variable(y));
  }
  return out;
}

}  // namespace

std::optional<Substitution> find_atom_mapping(std::span<const Atom> from, std::span<const Atom> into,
                                              const Substitution& fixed) {
  detail::AtomMatcher matcher(from, into);
  for (const auto& [v, t] : fixed.entries())
    if (!matcher.bind(v, t)) return std::nullopt;
  std::optional<Substitution> found;
  matcher.for_each([&](Substitution s) {
    found = std::move(s);
    return false;
  });
  return found;
}

void for_each_atom_mapping(std::span<const Atom> from, std::span<const Atom> into, const Substitution& fixed,
                           const std::function<bool(const Substitution&)>& visit) {
  detail::AtomMatcher matcher(from, into);
  for (const auto& [v, t] : fixed.entries())
    if (!matcher.bind(v, t)) return;
  matcher.for_each([&](const Substitution& s) { return visit(s); });
}

std::optional<Homomorphism> find_homomorphism(const ConjunctiveQuery& source, const ConjunctiveQuery& target,
                                              HomomorphismKind kind) {
  std::optional<Substitution> mapping;
  if (kind == HomomorphismKind::Full) {
    if (source.head().relation != target.head().relation) return std::nullopt;
    mapping = head_preserving_mapping(source, target);
  } else {
    mapping = find_atom_mapping(source.body(), target.body());
  }
  if (!mapping) return std::nullopt;
  return Homomorphism{std::move(*mapping), source, target, kind};
}

bool is_homomorphism(const Substitution& mapping, const ConjunctiveQuery& source, const ConjunctiveQuery& target,
                     HomomorphismKind kind) {
  for (const auto& v : source.variables()) {
    const Term* t = mapping.find(v);
    if (t == nullptr || !t->is_variable()) return false;
  }
  for (const auto& a : source.body())
    if (!contains(target.body(), mapping.apply(a))) return false;
  if (kind == HomomorphismKind::Full) return mapping.apply(source.head()) == target.head();
  return true;
}

bool contained(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2) {
  require_same_arity(q1, q2);
  return head_preserving_mapping(q2, q1).has_value();
}

bool equivalent(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2) {
  return equivalence_witness(q1, q2).has_value();
}

std::optional<EquivalenceWitness> equivalence_witness(const ConjunctiveQuery& q1, const ConjunctiveQuery& q2) {
  require_same_arity(q1, q2);
  auto forward = head_preserving_mapping(q1, q2);
  if (!forward) return std::nullopt;
  auto backward = head_preserving_mapping(q2, q1);
  if (!backward) return std::nullopt;
  return EquivalenceWitness{std::move(*forward), std::move(*backward)};
}

CoreResult compute_core(const ConjunctiveQuery& q) {
  const Substitution head_fixed = Substitution::identity(q.head_variables());
  std::vector<Atom> current = q.body_atoms();
  // last atoms first, so the earlier of two redundant copies survives
  for (auto it = q.body().rbegin(); it != q.body().rend(); ++it) {
    const Atom& atom = *it;
    if (current.size() == 1) break;
    std::vector<Atom> reduced;
    reduced.reserve(current.size() - 1);
    for (const auto& a : current)
      if (a != atom) reduced.push_back(a);
    if (find_atom_mapping(q.body(), reduced, head_fixed)) current = std::move(reduced);
  }
  auto retraction = find_atom_mapping(q.body(), current, head_fixed);
  if (!retraction) throw Error(ErrorCode::InternalError, "core lost its retraction");
  return CoreResult{make_query(q.head(), std::move(current), q.schema()), std::move(*retraction)};
}

ConjunctiveQuery core(const ConjunctiveQuery& q) { return compute_core(q).query; }

std::size_t permutation_order(const Substitution& perm, const VarSet& domain) {
  std::set<std::string> images;
  for (const auto& x : domain) {
    Term t = perm.image(x);
    if (!t.is_variable() || !domain.contains(t.name()) || !images.insert(t.name()).second)
      throw Error(ErrorCode::PreconditionViolated, "mapping is not a permutation of its domain");
  }
  std::size_t order = 1;
  std::set<std::string> seen;
  for (const auto& x : domain) {
    if (seen.contains(x)) continue;
    std::size_t len = 0;
    std::string y = x;
    do {
      seen.insert(y);
      y = perm.image(y).name();
      ++len;
    } while (y != x);
    order = std::lcm(order, len);
  }
  return order;
}

Homomorphism invert_on_image(const ConjunctiveQuery& q_min, const ConjunctiveQuery& q_other, const Homomorphism& h1) {
  if (!is_homomorphism(h1.mapping, q_min, q_other, HomomorphismKind::Full))
    throw Error(ErrorCode::PreconditionViolated, "h1 is not a full homomorphism from q_min to q_other");
  auto h2_prime = find_homomorphism(q_other, q_min, HomomorphismKind::Full);
  if (!h2_prime) throw Error(ErrorCode::PreconditionViolated, "no homomorphism back into the minimal query");

  const VarSet domain = q_min.variables();
  const Substitution automorphism = compose(h2_prime->mapping, h1.mapping).restricted_to(domain);
  const std::size_t k = permutation_order(automorphism, domain);
  const Substitution power = permutation_power(automorphism, domain, k - 1);
  Substitution h2 = compose(power, h2_prime->mapping).restricted_to(q_other.variables());

  for (const auto& a : q_min.body())
    if (h2.apply(h1.mapping.apply(a)) != a)
      throw Error(ErrorCode::InternalError, "inverse does not fix atom " + to_string(a));
  if (!is_homomorphism(h2, q_other, q_min, HomomorphismKind::Full))
    throw Error(ErrorCode::InternalError, "inverse is not a homomorphism");
  return Homomorphism{std::move(h2), q_other, q_min, HomomorphismKind::Full};
}

}  // namespace cqrw
