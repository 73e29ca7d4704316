#include <doctest.h>

#include "cqrw/error.hpp"
#include "cqrw/evaluation.hpp"
#include "cqrw/homomorphism.hpp"
#include "cqrw/structure.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace cqrw;
using testutil::rule;

namespace {

// structural equality up to variable renaming, head included
bool isomorphic(const ConjunctiveQuery& a, const ConjunctiveQuery& b) {
  return a.body().size() == b.body().size() && a.variables().size() == b.variables().size() &&
         oracle::backtrack_query_homomorphism(a, b) && oracle::backtrack_query_homomorphism(b, a) &&
         [&] {
           auto h = find_homomorphism(a, b);
           return h && h->mapping.is_injective_on(a.variables());
         }();
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("evaluate") {
  ConjunctiveQuery q = rule("H(x) :- R(x,y).");
  Database d = parse_database("R(a,b). R(a,c).");
  Database out = evaluate(q, d);
  CHECK(out.size() == 1);
  CHECK(out.contains(make_fact("H", {"a"})));
  Database yes = evaluate(rule("H() :- R(x,y), R(y,z)."), parse_database("R(a,b). R(b,c)."));
  CHECK(yes.size() == 1);
  CHECK(yes.contains(Atom{"H", {}}));
  CHECK(evaluate(rule("H() :- R(x,x)."), d).empty());
}

TEST_CASE("view on the canonical database") {
  ConjunctiveQuery v1 = rule(testutil::slurp(testutil::data_path("v1.rule")));
  Database d = parse_database(testutil::slurp(testutil::data_path("canonical_db.txt")));
  Database out = evaluate(v1, d);
  CHECK(out.size() == 1);
  CHECK(out.contains(make_fact("V1", {"x", "y", "z"})));
}

TEST_CASE("canonical database") {
  CanonicalDatabase cd = canonical_database(rule("H(x) :- R(x,y)."));
  REQUIRE(cd.database.size() == 1);
  const Atom& f = *cd.database.facts().begin();
  CHECK(f.is_ground());
  CHECK(f.args[0] == Term::constant(cd.constant_of.at("x")));
  CHECK(cd.variable_of.at(cd.constant_of.at("y")) == "y");
  CHECK(canonical_database(testutil::problem("canonical.cq").query).database.size() == 4);
  CanonicalDatabase rep = canonical_database(rule("H() :- R(x,x)."));
  const Atom& g = *rep.database.facts().begin();
  CHECK(g.args[0] == g.args[1]);
}

TEST_CASE("canonical candidates") {
  ProblemFile p = testutil::problem("canonical.cq");
  auto c = canonical_candidate(p.query, p.views);
  REQUIRE(c);
  CHECK(isomorphic(c->query, rule("H(x,y,z) :- V1(x,y,z), V2(x,y,z,x).")));
  CHECK(c->witnesses.size() == 2);

  ProblemFile b = testutil::problem("boolean_cycle.cq");
  auto cb = canonical_candidate(b.query, b.views);
  REQUIRE(cb);
  CHECK(isomorphic(cb->query, rule("H() :- V1(x,y), V2(x,z), V3(z,y).")));
  CHECK_FALSE(is_acyclic(cb->query));

  ProblemFile h = testutil::problem("hierarchical.cq");
  auto ch = canonical_candidate(h.query, h.views);
  REQUIRE(ch);
  CHECK_FALSE(is_hierarchical(ch->query));

  ProblemFile n = testutil::problem("no_candidate.cq");
  CHECK_FALSE(canonical_candidate(n.query, n.views));
  CHECK_THROWS_AS(canonical_candidate(p.query, p.views, 1), Error);
}

TEST_CASE("expansions") {
  ProblemFile p = testutil::problem("canonical.cq");
  auto c = canonical_candidate(p.query, p.views);
  REQUIRE(c);
  FreshVariableSource fresh(p.query.variables());
  Expansion e = expand(c->query, p.views, fresh);
  CHECK(e.query.body_atoms() == p.query.body_atoms());
  CHECK(validate_expansion(e, c->query).empty());

  ProblemFile i = testutil::problem("intro.cq");
  ConjunctiveQuery r = rule(testutil::slurp(testutil::data_path("intro.rw")));
  FreshVariableSource f2(r.variables());
  Expansion ei = expand(r, i.views, f2);
  CHECK(ei.query.body().size() == 5);  // S(w) from all three applications is one atom
  CHECK(validate_expansion(ei, r).empty());
  CHECK(has_quantified_disjointness(ei.applications));
  CHECK(oracle::equivalent(ei.query, i.query));

  ViewSet flat({rule("V(x,y) :- R(x,y), S(y).")});
  FreshVariableSource f3;
  Expansion ef = expand(rule("H(a) :- V(a,b)."), flat, f3);
  CHECK(ef.query.body_atoms() == rule("H(a) :- R(a,b), S(b).").body_atoms());
}

TEST_CASE("view applications") {
  View v = rule("V(x) :- R(x,y), S(y,z).");
  CHECK(is_view_application(v, Substitution{{"x", "a"}, {"y", "b"}, {"z", "c"}}));
  CHECK_FALSE(is_view_application(v, Substitution{{"x", "a"}, {"y", "a"}, {"z", "c"}}));
  CHECK_FALSE(is_view_application(v, Substitution{{"x", "a"}, {"y", "b"}}));
}

TEST_CASE("baseline") {
  ProblemFile p = testutil::problem("canonical.cq");
  BaselineResult r = run_baseline(p.query, p.views);
  CHECK(r.status == BaselineStatus::Rewritable);
  auto rw = decide_and_rewrite_baseline(p.query, p.views);
  REQUIRE(rw);
  CHECK(isomorphic(*rw, rule("H(x,y,z) :- V1(x,y,z), V2(x,y,z,x).")));

  ProblemFile b = testutil::problem("boolean_cycle.cq");
  auto rb = decide_and_rewrite_baseline(b.query, b.views);
  REQUIRE(rb);
  CHECK_FALSE(is_acyclic(*rb));

  CHECK(run_baseline(testutil::problem("no_candidate.cq").query, testutil::problem("no_candidate.cq").views).status ==
        BaselineStatus::NoCandidate);
  CHECK(run_baseline(testutil::problem("no_rewriting.cq").query, testutil::problem("no_rewriting.cq").views).status ==
        BaselineStatus::NotARewriting);
}

TEST_CASE("baseline rewritings are semantically correct") {
  gen::Rng rng(313);
  gen::QueryShape s{1, 5, 5, 3, 3};
  int accepted = 0;
  for (int i = 0; i < 60; ++i) {
    ConjunctiveQuery q = gen::random_query(rng, s);
    gen::Instance inst = gen::rewritable_instance(rng, q, 3, i % 3 == 0 ? 0.5 : 0.0);
    BaselineResult r = run_baseline(inst.query, inst.views);
    if (r.candidate) {
      CHECK(is_homomorphism(r.expansion_to_query, r.expansion->query,
                            make_query(inst.query.head(), r.core.body_atoms()), HomomorphismKind::Full));
    }
    if (r.status != BaselineStatus::Rewritable) continue;
    ++accepted;
    CHECK(oracle::semantically_equal(inst.query, r.candidate->query, inst.views, rng));
  }
  CHECK(accepted > 20);
}

TEST_CASE("agrees_on matches the oracle evaluation") {
  ProblemFile p = testutil::problem("intro.cq");
  ConjunctiveQuery r = rule(testutil::slurp(testutil::data_path("intro.rw")));
  Database d = parse_database("P(a,b,c). R(c,d). S(d). T(d,e). T(d,f). S(e).");
  CHECK(agrees_on(p.query, r, p.views, d));
  CHECK(answers(p.query, d) == oracle::evaluate(p.query, d));
  CHECK(evaluate_views(p.views, d) == oracle::evaluate_views(p.views, d));
}

}  // TEST_SUITE
