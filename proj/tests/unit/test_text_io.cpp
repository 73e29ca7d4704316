#include <doctest.h>

#include <random>

#include "cqrw/error.hpp"
#include "cqrw/evaluation.hpp"
#include "cqrw/text_io.hpp"
#include "generators.hpp"
#include "util.hpp"

using namespace cqrw;

namespace {

ErrorCode parse_error(std::string_view text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalError;
}

}  // namespace

TEST_SUITE("text-io") {

TEST_CASE("intro problem file") {
  ProblemFile p = testutil::problem("intro.cq");
  CHECK(serialize_query(p.query) == "H(x,y,y1) :- P(u,u1,x), R(x,w), S(w), T(w,y), T(w,y1).");
  REQUIRE(p.views.size() == 2);
  CHECK(p.views[0].name() == "V1");
  CHECK(p.views[0].arity() == 2);
  CHECK(p.views[0].body().size() == 3);
  CHECK(p.views[1].name() == "V2");
  CHECK(p.views[1].body().size() == 2);
  CHECK(p.schema.at("P") == 3);
  CHECK(p.schema.at("V1") == 2);
}

TEST_CASE("boolean query without views") {
  ProblemFile p = parse_problem("query H() :- R(x).");
  CHECK(p.query.is_boolean());
  CHECK(p.views.empty());
  CHECK(serialize_query(p.query) == "H() :- R(x).");
}

TEST_CASE("problem errors") {
  CHECK(parse_error("query H() :- R(x).\nview V(x) :- R(x,y).") == ErrorCode::ArityMismatch);
  CHECK(parse_error("view V(x) :- R(x).") == ErrorCode::MissingQuery);
  CHECK(parse_error("query H() :- R(x).\nquery G() :- R(x).") == ErrorCode::DuplicateQuery);
  CHECK(parse_error("query H() :- R(x).\nview V(x) :- R(x).\nview V(y) :- R(y).") == ErrorCode::DuplicateView);
  CHECK(parse_error("query H(x) :- R(x,y") == ErrorCode::SyntaxError);
  CHECK(parse_error("query H(x) :- R(y).") == ErrorCode::UnsafeQuery);
  CHECK(parse_error("") == ErrorCode::MissingQuery);
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_problem("query H(x) :- R(x).\nview V(x) :- R(x) S(x).");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 1);
  }
}

TEST_CASE("comments and keywords used as relation names") {
  ProblemFile p = parse_problem("# c\nquery H(x) :- query(x), view(x). # trailing\n");
  CHECK(p.query.body().size() == 2);
}

TEST_CASE("databases") {
  CHECK(parse_database("R(a,b). S(b).").size() == 2);
  CHECK_THROWS_AS(parse_database("R(a).", Schema{{"R", 2}}), Error);
  CHECK(parse_database("").empty());
  Database d = parse_database("R(\"a b\", 1). R(c, -2).");
  CHECK(d.contains(Atom{"R", {Term::constant("a b"), Term::constant("1")}}));
  CHECK(parse_database(serialize_database(d)) == d);
}

TEST_CASE("canonical candidate serializes as expected") {
  ProblemFile p = testutil::problem("canonical.cq");
  auto cand = canonical_candidate(p.query, p.views);
  REQUIRE(cand);
  CHECK(serialize_query(cand->query) == "H(x,y,z) :- V1(x,y,z), V2(x,y,z,x).");
  CHECK(serialize_query(parse_rule("H() :- R(x).")) == "H() :- R(x).");
}

TEST_CASE("round trip on random queries") {
  gen::Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    ConjunctiveQuery q = gen::random_query(rng);
    const std::string s = serialize_query(q);
    ConjunctiveQuery back = parse_rule(s);
    CHECK(back == q);
    CHECK(serialize_query(back) == s);
  }
  for (const char* f : {"intro.cq", "cover.cq", "weak_head.cq", "connected_cycle.cq"}) {
    ProblemFile p = testutil::problem(f);
    ProblemFile again = parse_problem(serialize_problem(p));
    CHECK(again.query == p.query);
    REQUIRE(again.views.size() == p.views.size());
    for (std::size_t i = 0; i < p.views.size(); ++i) CHECK(again.views[i] == p.views[i]);
    CHECK(serialize_problem(again) == serialize_problem(p));
  }
}

TEST_CASE("fuzz: arbitrary bytes only raise declared errors") {
  std::mt19937_64 rng(5);
  const std::string alphabet = "qvueryiwH():-,.RSxy_#\"\\ \n\t'0123456789";
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    const std::size_t n = rng() % 60;
    for (std::size_t k = 0; k < n; ++k)
      text.push_back(rng() % 4 ? alphabet[rng() % alphabet.size()] : static_cast<char>(rng() % 256));
    if (i % 3 == 0) text = "query H(x) :- R(x" + text;
    try {
      parse_problem(text);
    } catch (const Error&) {
    } catch (...) {
      FAIL("undeclared exception on input: " << text);
    }
    try {
      parse_database(text);
    } catch (const Error&) {
    } catch (...) {
      FAIL("undeclared exception on database input: " << text);
    }
  }
}

}  // TEST_SUITE
