#pragma once

#include <string>
#include <string_view>

#include "cqrw/query.hpp"

namespace cqrw {

/// One query and its views, read from a problem file.
struct ProblemFile {
  Schema schema;  // every relation symbol of the file, heads included
  ConjunctiveQuery query;
  ViewSet views;
};

/// Problem file grammar:
///
///   file  := (rule | comment)*
///   rule  := ("query" | "view") atom ":-" atom ("," atom)* "."
///   atom  := ident "(" [ident ("," ident)*] ")"
///   ident := [A-Za-z_][A-Za-z0-9_']*
///
/// `#` starts a comment running to end of line; rules may span lines.
/// Throws SyntaxError (with position), ArityMismatch, DuplicateView,
/// DuplicateQuery, MissingQuery, ViewNameClash, or any make_query error.
ProblemFile parse_problem(std::string_view text);

/// A single rule, with or without a leading keyword.
ConjunctiveQuery parse_rule(std::string_view text);

/// Facts `R(a,b).` whose arguments are identifiers, integers or
/// double-quoted strings, all read as constants. Relations and arities are
/// checked against `schema` (UnknownRelation, ArityMismatch).
Database parse_database(std::string_view text, const Schema& schema);
/// As above without schema checks beyond per-relation arity agreement.
Database parse_database(std::string_view text);

/// `H(x,y) :- R(x,z), S(z,y).` with the body in canonical order.
std::string serialize_query(const ConjunctiveQuery& q);
/// `query ...` followed by one `view ...` line per view.
std::string serialize_problem(const ProblemFile& p);
/// One fact per line; constants that are not plain identifiers are quoted.
std::string serialize_database(const Database& d);

}  // namespace cqrw
