#include "cqrw/text_io.hpp"

#include <cctype>
#include <optional>
#include <set>
#include <vector>

#include "cqrw/error.hpp"

namespace cqrw {

namespace {

enum class Tok { Ident, Number, String, LParen, RParen, Comma, Dot, Implies, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blank();
    const std::size_t l = line_;
    const std::size_t c = col_;
    if (pos_ >= text_.size()) return {Tok::End, "", l, c};
    const char ch = text_[pos_];
    auto single = [&](Tok k) {
      advance();
      return Token{k, std::string(1, ch), l, c};
    };
    switch (ch) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      case '.': return single(Tok::Dot);
      default: break;
    }
    if (ch == ':') {
      advance();
      if (pos_ < text_.size() && text_[pos_] == '-') {
        advance();
        return {Tok::Implies, ":-", l, c};
      }
      throw SyntaxError(l, c, "expected ':-'");
    }
    if (ident_start(ch)) {
      std::string s;
      while (pos_ < text_.size() && ident_char(text_[pos_])) s += advance();
      return {Tok::Ident, s, l, c};
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-') {
      std::string s(1, advance());
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) s += advance();
      if (s == "-") throw SyntaxError(l, c, "expected a digit after '-'");
      return {Tok::Number, s, l, c};
    }
    if (ch == '"') {
      advance();
      std::string s;
      while (true) {
        if (pos_ >= text_.size() || text_[pos_] == '\n') throw SyntaxError(l, c, "unterminated string");
        char d = advance();
        if (d == '"') break;
        if (d == '\\') {
          if (pos_ >= text_.size()) throw SyntaxError(l, c, "unterminated string");
          d = advance();
        }
        s += d;
      }
      return {Tok::String, s, l, c};
    }
    std::string shown = std::isprint(static_cast<unsigned char>(ch)) ? std::string(1, ch) : "byte " + std::to_string(
                                                                                                static_cast<unsigned char>(ch));
    throw SyntaxError(l, c, "unexpected character " + shown);
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

struct RawRule {
  std::string keyword;  // "query", "view" or empty
  Atom head;
  std::vector<Atom> body;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  bool at_end() const { return cur_.kind == Tok::End; }

  RawRule rule() {
    RawRule r{"", {}, {}, cur_.line, cur_.column};
    if (cur_.kind == Tok::Ident && (cur_.text == "query" || cur_.text == "view")) {
      Token kw = cur_;
      shift();
      if (cur_.kind == Tok::Ident) {
        r.keyword = kw.text;
      } else {
        // a relation that happens to be called query/view
        pending_ = kw;
      }
    }
    r.head = atom(false);
    expect(Tok::Implies, "':-'");
    r.body.push_back(atom(false));
    while (cur_.kind == Tok::Comma) {
      shift();
      r.body.push_back(atom(false));
    }
    expect(Tok::Dot, "'.'");
    return r;
  }

  Atom fact() {
    Atom a = atom(true);
    expect(Tok::Dot, "'.'");
    return a;
  }

  const Token& current() const { return cur_; }

 private:
  void shift() { cur_ = lexer_.next(); }

  Token take_ident() {
    if (pending_) {
      Token t = *pending_;
      pending_.reset();
      return t;
    }
    if (cur_.kind != Tok::Ident) throw SyntaxError(cur_.line, cur_.column, "expected a relation name, got " + describe(cur_));
    Token t = cur_;
    shift();
    return t;
  }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) throw SyntaxError(cur_.line, cur_.column, std::string("expected ") + what + ", got " + describe(cur_));
    shift();
  }

  Atom atom(bool ground) {
    Atom a{take_ident().text, {}};
    expect(Tok::LParen, "'('");
    if (cur_.kind != Tok::RParen) {
      a.args.push_back(argument(ground));
      while (cur_.kind == Tok::Comma) {
        shift();
        a.args.push_back(argument(ground));
      }
    }
    expect(Tok::RParen, "')'");
    return a;
  }

  Term argument(bool ground) {
    const Token t = cur_;
    if (t.kind == Tok::Ident) {
      shift();
      return ground ? Term::constant(t.text) : Term::variable(t.text);
    }
    if (ground && (t.kind == Tok::Number || t.kind == Tok::String)) {
      shift();
      return Term::constant(t.text);
    }
    throw SyntaxError(t.line, t.column, std::string(ground ? "expected a constant" : "expected a variable") +
                                            ", got " + describe(t));
  }

  Lexer lexer_;
  Token cur_{Tok::End, "", 1, 1};
  std::optional<Token> pending_;
};

std::string at(std::size_t line, std::size_t col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": ";
}

void record_arity(Schema& schema, const Atom& a, const RawRule& r) {
  auto [it, inserted] = schema.emplace(a.relation, a.arity());
  if (!inserted && it->second != a.arity())
    throw Error(ErrorCode::ArityMismatch, at(r.line, r.column) + "relation " + a.relation + " used with arity " +
                                              std::to_string(a.arity()) + ", earlier " + std::to_string(it->second));
}

ConjunctiveQuery build(const RawRule& r, const Schema& schema) {
  try {
    return make_query(r.head, r.body, schema);
  } catch (const SyntaxError&) {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), at(r.line, r.column) + e.message());
  }
}

bool plain_identifier(const std::string& s) {
  if (s.empty() || !ident_start(s.front())) return false;
  for (char c : s)
    if (!ident_char(c)) return false;
  return true;
}

bool plain_number(const std::string& s) {
  std::size_t i = s.size() > 1 && s.front() == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  Parser p(text);
  std::vector<RawRule> rules;
  while (!p.at_end()) {
    RawRule r = p.rule();
    if (r.keyword.empty())
      throw SyntaxError(r.line, r.column, "rule must start with 'query' or 'view'");
    rules.push_back(std::move(r));
  }

  Schema schema;
  const RawRule* query_rule = nullptr;
  std::set<std::string> view_names;
  for (const auto& r : rules) {
    record_arity(schema, r.head, r);
    for (const auto& a : r.body) record_arity(schema, a, r);
    if (r.keyword == "query") {
      if (query_rule != nullptr) throw Error(ErrorCode::DuplicateQuery, at(r.line, r.column) + "second query rule");
      query_rule = &r;
    } else if (!view_names.insert(r.head.relation).second) {
      throw Error(ErrorCode::DuplicateView, at(r.line, r.column) + "view " + r.head.relation + " defined twice");
    }
  }
  if (query_rule == nullptr) throw Error(ErrorCode::MissingQuery, "no query rule");
  if (view_names.contains(query_rule->head.relation))
    throw Error(ErrorCode::ViewNameClash, "view " + query_rule->head.relation + " has the query's head name");

  std::vector<View> views;
  for (const auto& r : rules)
    if (r.keyword == "view") views.push_back(build(r, schema));
  ConjunctiveQuery q = build(*query_rule, schema);
  return ProblemFile{std::move(schema), std::move(q), ViewSet(std::move(views))};
}

ConjunctiveQuery parse_rule(std::string_view text) {
  Parser p(text);
  if (p.at_end()) throw SyntaxError(1, 1, "empty rule file");
  RawRule r = p.rule();
  if (!p.at_end()) throw SyntaxError(p.current().line, p.current().column, "expected a single rule");
  Schema schema;
  record_arity(schema, r.head, r);
  for (const auto& a : r.body) record_arity(schema, a, r);
  return build(r, schema);
}

Database parse_database(std::string_view text, const Schema& schema) {
  Parser p(text);
  Database d;
  while (!p.at_end()) {
    const std::size_t line = p.current().line;
    const std::size_t col = p.current().column;
    Atom f = p.fact();
    auto it = schema.find(f.relation);
    if (it == schema.end()) throw Error(ErrorCode::UnknownRelation, at(line, col) + "unknown relation " + f.relation);
    if (it->second != f.arity())
      throw Error(ErrorCode::ArityMismatch, at(line, col) + to_string(f) + " does not have arity " +
                                                std::to_string(it->second));
    d.insert(std::move(f));
  }
  return d;
}

Database parse_database(std::string_view text) {
  Parser p(text);
  Database d;
  while (!p.at_end()) {
    const std::size_t line = p.current().line;
    const std::size_t col = p.current().column;
    Atom f = p.fact();
    try {
      d.insert(std::move(f));
    } catch (const Error& e) {
      throw Error(e.code(), at(line, col) + e.message());
    }
  }
  return d;
}

std::string serialize_query(const ConjunctiveQuery& q) { return to_string(q); }

std::string serialize_problem(const ProblemFile& p) {
  std::string out = "query " + serialize_query(p.query) + "\n";
  for (const auto& v : p.views.views()) out += "view " + serialize_query(v) + "\n";
  return out;
}

std::string serialize_database(const Database& d) {
  std::string out;
  for (const auto& f : d.facts()) {
    out += f.relation + "(";
    for (std::size_t i = 0; i < f.args.size(); ++i) {
      if (i > 0) out += ",";
      const std::string& c = f.args[i].name();
      if (plain_identifier(c) || plain_number(c)) {
        out += c;
      } else {
        out += '"';
        for (char ch : c) {
          if (ch == '"' || ch == '\\') out += '\\';
          out += ch;
        }
        out += '"';
      }
    }
    out += ").\n";
  }
  return out;
}

}  // namespace cqrw
