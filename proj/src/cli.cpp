#include "cqrw/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cqrw/error.hpp"
#include "cqrw/homomorphism.hpp"
#include "cqrw/json_io.hpp"
#include "cqrw/rewriting.hpp"
#include "cqrw/text_io.hpp"

namespace cqrw {

namespace {

struct Config {
  std::string format = "text";
  std::size_t seed = 1;
  bool verbose = false;
  std::string file;
  std::string second_file;
  std::string target = "any";
  std::size_t limit = kDefaultCandidateLimit;
  std::string split_views = "auto";
  std::string mode = "free-connex";
};

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json envelope(const char* status) {
  return {{"status", status}, {"rewriting", nullptr}, {"class", nullptr}, {"witness", nullptr}};
}

std::string flags(const ClassReport& r) {
  std::ostringstream s;
  s << "acyclic=" << std::boolalpha << r.acyclic << " free_connex=" << r.free_connex
    << " hierarchical=" << r.hierarchical << " q_hierarchical=" << r.q_hierarchical
    << " weak_head_arity=" << r.weak_head_arity;
  return s.str();
}

int exit_code_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::SizeLimitExceeded: return kExitLimit;
    case ErrorCode::NotAcyclic:
    case ErrorCode::NotFreeConnex:
    case ErrorCode::NotHierarchical:
    case ErrorCode::NotQHierarchical: return kExitClass;
    case ErrorCode::InternalError: return kExitInternal;
    default: return kExitInput;
  }
}

// A query file for eval: problem file, or one rule with an optional keyword.
ConjunctiveQuery read_query(const std::string& text) {
  try {
    return parse_problem(text).query;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SyntaxError && e.code() != ErrorCode::MissingQuery) throw;
  }
  return parse_rule(text);
}

int cmd_classify(const Config& c, std::ostream& out) {
  const ProblemFile p = parse_problem(read_file(c.file));
  const ClassReport qr = classify(p.query);
  if (c.format == "json") {
    json e = envelope("OK");
    e["class"] = to_json(qr);
    json views = json::object();
    for (const auto& v : p.views.views()) views[v.name()] = to_json(classify(v));
    e["witness"] = {{"query", serialize_query(p.query)}, {"views", views}};
    out << e.dump(2) << "\n";
    return kExitOk;
  }
  out << "query " << serialize_query(p.query) << "\n  " << flags(qr) << "\n";
  for (const auto& v : p.views.views()) out << "view " << serialize_query(v) << "\n  " << flags(classify(v)) << "\n";
  return kExitOk;
}

int cmd_minimize(const Config& c, std::ostream& out) {
  const ProblemFile p = parse_problem(read_file(c.file));
  const CoreResult r = compute_core(p.query);
  if (c.format == "json") {
    json e = envelope("OK");
    e["rewriting"] = serialize_query(r.query);
    e["class"] = to_json(classify(r.query));
    e["witness"] = {{"retraction", to_json(r.retraction)}};
    out << e.dump(2) << "\n";
    return kExitOk;
  }
  out << serialize_query(r.query) << "\n";
  if (c.verbose) out << "retraction: " << to_string(r.retraction) << "\n";
  return kExitOk;
}

int cmd_rewrite(const Config& c, std::ostream& out) {
  const ProblemFile p = parse_problem(read_file(c.file));
  RewriteOptions o;
  o.target = *parse_target(c.target);
  o.limit = c.limit;
  o.split = *parse_split_policy(c.split_views);
  o.fresh_start = c.seed;
  const RewriteReport r = rewrite(p.query, p.views, o);
  if (c.format == "json") {
    out << to_json(r).dump(2) << "\n";
  } else if (!r.found) {
    out << "NONE (" << r.reason << ")\n";
  } else {
    out << serialize_query(*r.rewriting) << "\n";
    if (c.verbose) {
      out << "class: " << flags(*r.classes) << "\n";
      out << "expansion: " << serialize_query(r.expansion->query) << "\n";
      out << "query->expansion: " << to_string(r.query_to_expansion) << "\n";
      out << "expansion->query: " << to_string(r.expansion_to_query) << "\n";
      for (const auto& d : r.partition->descriptions)
        out << "cover: {" << to_string(d.atoms) << "} via " << d.view.name() << " alpha=" << to_string(d.alpha)
            << " psi=" << to_string(d.psi) << "\n";
    }
  }
  return r.found ? kExitOk : kExitAbsent;
}

int cmd_verify(const Config& c, std::ostream& out) {
  const ProblemFile p = parse_problem(read_file(c.file));
  const std::string rw_text = read_file(c.second_file);
  std::optional<ConjunctiveQuery> parsed;
  try {
    parsed = parse_rule(rw_text);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsafeQuery) throw;
    // not even a query: a head variable is lost, so it cannot be exact
    if (c.format == "json") {
      json j = envelope("FAIL");
      j["witness"] = {{"reason", e.message()}};
      out << j.dump(2) << "\n";
    } else {
      out << "FAIL\nreason: " << e.message() << "\n";
    }
    return kExitAbsent;
  }
  const ConjunctiveQuery& rw = *parsed;
  const VerifyResult v = verify_rewriting(p.query, p.views, rw);
  if (c.format == "json") {
    json e = envelope(v.ok ? "OK" : "FAIL");
    e["rewriting"] = serialize_query(rw);
    e["class"] = to_json(classify(rw));
    e["witness"] = {{"expansion", serialize_query(v.expansion.query)},
                    {"query_to_expansion", v.query_to_expansion ? to_json(*v.query_to_expansion) : json(nullptr)},
                    {"expansion_to_query", v.expansion_to_query ? to_json(*v.expansion_to_query) : json(nullptr)}};
    out << e.dump(2) << "\n";
  } else {
    out << (v.ok ? "OK" : "FAIL") << "\n";
    out << "expansion: " << serialize_query(v.expansion.query) << "\n";
    out << "query->expansion: " << (v.query_to_expansion ? to_string(*v.query_to_expansion) : "none") << "\n";
    out << "expansion->query: " << (v.expansion_to_query ? to_string(*v.expansion_to_query) : "none") << "\n";
  }
  return v.ok ? kExitOk : kExitAbsent;
}

int cmd_eval(const Config& c, std::ostream& out) {
  const ConjunctiveQuery q = read_query(read_file(c.file));
  const Database d = parse_database(read_file(c.second_file));
  const Database result = evaluate(q, d);
  if (c.format == "json") {
    json e = envelope("OK");
    json facts = json::array();
    for (const auto& f : result.facts()) facts.push_back(to_string(f));
    e["witness"] = {{"query", serialize_query(q)}, {"facts", facts}};
    out << e.dump(2) << "\n";
  } else {
    out << serialize_database(result);
  }
  return kExitOk;
}

int cmd_split_views(const Config& c, std::ostream& out) {
  const ProblemFile p = parse_problem(read_file(c.file));
  const SplitViews s = split_views_bounded(p.views, c.mode == "weak-head" ? SplitMode::WeakHead : SplitMode::FreeConnex);
  if (c.format == "json") {
    json e = envelope("OK");
    e["witness"] = to_json(s);
    out << e.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& v : s.views.views()) out << "view " << serialize_query(v) << "\n";
  for (const auto& f : s.fragments) {
    out << "# " << f.name << " -> " << f.original << "(";
    for (std::size_t i = 0; i < f.original_head.size(); ++i) {
      if (i > 0) out << ",";
      const bool kept = std::find(f.kept.begin(), f.kept.end(), f.original_head[i]) != f.kept.end();
      out << (kept ? f.original_head[i] : "_");
    }
    out << ")\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Conjunctive query rewriting with views", "cqrw"};
  app.require_subcommand(1);
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", c.seed, "First index for fresh _fN variables")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", c.verbose, "Print witnesses in text mode");

  std::function<int(const Config&, std::ostream&)> action;
  auto* classify_cmd = app.add_subcommand("classify", "Structural classes of the query and each view");
  classify_cmd->add_option("file", c.file, "Problem file")->required();
  classify_cmd->callback([&] { action = cmd_classify; });

  auto* minimize_cmd = app.add_subcommand("minimize", "Core of the query");
  minimize_cmd->add_option("file", c.file, "Problem file")->required();
  minimize_cmd->callback([&] { action = cmd_minimize; });

  auto* rewrite_cmd = app.add_subcommand("rewrite", "Find a rewriting of the query over the views");
  rewrite_cmd->add_option("file", c.file, "Problem file")->required();
  rewrite_cmd->add_option("--target", c.target, "Class of the rewriting")
      ->check(CLI::IsMember({"any", "acyclic", "free-connex", "hierarchical", "q-hierarchical"}));
  rewrite_cmd->add_option("--limit", c.limit, "Bound on canonical candidate atoms")->check(CLI::PositiveNumber);
  rewrite_cmd->add_option("--split-views", c.split_views, "View splitting")
      ->check(CLI::IsMember({"auto", "off", "weak-head"}));
  rewrite_cmd->callback([&] { action = cmd_rewrite; });

  auto* verify_cmd = app.add_subcommand("verify", "Check a rewriting by expansion");
  verify_cmd->add_option("file", c.file, "Problem file")->required();
  verify_cmd->add_option("rewriting", c.second_file, "File with one rule over the views")->required();
  verify_cmd->callback([&] { action = cmd_verify; });

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a query on a database");
  eval_cmd->add_option("query", c.file, "Query or problem file")->required();
  eval_cmd->add_option("database", c.second_file, "Database file")->required();
  eval_cmd->callback([&] { action = cmd_eval; });

  auto* split_cmd = app.add_subcommand("split-views", "Split views into bounded-arity fragments");
  split_cmd->add_option("file", c.file, "Problem file")->required();
  split_cmd->add_option("--mode", c.mode, "Splitting mode")->check(CLI::IsMember({"free-connex", "weak-head"}));
  split_cmd->callback([&] { action = cmd_split_views; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    return action(c, out);
  } catch (const Error& e) {
    if (c.format == "json") {
      json j = envelope("ERROR");
      j["witness"] = {{"code", to_string(e.code())}, {"message", e.what()}};
      out << j.dump(2) << "\n";
    }
    err << "cqrw: " << e.what() << "\n";
    return exit_code_of(e.code());
  } catch (const FileError& e) {
    if (c.format == "json") {
      json j = envelope("ERROR");
      j["witness"] = {{"code", "IO_ERROR"}, {"message", e.what()}};
      out << j.dump(2) << "\n";
    }
    err << "cqrw: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    if (c.format == "json") {
      json j = envelope("ERROR");
      j["witness"] = {{"code", "INTERNAL_ERROR"}, {"message", e.what()}};
      out << j.dump(2) << "\n";
    }
    err << "cqrw: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace cqrw
