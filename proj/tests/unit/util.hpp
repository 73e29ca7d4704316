#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cqrw/text_io.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) { return std::string(CQRW_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline cqrw::ProblemFile problem(const std::string& name) { return cqrw::parse_problem(slurp(data_path(name))); }
inline cqrw::ConjunctiveQuery rule(const std::string& text) { return cqrw::parse_rule(text); }

}  // namespace testutil
