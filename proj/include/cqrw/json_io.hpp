#pragma once

#include <json.hpp>

#include "cqrw/cover.hpp"
#include "cqrw/rewriting.hpp"
#include "cqrw/structure.hpp"
#include "cqrw/view_split.hpp"

namespace cqrw {

using json = nlohmann::ordered_json;

json to_json(const Substitution& s);
json to_json(const JoinTree& tree);
json to_json(const ClassReport& report);
json to_json(const CoverPartition& cp);
json to_json(const SplitViews& split);
/// CLI envelope: {status, rewriting, class, witness}.
json to_json(const RewriteReport& report);

}  // namespace cqrw
