#pragma once

#include <string>
#include <vector>

#include "cqrw/query.hpp"

namespace cqrw {

enum class SplitMode {
  FreeConnex,  // one fragment per child subtree of the head node in J⁺
  WeakHead,    // one fragment per cover-graph component
};

/// A fragment of an original view: same body, head restricted to `kept`.
struct ViewFragment {
  std::string name;
  std::string original;
  std::vector<std::string> kept;           // fragment head, in original head order
  std::vector<std::string> original_head;  // head arguments of the original view
};

struct SplitViews {
  ViewSet views;
  std::vector<ViewFragment> fragments;

  const ViewFragment* fragment(const std::string& name) const;
  /// Some view was replaced by something other than itself.
  bool changed() const;
};

/// Replaces each view by its fragments; identical fragments of one view are
/// merged. A view yielding a single fragment that keeps its whole head stays
/// as it is. In FreeConnex mode a non-free-connex view throws NotFreeConnex
/// when `strict`, and is left unsplit otherwise.
SplitViews split_views_bounded(const ViewSet& views, SplitMode mode, bool strict = true);

/// Replaces every fragment atom by an atom of its original view; dropped head
/// positions get fresh variables (one per dropped variable). Throws UnknownView.
ConjunctiveQuery translate_rewriting_back(const ConjunctiveQuery& w_rewriting, const SplitViews& split,
                                          FreshVariableSource& fresh);

}  // namespace cqrw
