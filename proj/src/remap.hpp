#pragma once

#include <map>
#include <optional>

#include "sla/agreement.hpp"

namespace sla::detail {

// Where a node of the old tree ended up. `within` is set when the node was
// merged into a larger text node and gives its interval inside it.
struct Moved {
  NodePath path;
  std::optional<TextRange> within;
  bool removed = false;
};

// Old node path -> new position. Paths below a mapped node follow it.
using PathMap = std::map<NodePath, Moved>;

std::optional<Locator> remap(const Locator& l, const PathMap& map);
NodePath remap_path(const NodePath& p, const PathMap& map);

// Rewrites every locator into document `doc` held anywhere in the headers.
void remap_agreement(SmartLegalAgreement& a, const DocumentId& doc, const PathMap& map);

}  // namespace sla::detail
