#include "remap.hpp"

namespace sla::detail {

namespace {

// Longest mapped prefix of `p` and the unmapped remainder.
const Moved* lookup(const NodePath& p, const PathMap& map, std::size_t& prefix_len) {
  for (std::size_t n = p.size(); n > 0; --n) {
    auto it = map.find(NodePath(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n)));
    if (it != map.end()) {
      prefix_len = n;
      return &it->second;
    }
  }
  return nullptr;
}

}  // namespace

std::optional<Locator> remap(const Locator& l, const PathMap& map) {
  std::size_t n = 0;
  const Moved* m = lookup(l.path, map, n);
  if (!m) return l;
  if (m->removed) return std::nullopt;
  Locator out = l;
  out.path = m->path;
  out.path.insert(out.path.end(), l.path.begin() + static_cast<std::ptrdiff_t>(n), l.path.end());
  if (n == l.path.size() && m->within) {
    if (l.range) {
      out.range = TextRange{l.range->begin + m->within->begin, l.range->end + m->within->begin};
    } else {
      out.range = m->within;
    }
  }
  return out;
}

NodePath remap_path(const NodePath& p, const PathMap& map) {
  std::size_t n = 0;
  const Moved* m = lookup(p, map, n);
  if (!m || m->removed) return p;
  NodePath out = m->path;
  out.insert(out.end(), p.begin() + static_cast<std::ptrdiff_t>(n), p.end());
  return out;
}

void remap_agreement(SmartLegalAgreement& a, const DocumentId& doc, const PathMap& map) {
  if (map.empty()) return;
  auto fix = [&](Locator& l) {
    if (l.doc != doc) return;
    if (auto moved = remap(l, map)) l = *moved;
  };
  for (auto& h : a.headers) {
    for (auto& x : h.xref_table) {
      fix(x.source);
      if (auto* s = std::get_if<SpanTarget>(&x.target); s && s->doc == doc) s->path = remap_path(s->path, map);
      if (auto* li = std::get_if<ListItemTarget>(&x.target); li && li->doc == doc) li->list = remap_path(li->list, map);
    }
    for (auto& [id, slot] : h.indirection.incoming) fix(slot.locator);
    for (auto& r : h.other_data) fix(r.locator);
  }
}

}  // namespace sla::detail
