#include "sla/crossrefs.hpp"

#include <algorithm>
#include <set>

#include "sla/format.hpp"

namespace sla {

namespace {

bool span_has(const ProseDocument& d, const NodePath& p, DescriptiveKind kind, const std::string& id) {
  const MarkedSpan* s = span_at(d, p);
  return s && std::any_of(s->markups.begin(), s->markups.end(), [&](const Markup& m) { return m.is(kind, id); });
}

bool starts_with(const NodePath& p, const NodePath& prefix) {
  return p.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), p.begin());
}

std::string item_key(const NodeSequence& item) { return sha256_hex(plain_text(item)); }

const ListBlock* list_at(const ProseDocument& d, const NodePath& p) {
  const ProseNode* n = node_at(d, p);
  return n ? n->as<ListBlock>() : nullptr;
}

std::vector<NodePath> list_paths(const ProseDocument& d) {
  std::vector<NodePath> out;
  for_each_node(d, [&](const ProseNode& n, const NodePath& p) {
    if (n.is<ListBlock>()) out.push_back(p);
  });
  return out;
}

std::optional<std::size_t> list_ordinal(const ProseDocument& d, const NodePath& p) {
  auto all = list_paths(d);
  auto it = std::find(all.begin(), all.end(), p);
  if (it == all.end()) return std::nullopt;
  return static_cast<std::size_t>(it - all.begin());
}

// First list item (pre-order) whose content digest is `key`; the item at
// `hint` wins when it still matches.
std::optional<std::pair<NodePath, std::size_t>> find_list_item(const ProseDocument& d, const std::string& key,
                                                               const std::optional<std::pair<NodePath, std::size_t>>& hint) {
  if (hint) {
    const ListBlock* l = list_at(d, hint->first);
    if (l && hint->second < l->items.size() && item_key(l->items[hint->second]) == key) return hint;
  }
  for (const auto& p : list_paths(d)) {
    const ListBlock* l = list_at(d, p);
    for (std::size_t i = 0; i < l->items.size(); ++i) {
      if (item_key(l->items[i]) == key) return std::make_pair(p, i);
    }
  }
  return std::nullopt;
}

std::string fresh_xref_id(const SmartLegalAgreement& a) {
  std::set<std::string> used;
  for (const auto& h : a.headers) {
    for (const auto& x : h.xref_table) used.insert(x.xref_id);
    for (const auto& [id, e] : h.indirection.outgoing) used.insert(id);
  }
  for (const auto& d : a.documents) {
    for_each_node(d, [&](const ProseNode& n, const NodePath&) {
      if (auto* s = n.as<MarkedSpan>()) {
        for (const auto& m : s->markups) {
          if (m.is(DescriptiveKind::xref_source) || m.is(DescriptiveKind::xref_target)) used.insert(m.descriptive_if()->id);
        }
      }
    });
  }
  for (std::size_t n = used.size() + 1;; ++n) {
    std::string id = "x" + std::to_string(n);
    if (!used.count(id)) return id;
  }
}

std::string fresh_slot_id(const IndirectionTables& t) {
  for (std::size_t n = t.incoming.size() + 1;; ++n) {
    std::string id = "s" + std::to_string(n);
    if (!t.incoming.count(id)) return id;
  }
}

// Path of the node a target addresses, when it addresses one.
std::optional<NodePath> target_node_path(const ProseDocument& d, const TargetLocator& t) {
  struct V {
    const ProseDocument& d;
    std::optional<NodePath> operator()(const SpanTarget& s) const { return s.path; }
    std::optional<NodePath> operator()(const ListItemTarget& l) const { return l.list; }
    std::optional<NodePath> operator()(const TableTarget& t) const { return find_table(d, t.number); }
    std::optional<NodePath> operator()(const AnchorTarget& a) const { return find_anchor(d, a.anchor_id); }
    std::optional<NodePath> operator()(const IndirectTarget&) const { return std::nullopt; }
    std::optional<NodePath> operator()(const DocumentTarget&) const { return NodePath{}; }
  };
  return std::visit(V{d}, t);
}

[[noreturn]] void invalid(const std::string& what) { throw Error("LOCATOR_INVALID", what); }

// Markup splits text nodes; existing locators into the document follow.
void replace_document(SmartLegalAgreement& a, ProseDocument doc) {
  const DocumentId id = doc.id;
  a = edit_preserving_sources(a, id, [&](const ProseDocument&) { return doc; }).agreement;
}

}  // namespace

XrefResult add_crossref(const SmartLegalAgreement& agreement, const Locator& source, const TargetLocator& target) {
  SmartLegalAgreement a = agreement;
  const DocumentId& tdoc = target_doc(target);
  if (!a.find_document(source.doc)) invalid("unknown source document " + to_string(source.doc));
  if (!a.find_document(tdoc)) invalid("unknown target document " + to_string(tdoc));
  const bool intra = source.doc == tdoc;
  const std::string id = fresh_xref_id(a);

  // Mark or check the target first; an intra source path below a wrapped
  // target moves one level down.
  Locator src = source;
  TargetLocator resolved = target;
  std::optional<std::size_t> ordinal;
  {
    ProseDocument& td = *a.find_document(tdoc);
    if (auto* s = std::get_if<SpanTarget>(&target)) {
      const ProseNode* n = node_at(td, s->path);
      auto seq = resolve_path(td.root, s->path);
      if (!seq) invalid("target path " + format_path(s->path) + " does not resolve");
      if (n && n->is<MarkedSpan>()) {
        // `td` is our own copy, so marking the existing span in place is safe.
        const_cast<ProseNode*>(n)->as<MarkedSpan>()->markups.push_back(Markup::xref_target(id));
      } else {
        MarkupResult r = apply_markup(td, s->path, std::nullopt, Markup::xref_target(id));
        replace_document(a, std::move(r.document));
        if (intra && starts_with(src.path, s->path) && src.path.size() > s->path.size()) {
          src.path.insert(src.path.begin() + static_cast<std::ptrdiff_t>(s->path.size()), 0);
        }
      }
    } else if (auto* l = std::get_if<ListItemTarget>(&target)) {
      const ListBlock* lb = list_at(td, l->list);
      if (!lb) invalid(format_path(l->list) + " is not a list");
      if (l->index >= lb->items.size()) invalid("list item " + std::to_string(l->index) + " out of range");
      ordinal = list_ordinal(td, l->list);
    } else if (auto* t = std::get_if<TableTarget>(&target)) {
      if (!find_table(td, t->number)) invalid("no table " + std::to_string(t->number));
    } else if (auto* an = std::get_if<AnchorTarget>(&target)) {
      if (!find_anchor(td, an->anchor_id)) invalid("no anchor '" + an->anchor_id + "'");
    } else if (auto* in = std::get_if<IndirectTarget>(&target)) {
      const AgreementHeader* h = a.header_for(tdoc);
      if (intra) invalid("slots address other documents");
      if (!h || !h->indirection.incoming.count(in->slot)) invalid("no slot '" + in->slot + "'");
      if (h->indirection.incoming.at(in->slot).stale) throw Error("STALE_SLOT", "slot '" + in->slot + "' is stale");
    }
  }

  // Mark the source.
  NodePath source_span;
  {
    MarkupResult r = apply_markup(*a.find_document(source.doc), src.path, src.range, Markup::xref_source(id));
    source_span = r.span;
    replace_document(a, std::move(r.document));
  }

  // Recompute target positions the source split may have shifted.
  const ProseDocument& td = *a.find_document(tdoc);
  if (std::holds_alternative<SpanTarget>(target)) {
    auto p = find_span(td, DescriptiveKind::xref_target, id);
    if (!p) invalid("target span lost while marking the source");
    resolved = SpanTarget{tdoc, *p};
  } else if (auto* l = std::get_if<ListItemTarget>(&target)) {
    auto all = list_paths(td);
    resolved = ListItemTarget{tdoc, all.at(*ordinal), l->index};
  }

  if (intra) {
    auto tp = target_node_path(td, resolved);
    if (tp && starts_with(*tp, source_span)) {
      throw Error("SELF_REFERENCE", "source " + format_path(source_span) + " contains its own target");
    }
  }

  a.ensure_agreement_header();
  a.ensure_header_for(source.doc);
  CrossReference x{id, Locator{source.doc, source_span, std::nullopt}, resolved,
                   intra ? XrefKind::intra : XrefKind::inter};
  if (!intra) {
    AgreementHeader& th = a.ensure_header_for(tdoc);
    std::string slot_id;
    if (auto* in = std::get_if<IndirectTarget>(&resolved)) {
      slot_id = in->slot;
    } else {
      IncomingSlot slot;
      slot.locator.doc = tdoc;
      struct V {
        const ProseDocument& d;
        IncomingSlot& slot;
        const std::string& xref_id;
        void operator()(const SpanTarget& s) const {
          slot = {Locator{d.id, s.path, std::nullopt}, SlotKind::span, xref_id, false};
        }
        void operator()(const ListItemTarget& l) const {
          NodePath p = l.list;
          p.push_back(l.index);
          slot = {Locator{d.id, p, std::nullopt}, SlotKind::list_item, item_key(list_at(d, l.list)->items[l.index]), false};
        }
        void operator()(const TableTarget& t) const {
          slot = {Locator{d.id, *find_table(d, t.number), std::nullopt}, SlotKind::table, std::to_string(t.number), false};
        }
        void operator()(const AnchorTarget& an) const {
          slot = {Locator{d.id, *find_anchor(d, an.anchor_id), std::nullopt}, SlotKind::anchor, an.anchor_id, false};
        }
        void operator()(const IndirectTarget&) const {}
        void operator()(const DocumentTarget&) const { slot = {Locator{d.id, {}, std::nullopt}, SlotKind::document, "", false}; }
      };
      std::visit(V{td, slot, id}, resolved);
      if (slot.kind == SlotKind::document) {
        slot_id = std::string(kDocumentSlot);
      } else if (slot.kind != SlotKind::span) {
        for (const auto& [sid, existing] : th.indirection.incoming) {
          if (!existing.stale && existing.kind == slot.kind && existing.key == slot.key) slot_id = sid;
        }
      }
      if (slot_id.empty()) slot_id = fresh_slot_id(th.indirection);
      th.indirection.incoming.try_emplace(slot_id, slot);
    }
    x.target = IndirectTarget{tdoc, slot_id};
    a.header_for(source.doc)->indirection.outgoing[id] = OutgoingEntry{tdoc, slot_id};
  } else if (std::holds_alternative<DocumentTarget>(resolved)) {
    invalid("a document cannot target itself");
  }
  a.agreement_header()->xref_table.push_back(std::move(x));
  return {std::move(a), id};
}

// ---------------------------------------------------------------------------
// Navigation
// ---------------------------------------------------------------------------

namespace {

const CrossReference* find_xref(const SmartLegalAgreement& a, const std::string& id) {
  for (const auto& h : a.headers) {
    for (const auto& x : h.xref_table)
      if (x.xref_id == id) return &x;
  }
  return nullptr;
}

const ProseDocument& doc_or_throw(const SmartLegalAgreement& a, const DocumentId& id) {
  const ProseDocument* d = a.find_document(id);
  if (!d) invalid("unknown document " + to_string(id));
  return *d;
}

}  // namespace

Locator navigate(const SmartLegalAgreement& agreement, const std::string& xref_id, Direction direction) {
  const CrossReference* x = find_xref(agreement, xref_id);
  if (!x) throw Error("XREF_NOT_FOUND", "no cross-reference '" + xref_id + "'");

  if (direction == Direction::to_source) {
    const ProseDocument& d = doc_or_throw(agreement, x->source.doc);
    if (span_has(d, x->source.path, DescriptiveKind::xref_source, xref_id)) return x->source;
    auto p = find_span(d, DescriptiveKind::xref_source, xref_id);
    if (!p) invalid("source of '" + xref_id + "' is gone");
    return Locator{d.id, *p, x->source.range};
  }

  const DocumentId& tdoc = target_doc(x->target);
  const ProseDocument& d = doc_or_throw(agreement, tdoc);
  struct V {
    const SmartLegalAgreement& a;
    const ProseDocument& d;
    const std::string& id;
    Locator operator()(const SpanTarget& s) const {
      if (span_has(d, s.path, DescriptiveKind::xref_target, id)) return {d.id, s.path, std::nullopt};
      auto p = find_span(d, DescriptiveKind::xref_target, id);
      if (!p) invalid("target of '" + id + "' is gone");
      return {d.id, *p, std::nullopt};
    }
    Locator operator()(const ListItemTarget& l) const {
      const ListBlock* lb = list_at(d, l.list);
      if (!lb || l.index >= lb->items.size()) invalid("list item target of '" + id + "' is gone");
      NodePath p = l.list;
      p.push_back(l.index);
      return {d.id, p, std::nullopt};
    }
    Locator operator()(const TableTarget& t) const {
      auto p = find_table(d, t.number);
      if (!p) invalid("table " + std::to_string(t.number) + " is gone");
      return {d.id, *p, std::nullopt};
    }
    Locator operator()(const AnchorTarget& an) const {
      auto p = find_anchor(d, an.anchor_id);
      if (!p) invalid("anchor '" + an.anchor_id + "' is gone");
      return {d.id, *p, std::nullopt};
    }
    Locator operator()(const IndirectTarget& in) const {
      const AgreementHeader* h = a.header_for(d.id);
      if (!h) throw Error("STALE_SLOT", "target document has no header");
      auto it = h->indirection.incoming.find(in.slot);
      if (it == h->indirection.incoming.end() || it->second.stale) {
        throw Error("STALE_SLOT", "slot '" + in.slot + "' no longer locates its target");
      }
      return it->second.locator;
    }
    Locator operator()(const DocumentTarget&) const { return {d.id, {}, std::nullopt}; }
  };
  return std::visit(V{agreement, d, xref_id}, x->target);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

bool slot_resolves(const ProseDocument& d, const IncomingSlot& s) {
  switch (s.kind) {
    case SlotKind::span: return span_has(d, s.locator.path, DescriptiveKind::xref_target, s.key);
    case SlotKind::anchor: {
      const ProseNode* n = node_at(d, s.locator.path);
      return n && n->is<Anchor>() && n->as<Anchor>()->anchor_id == s.key;
    }
    case SlotKind::table: {
      const ProseNode* n = node_at(d, s.locator.path);
      return n && n->is<TableBlock>() && std::to_string(n->as<TableBlock>()->number) == s.key;
    }
    case SlotKind::list_item: {
      if (s.locator.path.empty()) return false;
      NodePath list(s.locator.path.begin(), s.locator.path.end() - 1);
      const ListBlock* l = list_at(d, list);
      std::size_t i = s.locator.path.back();
      return l && i < l->items.size() && item_key(l->items[i]) == s.key;
    }
    case SlotKind::document: return s.locator.path.empty();
  }
  return false;
}

struct Interval {
  TextRange range;
  std::string what;
};

}  // namespace

ValidationReport validate_crossrefs(const SmartLegalAgreement& a) {
  ValidationReport report;
  std::set<std::string> ids;
  std::map<DocumentId, std::vector<Interval>> intervals;
  std::set<std::pair<DocumentId, std::string>> referenced_slots;
  std::set<std::string> table_ids;

  for (const auto& h : a.headers) {
    for (const auto& x : h.xref_table) {
      const std::string& id = x.xref_id;
      if (!ids.insert(id).second) report.add("DUPLICATE_XREF_ID", "", id, "cross-reference id reused");
      table_ids.insert(id);
      const DocumentId& tdoc = target_doc(x.target);
      bool same = x.source.doc == tdoc;
      if ((x.kind == XrefKind::intra) != same) {
        report.add("XREF_KIND_MISMATCH", to_string(x.source.doc), id,
                   std::string(x.kind == XrefKind::intra ? "intra" : "inter") + " reference between " +
                       to_string(x.source.doc) + " and " + to_string(tdoc));
      }

      const ProseDocument* sd = a.find_document(x.source.doc);
      if (!sd || !span_has(*sd, x.source.path, DescriptiveKind::xref_source, id)) {
        report.add("DANGLING_SOURCE", to_string(x.source.doc), format_path(x.source.path),
                   "no xref-source(" + id + ") span at the source");
      } else if (auto iv = absolute_interval(*sd, x.source.path, x.source.range)) {
        intervals[sd->id].push_back({*iv, "source of " + id});
      }

      const ProseDocument* td = a.find_document(tdoc);
      if (!td) {
        report.add("DANGLING_TARGET", to_string(tdoc), id, "target document is missing");
        continue;
      }
      if (!same && !std::holds_alternative<IndirectTarget>(x.target)) {
        report.add("INTER_REQUIRES_SLOT", to_string(tdoc), id, "inter-document reference without indirection slot");
      }
      if (auto* s = std::get_if<SpanTarget>(&x.target)) {
        if (!span_has(*td, s->path, DescriptiveKind::xref_target, id)) {
          report.add("DANGLING_TARGET", to_string(tdoc), format_path(s->path), "no xref-target(" + id + ") span");
        } else if (auto iv = absolute_interval(*td, s->path)) {
          intervals[td->id].push_back({*iv, "target of " + id});
        }
      } else if (auto* l = std::get_if<ListItemTarget>(&x.target)) {
        const ListBlock* lb = list_at(*td, l->list);
        if (!lb || l->index >= lb->items.size()) {
          report.add("DANGLING_TARGET", to_string(tdoc), format_path(l->list), "list item " + std::to_string(l->index) + " missing");
        }
      } else if (auto* t = std::get_if<TableTarget>(&x.target)) {
        if (!find_table(*td, t->number)) report.add("DANGLING_TARGET", to_string(tdoc), id, "no table " + std::to_string(t->number));
      } else if (auto* an = std::get_if<AnchorTarget>(&x.target)) {
        if (!find_anchor(*td, an->anchor_id)) report.add("DANGLING_TARGET", to_string(tdoc), id, "no anchor '" + an->anchor_id + "'");
      } else if (auto* in = std::get_if<IndirectTarget>(&x.target)) {
        referenced_slots.insert({tdoc, in->slot});
        const AgreementHeader* th = a.header_for(tdoc);
        auto it = th ? th->indirection.incoming.find(in->slot) : decltype(th->indirection.incoming.end()){};
        if (!th || it == th->indirection.incoming.end()) {
          report.add("DANGLING_SLOT", to_string(tdoc), in->slot, "slot for " + id + " is missing");
        } else if (it->second.stale) {
          report.add("STALE_SLOT", to_string(tdoc), in->slot, "slot for " + id + " lost its target");
        } else if (!slot_resolves(*td, it->second)) {
          report.add("DANGLING_TARGET", to_string(tdoc), format_path(it->second.locator.path),
                     "slot " + in->slot + " does not locate its target");
        } else if (it->second.kind == SlotKind::span) {
          if (auto iv = absolute_interval(*td, it->second.locator.path)) intervals[td->id].push_back({*iv, "target of " + id});
        }
        const AgreementHeader* sh = a.header_for(x.source.doc);
        auto out = sh ? sh->indirection.outgoing.find(id) : decltype(sh->indirection.outgoing.end()){};
        if (!sh || out == sh->indirection.outgoing.end()) {
          report.add("MISSING_OUTGOING", to_string(x.source.doc), id, "source header has no outgoing entry");
        } else if (!(out->second == OutgoingEntry{tdoc, in->slot})) {
          report.add("TABLE_MISMATCH", to_string(x.source.doc), id, "outgoing entry disagrees with the reference table");
        }
      } else {
        report.add("DANGLING_TARGET", to_string(tdoc), id, "document targets must go through a slot");
      }
    }
  }

  for (const auto& h : a.headers) {
    std::string where = h.attached_to ? to_string(*h.attached_to) : "";
    for (const auto& [id, entry] : h.indirection.outgoing) {
      const CrossReference* x = find_xref(a, id);
      if (!x) {
        report.add("ORPHAN_OUTGOING", where, id, "outgoing entry without reference record");
      } else if (!h.attached_to || x->source.doc != *h.attached_to) {
        report.add("TABLE_MISMATCH", where, id, "outgoing entry held by a header other than the source's");
      }
    }
    for (const auto& [slot_id, slot] : h.indirection.incoming) {
      if (!h.attached_to || slot.locator.doc != *h.attached_to) {
        report.add("TABLE_MISMATCH", where, slot_id, "incoming slot locates another document");
        continue;
      }
      if (!slot.stale && !referenced_slots.count({*h.attached_to, slot_id})) {
        report.add("ORPHAN_INCOMING", where, slot_id, "incoming slot not used by any reference");
      }
    }
  }

  for (const auto& d : a.documents) {
    for_each_node(d, [&](const ProseNode& n, const NodePath& p) {
      auto* s = n.as<MarkedSpan>();
      if (!s) return;
      for (const auto& m : s->markups) {
        if ((m.is(DescriptiveKind::xref_source) || m.is(DescriptiveKind::xref_target)) &&
            !table_ids.count(m.descriptive_if()->id)) {
          report.add("ORPHAN_XREF_MARKUP", to_string(d.id), format_path(p),
                     "markup for unknown cross-reference '" + m.descriptive_if()->id + "'");
        }
      }
    });
  }

  for (const auto& [doc, list] : intervals) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        const TextRange& x = list[i].range;
        const TextRange& y = list[j].range;
        bool partial = (x.begin < y.begin && y.begin < x.end && x.end < y.end) ||
                       (y.begin < x.begin && x.begin < y.end && y.end < x.end);
        if (partial) {
          report.add("OVERLAP_FORBIDDEN", to_string(doc), "", list[i].what + " partially overlaps " + list[j].what);
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Edits
// ---------------------------------------------------------------------------

EditResult edit_preserving_sources(const SmartLegalAgreement& agreement, const DocumentId& target_doc_id,
                                   const DocumentEdit& edit) {
  const ProseDocument* old_doc = agreement.find_document(target_doc_id);
  if (!old_doc) invalid("unknown document " + to_string(target_doc_id));
  ProseDocument edited = edit(*old_doc);
  edited.id = target_doc_id;

  EditResult result{agreement, {}};
  SmartLegalAgreement& a = result.agreement;
  *a.find_document(target_doc_id) = edited;
  const std::string where = to_string(target_doc_id);

  if (AgreementHeader* h = a.header_for(target_doc_id)) {
    for (auto& [slot_id, slot] : h->indirection.incoming) {
      if (slot.stale) continue;
      std::optional<NodePath> found;
      switch (slot.kind) {
        case SlotKind::span: found = find_span(edited, DescriptiveKind::xref_target, slot.key); break;
        case SlotKind::anchor: found = find_anchor(edited, slot.key); break;
        case SlotKind::table: {
          unsigned n = 0;
          try {
            n = static_cast<unsigned>(std::stoul(slot.key));
          } catch (const std::exception&) {
          }
          found = find_table(edited, n);
          break;
        }
        case SlotKind::list_item: {
          std::optional<std::pair<NodePath, std::size_t>> hint;
          if (!slot.locator.path.empty()) {
            hint = std::make_pair(NodePath(slot.locator.path.begin(), slot.locator.path.end() - 1), slot.locator.path.back());
          }
          if (auto item = find_list_item(edited, slot.key, hint)) {
            found = item->first;
            found->push_back(item->second);
          }
          break;
        }
        case SlotKind::document: found = NodePath{}; break;
      }
      if (found) {
        slot.locator.path = *found;
      } else {
        slot.stale = true;
        result.diagnostics.add("TARGET_LOST", where, slot_id, "the edit removed the target of slot " + slot_id);
      }
    }
  }

  for (auto& h : a.headers) {
    for (auto& x : h.xref_table) {
      if (x.source.doc == target_doc_id) {
        if (auto p = find_span(edited, DescriptiveKind::xref_source, x.xref_id)) {
          x.source.path = *p;
        } else {
          result.diagnostics.add("SOURCE_LOST", where, x.xref_id, "the edit removed the source of " + x.xref_id);
        }
      }
      if (target_doc(x.target) != target_doc_id) continue;
      if (auto* s = std::get_if<SpanTarget>(&x.target)) {
        if (auto p = find_span(edited, DescriptiveKind::xref_target, x.xref_id)) {
          s->path = *p;
        } else {
          result.diagnostics.add("TARGET_LOST", where, x.xref_id, "the edit removed the target of " + x.xref_id);
        }
      } else if (auto* l = std::get_if<ListItemTarget>(&x.target)) {
        const ListBlock* before = list_at(*old_doc, l->list);
        if (!before || l->index >= before->items.size()) continue;
        auto item = find_list_item(edited, item_key(before->items[l->index]), std::make_pair(l->list, l->index));
        if (item) {
          l->list = item->first;
          l->index = item->second;
        } else {
          result.diagnostics.add("TARGET_LOST", where, x.xref_id, "the edit removed the list item of " + x.xref_id);
        }
      } else if (auto* t = std::get_if<TableTarget>(&x.target)) {
        if (!find_table(edited, t->number)) {
          result.diagnostics.add("TARGET_LOST", where, x.xref_id, "the edit removed table " + std::to_string(t->number));
        }
      } else if (auto* an = std::get_if<AnchorTarget>(&x.target)) {
        if (!find_anchor(edited, an->anchor_id)) {
          result.diagnostics.add("TARGET_LOST", where, x.xref_id, "the edit removed anchor '" + an->anchor_id + "'");
        }
      }
    }
    for (auto& r : h.other_data) {
      if (r.locator.doc != target_doc_id) continue;
      if (auto p = find_span(edited, DescriptiveKind::other_data, r.name)) r.locator.path = *p;
    }
  }
  return result;
}

}  // namespace sla
