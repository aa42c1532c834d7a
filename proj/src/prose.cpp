#include "sla/prose.hpp"

#include <algorithm>
#include <set>

#include "unicode.hpp"

namespace sla {

// ---------------------------------------------------------------------------
// Markup
// ---------------------------------------------------------------------------

Markup Markup::descriptive(DescriptiveKind kind, std::string id, Attributes attrs) {
  return {Descriptive{kind, std::move(id), std::move(attrs)}};
}

Markup Markup::parameter(std::string id, Attributes attrs) {
  return descriptive(DescriptiveKind::parameter, std::move(id), std::move(attrs));
}

Markup Markup::other_data(std::string name) { return descriptive(DescriptiveKind::other_data, std::move(name)); }

bool Markup::is(DescriptiveKind kind) const {
  auto* d = descriptive_if();
  return d && d->kind == kind;
}

bool Markup::is(DescriptiveKind kind, const std::string& id) const {
  auto* d = descriptive_if();
  return d && d->kind == kind && d->id == id;
}

std::string_view kind_name(PresentationalKind k) {
  switch (k) {
    case PresentationalKind::bold: return "bold";
    case PresentationalKind::italic: return "italic";
    case PresentationalKind::underline: return "underline";
  }
  return "bold";
}

std::string_view kind_name(DescriptiveKind k) {
  switch (k) {
    case DescriptiveKind::heading: return "heading";
    case DescriptiveKind::section: return "section";
    case DescriptiveKind::clause: return "clause";
    case DescriptiveKind::parameter: return "parameter";
    case DescriptiveKind::other_data: return "other-data";
    case DescriptiveKind::to_be_redacted: return "to-be-redacted";
    case DescriptiveKind::has_been_redacted: return "has-been-redacted";
    case DescriptiveKind::xref_source: return "xref-source";
    case DescriptiveKind::xref_target: return "xref-target";
  }
  return "clause";
}

std::optional<PresentationalKind> presentational_kind_from(std::string_view name) {
  for (auto k : {PresentationalKind::bold, PresentationalKind::italic, PresentationalKind::underline}) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<DescriptiveKind> descriptive_kind_from(std::string_view name) {
  for (auto k : {DescriptiveKind::heading, DescriptiveKind::section, DescriptiveKind::clause,
                 DescriptiveKind::parameter, DescriptiveKind::other_data, DescriptiveKind::to_be_redacted,
                 DescriptiveKind::has_been_redacted, DescriptiveKind::xref_source, DescriptiveKind::xref_target}) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

bool kind_requires_id(DescriptiveKind k) {
  return k == DescriptiveKind::parameter || k == DescriptiveKind::other_data || k == DescriptiveKind::xref_source ||
         k == DescriptiveKind::xref_target;
}

std::string markup_key(const Markup& m) {
  if (auto* p = std::get_if<Presentational>(&m.value)) return std::string(kind_name(p->kind));
  const auto& d = std::get<Descriptive>(m.value);
  std::string key(kind_name(d.kind));
  if (!d.id.empty()) {
    key += '(';
    key += d.id;
    key += ')';
  }
  return key;
}

bool markup_less(const Markup& a, const Markup& b) {
  const bool pa = a.is_presentational();
  const bool pb = b.is_presentational();
  if (pa != pb) return pa;
  if (pa) return kind_name(std::get<Presentational>(a.value).kind) < kind_name(std::get<Presentational>(b.value).kind);
  const auto& da = std::get<Descriptive>(a.value);
  const auto& db = std::get<Descriptive>(b.value);
  auto ka = kind_name(da.kind);
  auto kb = kind_name(db.kind);
  if (ka != kb) return ka < kb;
  if (da.id != db.id) return da.id < db.id;
  return da.attributes < db.attributes;
}

// ---------------------------------------------------------------------------
// Nodes
// ---------------------------------------------------------------------------

bool MarkedSpan::operator==(const MarkedSpan&) const = default;
bool ListBlock::operator==(const ListBlock&) const = default;
bool TableBlock::operator==(const TableBlock&) const = default;
bool ChoiceBlock::operator==(const ChoiceBlock&) const = default;

ProseNode text(std::string content) { return {Text{std::move(content)}}; }
ProseNode span(std::vector<Markup> markups, NodeSequence children) {
  return {MarkedSpan{std::move(markups), std::move(children)}};
}
ProseNode anchor(std::string id) { return {Anchor{std::move(id)}}; }
ProseNode list(ListStyle style, std::vector<NodeSequence> items) { return {ListBlock{style, std::move(items)}}; }
ProseNode table(unsigned number, std::vector<TableRow> rows, std::optional<std::string> caption) {
  return {TableBlock{number, std::move(caption), std::move(rows)}};
}
ProseNode choice(std::string id, std::vector<NodeSequence> options) {
  return {ChoiceBlock{std::move(id), std::move(options)}};
}
ProseNode part(PartKind kind, std::string title) { return {PartBoundary{kind, std::move(title)}}; }

std::string_view to_string(ListStyle s) {
  switch (s) {
    case ListStyle::numbered: return "numbered";
    case ListStyle::bulleted: return "bulleted";
    case ListStyle::dashed: return "dashed";
  }
  return "numbered";
}

std::string_view to_string(PartKind k) {
  switch (k) {
    case PartKind::recitals: return "recitals";
    case PartKind::definitions: return "definitions";
    case PartKind::schedule: return "schedule";
    case PartKind::annex: return "annex";
    case PartKind::body: return "body";
  }
  return "body";
}

std::optional<ListStyle> list_style_from(std::string_view name) {
  for (auto s : {ListStyle::numbered, ListStyle::bulleted, ListStyle::dashed}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<PartKind> part_kind_from(std::string_view name) {
  for (auto k : {PartKind::recitals, PartKind::definitions, PartKind::schedule, PartKind::annex, PartKind::body}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

std::string format_path(const NodePath& p) {
  if (p.empty()) return "/";
  std::string out;
  for (auto i : p) {
    out += '/';
    out += std::to_string(i);
  }
  return out;
}

std::size_t text_length(const NodeSequence& seq) {
  std::size_t n = 0;
  for (const auto& c : seq) n += text_length(c);
  return n;
}

std::size_t text_length(const ProseNode& n) {
  if (auto* t = n.as<Text>()) return detail::scalar_count(t->content);
  if (auto* s = n.as<MarkedSpan>()) return text_length(s->children);
  if (auto* l = n.as<ListBlock>()) {
    std::size_t total = 0;
    for (const auto& item : l->items) total += text_length(item);
    return total;
  }
  if (auto* t = n.as<TableBlock>()) {
    std::size_t total = 0;
    for (const auto& row : t->rows)
      for (const auto& cell : row) total += text_length(cell);
    return total;
  }
  if (auto* c = n.as<ChoiceBlock>()) {
    std::size_t total = 0;
    for (const auto& opt : c->options) total += text_length(opt);
    return total;
  }
  return 0;
}

std::string plain_text(const NodeSequence& seq) {
  std::string out;
  for (const auto& c : seq) out += plain_text(c);
  return out;
}

std::string plain_text(const ProseNode& n) {
  if (auto* t = n.as<Text>()) return t->content;
  if (auto* s = n.as<MarkedSpan>()) return plain_text(s->children);
  std::string out;
  if (auto* l = n.as<ListBlock>()) {
    for (const auto& item : l->items) out += plain_text(item);
  } else if (auto* t = n.as<TableBlock>()) {
    for (const auto& row : t->rows)
      for (const auto& cell : row) out += plain_text(cell);
  } else if (auto* c = n.as<ChoiceBlock>()) {
    for (const auto& opt : c->options) out += plain_text(opt);
  }
  return out;
}

namespace {

// Walks `path`; works on const and mutable trees. Reports the scalar offset at
// which the addressed node or sequence starts.
template <typename Seq, typename Node>
struct WalkResult {
  Node* node = nullptr;
  Seq* sequence = nullptr;
  std::size_t offset = 0;
};

template <typename Seq>
auto walk(Seq& root, const NodePath& path) {
  using Node = std::conditional_t<std::is_const_v<Seq>, const ProseNode, ProseNode>;
  std::optional<WalkResult<Seq, Node>> none;
  WalkResult<Seq, Node> r;
  Seq* seq = &root;
  std::size_t offset = 0;
  std::size_t i = 0;
  while (true) {
    if (i == path.size()) {
      r.sequence = seq;
      r.offset = offset;
      return std::optional(r);
    }
    std::size_t idx = path[i++];
    if (idx >= seq->size()) return none;
    for (std::size_t k = 0; k < idx; ++k) offset += text_length((*seq)[k]);
    Node* node = &(*seq)[idx];
    if (i == path.size()) {
      r.node = node;
      r.offset = offset;
      return std::optional(r);
    }
    if (auto* s = node->template as<MarkedSpan>()) {
      seq = &s->children;
    } else if (auto* l = node->template as<ListBlock>()) {
      std::size_t k = path[i++];
      if (k >= l->items.size()) return none;
      for (std::size_t q = 0; q < k; ++q) offset += text_length(l->items[q]);
      seq = &l->items[k];
    } else if (auto* c = node->template as<ChoiceBlock>()) {
      std::size_t k = path[i++];
      if (k >= c->options.size()) return none;
      for (std::size_t q = 0; q < k; ++q) offset += text_length(c->options[q]);
      seq = &c->options[k];
    } else if (auto* t = node->template as<TableBlock>()) {
      if (i + 1 >= path.size()) return none;
      std::size_t row = path[i++];
      std::size_t col = path[i++];
      if (row >= t->rows.size() || col >= t->rows[row].size()) return none;
      for (std::size_t rr = 0; rr < row; ++rr)
        for (const auto& cell : t->rows[rr]) offset += text_length(cell);
      for (std::size_t cc = 0; cc < col; ++cc) offset += text_length(t->rows[row][cc]);
      seq = &t->rows[row][col];
    } else {
      return none;
    }
  }
}

}  // namespace

std::optional<Resolved> resolve_path(const NodeSequence& root, const NodePath& path) {
  auto w = walk(root, path);
  if (!w) return std::nullopt;
  return Resolved{w->node, w->sequence};
}

const ProseNode* node_at(const ProseDocument& doc, const NodePath& path) {
  auto w = walk(doc.root, path);
  return w ? w->node : nullptr;
}

const MarkedSpan* span_at(const ProseDocument& doc, const NodePath& path) {
  auto* n = node_at(doc, path);
  return n ? n->as<MarkedSpan>() : nullptr;
}

std::optional<TextRange> absolute_interval(const ProseDocument& doc, const NodePath& path,
                                           const std::optional<TextRange>& range) {
  auto w = walk(doc.root, path);
  if (!w) return std::nullopt;
  std::size_t len = w->node ? text_length(*w->node) : text_length(*w->sequence);
  if (range) {
    if (range->begin > range->end || range->end > len) return std::nullopt;
    return TextRange{w->offset + range->begin, w->offset + range->end};
  }
  return TextRange{w->offset, w->offset + len};
}

std::optional<NodePath> find_span(const ProseDocument& doc, DescriptiveKind kind, const std::string& id) {
  std::optional<NodePath> found;
  for_each_node(doc, [&](const ProseNode& n, const NodePath& p) {
    if (found) return;
    if (auto* s = n.as<MarkedSpan>()) {
      for (const auto& m : s->markups) {
        if (m.is(kind, id)) {
          found = p;
          return;
        }
      }
    }
  });
  return found;
}

std::optional<NodePath> find_anchor(const ProseDocument& doc, const std::string& anchor_id) {
  std::optional<NodePath> found;
  for_each_node(doc, [&](const ProseNode& n, const NodePath& p) {
    if (found) return;
    if (auto* a = n.as<Anchor>(); a && a->anchor_id == anchor_id) found = p;
  });
  return found;
}

std::optional<NodePath> find_table(const ProseDocument& doc, unsigned number) {
  std::optional<NodePath> found;
  for_each_node(doc, [&](const ProseNode& n, const NodePath& p) {
    if (found) return;
    if (auto* t = n.as<TableBlock>(); t && t->number == number) found = p;
  });
  return found;
}

// ---------------------------------------------------------------------------
// validate_structure
// ---------------------------------------------------------------------------

ValidationReport validate_structure(const ProseDocument& doc) {
  ValidationReport report;
  const std::string doc_name = to_string(doc.id);
  if (!is_valid_document_id(doc.id) || doc.id == agreement_level_owner()) {
    report.add("INVALID_DOCUMENT_ID", doc_name, "", "document id is empty, reserved or malformed");
  }
  std::set<std::string> anchors;
  std::set<unsigned> tables;
  std::set<std::string> choices;
  for_each_node(doc, [&](const ProseNode& n, const NodePath& p) {
    const std::string where = format_path(p);
    if (auto* t = n.as<Text>()) {
      if (!detail::is_valid_utf8(t->content)) report.add("INVALID_UTF8", doc_name, where, "text is not valid UTF-8");
    } else if (auto* s = n.as<MarkedSpan>()) {
      if (s->markups.empty()) report.add("EMPTY_MARKUP", doc_name, where, "marked span has no markup");
      std::set<std::string> keys;
      for (const auto& m : s->markups) {
        if (!keys.insert(markup_key(m)).second) {
          report.add("DUPLICATE_MARKUP_KIND", doc_name, where, "markup " + markup_key(m) + " repeated on one span");
        }
        if (auto* d = m.descriptive_if(); d && kind_requires_id(d->kind) && d->id.empty()) {
          report.add("MISSING_IDENTIFIER", doc_name, where,
                     std::string(kind_name(d->kind)) + " markup needs an identifier");
        }
      }
    } else if (auto* a = n.as<Anchor>()) {
      if (a->anchor_id.empty()) {
        report.add("MISSING_IDENTIFIER", doc_name, where, "anchor needs an identifier");
      } else if (!anchors.insert(a->anchor_id).second) {
        report.add("DUPLICATE_ANCHOR", doc_name, where, "anchor " + a->anchor_id + " defined twice");
      }
    } else if (auto* tb = n.as<TableBlock>()) {
      if (tb->number == 0) {
        report.add("INVALID_TABLE_NUMBER", doc_name, where, "table numbers are positive");
      } else if (!tables.insert(tb->number).second) {
        report.add("DUPLICATE_TABLE_NUMBER", doc_name, where, "table " + std::to_string(tb->number) + " defined twice");
      }
      for (std::size_t r = 1; r < tb->rows.size(); ++r) {
        if (tb->rows[r].size() != tb->rows[0].size()) {
          report.add("RAGGED_TABLE", doc_name, where,
                     "row " + std::to_string(r) + " has " + std::to_string(tb->rows[r].size()) + " cells, row 0 has " +
                         std::to_string(tb->rows[0].size()));
          break;
        }
      }
    } else if (auto* c = n.as<ChoiceBlock>()) {
      if (c->choice_id.empty()) {
        report.add("MISSING_IDENTIFIER", doc_name, where, "choice needs an identifier");
      } else if (!choices.insert(c->choice_id).second) {
        report.add("DUPLICATE_CHOICE_ID", doc_name, where, "choice " + c->choice_id + " defined twice");
      }
      if (c->options.size() < 2) {
        report.add("DEGENERATE_CHOICE", doc_name, where,
                   "choice " + c->choice_id + " offers " + std::to_string(c->options.size()) + " option(s)");
      }
    } else if (n.is<PartBoundary>()) {
      if (p.size() != 1) report.add("MISPLACED_PART_BOUNDARY", doc_name, where, "part boundaries belong at top level");
    }
  });
  return report;
}

// ---------------------------------------------------------------------------
// apply_markup
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void invalid_locator(const std::string& why) { throw Error("LOCATOR_INVALID", why); }

bool is_structural(const ProseNode& n) { return n.is<ListBlock>() || n.is<TableBlock>() || n.is<ChoiceBlock>(); }

// Wraps [a, b) of `seq` in a span; returns the index of the new span within
// the innermost sequence touched and appends the descent to `path`.
void wrap_range(NodeSequence& seq, std::size_t a, std::size_t b, const Markup& markup, NodePath& path) {
  const std::size_t total = text_length(seq);
  if (a >= b || b > total) invalid_locator("range [" + std::to_string(a) + "," + std::to_string(b) + ") out of bounds");

  std::vector<std::size_t> start(seq.size()), len(seq.size());
  std::size_t off = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    start[i] = off;
    len[i] = text_length(seq[i]);
    off += len[i];
  }
  std::size_t first = seq.size(), last = seq.size();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (len[i] == 0) continue;
    if (first == seq.size() && start[i] + len[i] > a) first = i;
    if (start[i] < b) last = i;
  }

  if (first == last) {
    ProseNode& c = seq[first];
    const std::size_t s = start[first];
    const std::size_t e = s + len[first];
    if (auto* t = c.as<Text>()) {
      const std::string& content = t->content;
      std::string before = detail::substr_scalars(content, 0, a - s);
      std::string middle = detail::substr_scalars(content, a - s, b - s);
      std::string after = detail::substr_scalars(content, b - s, len[first]);
      NodeSequence replacement;
      if (!before.empty()) replacement.push_back(text(std::move(before)));
      std::size_t span_index = first + replacement.size();
      replacement.push_back(span({markup}, {text(std::move(middle))}));
      if (!after.empty()) replacement.push_back(text(std::move(after)));
      seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(first));
      seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(first), replacement.begin(), replacement.end());
      path.push_back(span_index);
      return;
    }
    if (a == s && b == e) {
      ProseNode wrapped = span({markup}, {std::move(c)});
      c = std::move(wrapped);
      path.push_back(first);
      return;
    }
    if (auto* sp = c.as<MarkedSpan>()) {
      path.push_back(first);
      wrap_range(sp->children, a - s, b - s, markup, path);
      return;
    }
    invalid_locator("range falls inside a structural block; address the item, cell or option directly");
  }

  if (a > start[first] && !seq[first].is<Text>()) {
    throw Error("OVERLAP_FORBIDDEN", "range starts inside an existing span or block");
  }
  if (b < start[last] + len[last] && !seq[last].is<Text>()) {
    throw Error("OVERLAP_FORBIDDEN", "range ends inside an existing span or block");
  }

  NodeSequence before, middle, after;
  for (std::size_t i = 0; i < first; ++i) before.push_back(std::move(seq[i]));
  for (std::size_t i = first; i <= last; ++i) {
    ProseNode& c = seq[i];
    const std::size_t s = start[i];
    const std::size_t e = s + len[i];
    if (auto* t = c.as<Text>(); t && (a > s || b < e)) {
      std::size_t lo = a > s ? a - s : 0;
      std::size_t hi = b < e ? b - s : len[i];
      if (lo > 0) before.push_back(text(detail::substr_scalars(t->content, 0, lo)));
      middle.push_back(text(detail::substr_scalars(t->content, lo, hi)));
      if (hi < len[i]) after.push_back(text(detail::substr_scalars(t->content, hi, len[i])));
    } else {
      middle.push_back(std::move(c));
    }
  }
  for (std::size_t i = last + 1; i < seq.size(); ++i) after.push_back(std::move(seq[i]));

  NodeSequence out = std::move(before);
  path.push_back(out.size());
  out.push_back(span({markup}, std::move(middle)));
  out.insert(out.end(), std::make_move_iterator(after.begin()), std::make_move_iterator(after.end()));
  seq = std::move(out);
}

}  // namespace

MarkupResult apply_markup(const ProseDocument& doc, const NodePath& path, const std::optional<TextRange>& range,
                          const Markup& markup) {
  MarkupResult result{doc, {}};
  auto w = walk(result.document.root, path);
  if (!w) invalid_locator("path " + format_path(path) + " does not resolve");

  if (w->sequence) {
    NodeSequence& seq = *w->sequence;
    result.span = path;
    if (!range) {
      if (seq.empty()) invalid_locator("cannot mark up an empty sequence");
      NodeSequence children = std::move(seq);
      seq = {span({markup}, std::move(children))};
      result.span.push_back(0);
    } else {
      wrap_range(seq, range->begin, range->end, markup, result.span);
    }
    return result;
  }

  ProseNode& node = *w->node;
  const std::size_t len = text_length(node);
  if (!range || (range->begin == 0 && range->end == len && !node.is<Text>())) {
    ProseNode wrapped = span({markup}, {std::move(node)});
    node = std::move(wrapped);
    result.span = path;
    return result;
  }
  if (range->begin >= range->end || range->end > len) invalid_locator("range out of bounds");

  // Re-express the range against the parent sequence and wrap there.
  NodePath parent(path.begin(), path.end() - 1);
  auto pw = walk(result.document.root, parent);
  NodeSequence* parent_seq = nullptr;
  std::size_t node_start = 0;
  if (pw && pw->sequence) {
    parent_seq = pw->sequence;
    for (std::size_t k = 0; k < path.back(); ++k) node_start += text_length((*parent_seq)[k]);
  } else if (pw && pw->node) {
    if (auto* sp = pw->node->as<MarkedSpan>()) {
      parent_seq = &sp->children;
      for (std::size_t k = 0; k < path.back(); ++k) node_start += text_length((*parent_seq)[k]);
    }
  }
  if (!parent_seq) invalid_locator("path " + format_path(path) + " has no enclosing sequence");
  if (is_structural(node)) invalid_locator("range falls inside a structural block; address the item, cell or option directly");
  result.span = parent;
  wrap_range(*parent_seq, node_start + range->begin, node_start + range->end, markup, result.span);
  return result;
}

// ---------------------------------------------------------------------------
// redact
// ---------------------------------------------------------------------------

namespace {

void redact_sequence(NodeSequence& seq, NodePath& prefix, RedactionReport& report);

void redact_node(ProseNode& n, NodePath& prefix, RedactionReport& report) {
  if (auto* s = n.as<MarkedSpan>()) {
    bool marked = std::any_of(s->markups.begin(), s->markups.end(),
                              [](const Markup& m) { return m.is(DescriptiveKind::to_be_redacted); });
    if (marked) {
      report.spans_redacted += 1;
      report.bytes_removed += plain_text(s->children).size();
      report.locators.push_back(prefix);
      std::vector<Markup> kept;
      bool has_done = false;
      for (const auto& m : s->markups) {
        if (m.is(DescriptiveKind::to_be_redacted)) continue;
        Markup copy = m;
        if (auto* d = std::get_if<Descriptive>(&copy.value)) {
          d->attributes.clear();
          if (d->kind == DescriptiveKind::has_been_redacted) has_done = true;
        }
        kept.push_back(std::move(copy));
      }
      if (!has_done) kept.push_back(Markup::descriptive(DescriptiveKind::has_been_redacted));
      s->markups = std::move(kept);
      s->children = {text(std::string(kRedactionPlaceholder))};
      return;
    }
    redact_sequence(s->children, prefix, report);
  } else if (auto* l = n.as<ListBlock>()) {
    for (std::size_t k = 0; k < l->items.size(); ++k) {
      prefix.push_back(k);
      redact_sequence(l->items[k], prefix, report);
      prefix.pop_back();
    }
  } else if (auto* t = n.as<TableBlock>()) {
    for (std::size_t r = 0; r < t->rows.size(); ++r) {
      for (std::size_t c = 0; c < t->rows[r].size(); ++c) {
        prefix.push_back(r);
        prefix.push_back(c);
        redact_sequence(t->rows[r][c], prefix, report);
        prefix.pop_back();
        prefix.pop_back();
      }
    }
  } else if (auto* c = n.as<ChoiceBlock>()) {
    for (std::size_t k = 0; k < c->options.size(); ++k) {
      prefix.push_back(k);
      redact_sequence(c->options[k], prefix, report);
      prefix.pop_back();
    }
  }
}

void redact_sequence(NodeSequence& seq, NodePath& prefix, RedactionReport& report) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    prefix.push_back(i);
    redact_node(seq[i], prefix, report);
    prefix.pop_back();
  }
}

bool replace_choice(NodeSequence& seq, const std::string& id, std::size_t index);

bool replace_choice_in(ProseNode& n, const std::string& id, std::size_t index) {
  if (auto* s = n.as<MarkedSpan>()) return replace_choice(s->children, id, index);
  if (auto* l = n.as<ListBlock>()) {
    for (auto& item : l->items)
      if (replace_choice(item, id, index)) return true;
  } else if (auto* t = n.as<TableBlock>()) {
    for (auto& row : t->rows)
      for (auto& cell : row)
        if (replace_choice(cell, id, index)) return true;
  } else if (auto* c = n.as<ChoiceBlock>()) {
    for (auto& opt : c->options)
      if (replace_choice(opt, id, index)) return true;
  }
  return false;
}

bool replace_choice(NodeSequence& seq, const std::string& id, std::size_t index) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (auto* c = seq[i].as<ChoiceBlock>(); c && c->choice_id == id) {
      if (index >= c->options.size()) {
        throw Error("OPTION_OUT_OF_RANGE", "choice " + id + " has " + std::to_string(c->options.size()) +
                                               " options; index " + std::to_string(index) + " requested");
      }
      NodeSequence chosen = std::move(c->options[index]);
      seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i));
      seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(i), std::make_move_iterator(chosen.begin()),
                 std::make_move_iterator(chosen.end()));
      return true;
    }
    if (replace_choice_in(seq[i], id, index)) return true;
  }
  return false;
}

}  // namespace

RedactionResult redact(const ProseDocument& doc) {
  RedactionResult result{doc, {}};
  NodePath prefix;
  redact_sequence(result.document.root, prefix, result.report);
  return result;
}

ProseDocument resolve_choice(const ProseDocument& doc, const std::string& choice_id, std::size_t option_index) {
  ProseDocument out = doc;
  if (!replace_choice(out.root, choice_id, option_index)) {
    throw Error("CHOICE_NOT_FOUND", "no choice named " + choice_id);
  }
  return out;
}

std::vector<Part> split_parts(const ProseDocument& doc) {
  std::vector<Part> parts;
  Part current{PartKind::body, "", {}};
  bool explicit_part = false;
  for (const auto& n : doc.root) {
    if (auto* b = n.as<PartBoundary>()) {
      if (explicit_part || !current.nodes.empty()) parts.push_back(std::move(current));
      current = Part{b->part_kind, b->title, {}};
      explicit_part = true;
    } else {
      current.nodes.push_back(n);
    }
  }
  if (explicit_part || !current.nodes.empty()) parts.push_back(std::move(current));
  if (parts.empty()) parts.push_back(Part{PartKind::body, "", {}});
  return parts;
}

std::vector<PresentationalKind> effective_presentation(const MarkedSpan& s,
                                                       const std::map<std::string, std::string>& style_sheet) {
  std::set<PresentationalKind> kinds;
  for (const auto& m : s.markups) {
    if (auto* p = std::get_if<Presentational>(&m.value)) {
      kinds.insert(p->kind);
    } else if (auto it = style_sheet.find(std::string(kind_name(std::get<Descriptive>(m.value).kind)));
               it != style_sheet.end()) {
      if (auto k = presentational_kind_from(it->second)) kinds.insert(*k);
    }
  }
  return {kinds.begin(), kinds.end()};
}

std::size_t count_choices(const ProseDocument& doc) {
  std::size_t n = 0;
  for_each_node(doc, [&](const ProseNode& node, const NodePath&) {
    if (node.is<ChoiceBlock>()) ++n;
  });
  return n;
}

}  // namespace sla
