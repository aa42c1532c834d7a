#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sla/diagnostics.hpp"
#include "sla/document_id.hpp"

namespace sla {

// ---------------------------------------------------------------------------
// Markup
// ---------------------------------------------------------------------------

enum class PresentationalKind { bold, italic, underline };

enum class DescriptiveKind {
  heading,
  section,
  clause,
  parameter,
  other_data,
  to_be_redacted,
  has_been_redacted,
  xref_source,
  xref_target,
};

using Attributes = std::map<std::string, std::string>;

struct Presentational {
  PresentationalKind kind = PresentationalKind::bold;
  bool operator==(const Presentational&) const = default;
};

// `id` holds the parameter id, other-data name or cross-reference id for the
// kinds that need one and is empty otherwise.
struct Descriptive {
  DescriptiveKind kind = DescriptiveKind::clause;
  std::string id;
  Attributes attributes;
  bool operator==(const Descriptive&) const = default;
};

struct Markup {
  std::variant<Presentational, Descriptive> value;

  static Markup bold() { return {Presentational{PresentationalKind::bold}}; }
  static Markup italic() { return {Presentational{PresentationalKind::italic}}; }
  static Markup underline() { return {Presentational{PresentationalKind::underline}}; }
  static Markup descriptive(DescriptiveKind kind, std::string id = {}, Attributes attrs = {});
  static Markup parameter(std::string id, Attributes attrs = {});
  static Markup other_data(std::string name);
  static Markup clause() { return descriptive(DescriptiveKind::clause); }
  static Markup to_be_redacted() { return descriptive(DescriptiveKind::to_be_redacted); }
  static Markup xref_source(std::string id) { return descriptive(DescriptiveKind::xref_source, std::move(id)); }
  static Markup xref_target(std::string id) { return descriptive(DescriptiveKind::xref_target, std::move(id)); }

  bool is_presentational() const { return std::holds_alternative<Presentational>(value); }
  const Descriptive* descriptive_if() const { return std::get_if<Descriptive>(&value); }
  bool is(DescriptiveKind kind) const;
  bool is(DescriptiveKind kind, const std::string& id) const;

  bool operator==(const Markup&) const = default;
};

std::string_view kind_name(PresentationalKind k);
std::string_view kind_name(DescriptiveKind k);
std::optional<PresentationalKind> presentational_kind_from(std::string_view name);
std::optional<DescriptiveKind> descriptive_kind_from(std::string_view name);
bool kind_requires_id(DescriptiveKind k);

// Kind plus identifier; two markups with the same key on one span are
// duplicates.
std::string markup_key(const Markup& m);

// Canonical total order: presentational kinds by name, then descriptive kinds
// by name and identifier.
bool markup_less(const Markup& a, const Markup& b);

// ---------------------------------------------------------------------------
// Prose tree
// ---------------------------------------------------------------------------

struct ProseNode;
using NodeSequence = std::vector<ProseNode>;

struct Text {
  std::string content;
  bool operator==(const Text&) const = default;
};

struct MarkedSpan {
  std::vector<Markup> markups;
  NodeSequence children;
  bool operator==(const MarkedSpan&) const;
};

struct Anchor {
  std::string anchor_id;
  bool operator==(const Anchor&) const = default;
};

enum class ListStyle { numbered, bulleted, dashed };

struct ListBlock {
  ListStyle style = ListStyle::numbered;
  std::vector<NodeSequence> items;
  bool operator==(const ListBlock&) const;
};

using TableRow = std::vector<NodeSequence>;

struct TableBlock {
  unsigned number = 1;
  std::optional<std::string> caption;
  std::vector<TableRow> rows;
  bool operator==(const TableBlock&) const;
};

struct ChoiceBlock {
  std::string choice_id;
  std::vector<NodeSequence> options;
  bool operator==(const ChoiceBlock&) const;
};

enum class PartKind { recitals, definitions, schedule, annex, body };

struct PartBoundary {
  PartKind part_kind = PartKind::body;
  std::string title;
  bool operator==(const PartBoundary&) const = default;
};

struct ProseNode {
  std::variant<Text, MarkedSpan, Anchor, ListBlock, TableBlock, ChoiceBlock, PartBoundary> value;

  template <typename T>
  const T* as() const { return std::get_if<T>(&value); }
  template <typename T>
  T* as() { return std::get_if<T>(&value); }
  template <typename T>
  bool is() const { return std::holds_alternative<T>(value); }

  bool operator==(const ProseNode&) const = default;
};

ProseNode text(std::string content);
ProseNode span(std::vector<Markup> markups, NodeSequence children);
ProseNode anchor(std::string id);
ProseNode list(ListStyle style, std::vector<NodeSequence> items);
ProseNode table(unsigned number, std::vector<TableRow> rows, std::optional<std::string> caption = {});
ProseNode choice(std::string id, std::vector<NodeSequence> options);
ProseNode part(PartKind kind, std::string title);

std::string_view to_string(ListStyle s);
std::string_view to_string(PartKind k);
std::optional<ListStyle> list_style_from(std::string_view name);
std::optional<PartKind> part_kind_from(std::string_view name);

struct ProseDocument {
  DocumentId id;
  NodeSequence root;
  bool operator==(const ProseDocument&) const = default;
};

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

// A path walks from the root sequence: one index selects a child of a
// sequence; a ListBlock or ChoiceBlock then consumes one index (item/option)
// and a TableBlock two (row, cell) to reach a nested sequence. A path may end
// at a node or at a nested sequence; the empty path names the root sequence.
using NodePath = std::vector<std::size_t>;

std::string format_path(const NodePath& p);

struct TextRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const TextRange&) const = default;
};

struct Resolved {
  const ProseNode* node = nullptr;         // set when the path ends at a node
  const NodeSequence* sequence = nullptr;  // set when it ends at a sequence
};

std::optional<Resolved> resolve_path(const NodeSequence& root, const NodePath& path);
const ProseNode* node_at(const ProseDocument& doc, const NodePath& path);
const MarkedSpan* span_at(const ProseDocument& doc, const NodePath& path);

// Length in Unicode scalar values of all text below a node or sequence.
std::size_t text_length(const ProseNode& n);
std::size_t text_length(const NodeSequence& seq);
std::string plain_text(const ProseNode& n);
std::string plain_text(const NodeSequence& seq);

// Absolute text interval, in document-wide scalar offsets, covered by the node
// or sequence at `path`, optionally narrowed by `range` relative to its start.
std::optional<TextRange> absolute_interval(const ProseDocument& doc, const NodePath& path,
                                           const std::optional<TextRange>& range = {});

// Pre-order visit of every node, including nodes nested in structural blocks.
template <typename F>
void for_each_node(const NodeSequence& seq, F&& fn, NodePath& prefix);

template <typename F>
void for_each_node(const ProseDocument& doc, F&& fn) {
  NodePath prefix;
  for_each_node(doc.root, fn, prefix);
}

template <typename F>
void for_each_node(const NodeSequence& seq, F&& fn, NodePath& prefix) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    prefix.push_back(i);
    const ProseNode& n = seq[i];
    fn(n, static_cast<const NodePath&>(prefix));
    if (auto* s = n.as<MarkedSpan>()) {
      for_each_node(s->children, fn, prefix);
    } else if (auto* l = n.as<ListBlock>()) {
      for (std::size_t k = 0; k < l->items.size(); ++k) {
        prefix.push_back(k);
        for_each_node(l->items[k], fn, prefix);
        prefix.pop_back();
      }
    } else if (auto* t = n.as<TableBlock>()) {
      for (std::size_t r = 0; r < t->rows.size(); ++r) {
        for (std::size_t c = 0; c < t->rows[r].size(); ++c) {
          prefix.push_back(r);
          prefix.push_back(c);
          for_each_node(t->rows[r][c], fn, prefix);
          prefix.pop_back();
          prefix.pop_back();
        }
      }
    } else if (auto* ch = n.as<ChoiceBlock>()) {
      for (std::size_t k = 0; k < ch->options.size(); ++k) {
        prefix.push_back(k);
        for_each_node(ch->options[k], fn, prefix);
        prefix.pop_back();
      }
    }
    prefix.pop_back();
  }
}

// Finds the first span (pre-order) carrying a markup with the given kind and
// identifier.
std::optional<NodePath> find_span(const ProseDocument& doc, DescriptiveKind kind, const std::string& id);
std::optional<NodePath> find_anchor(const ProseDocument& doc, const std::string& anchor_id);
std::optional<NodePath> find_table(const ProseDocument& doc, unsigned number);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

ValidationReport validate_structure(const ProseDocument& doc);

struct MarkupResult {
  ProseDocument document;
  NodePath span;  // path of the span now carrying the markup
};

// Wraps the addressed text in a new MarkedSpan. Without a range the whole node
// (or sequence) at `path` is wrapped; with a range, offsets are scalar values
// relative to the start of that node. Throws OVERLAP_FORBIDDEN when the range
// crosses an existing span boundary and LOCATOR_INVALID when it does not
// resolve.
MarkupResult apply_markup(const ProseDocument& doc, const NodePath& path,
                          const std::optional<TextRange>& range, const Markup& markup);

// Fixed placeholder substituted for redacted content.
inline constexpr std::string_view kRedactionPlaceholder =
    "████████";

struct RedactionReport {
  std::size_t spans_redacted = 0;
  std::size_t bytes_removed = 0;
  std::vector<NodePath> locators;
  bool operator==(const RedactionReport&) const = default;
};

struct RedactionResult {
  ProseDocument document;
  RedactionReport report;
};

RedactionResult redact(const ProseDocument& doc);

// Replaces the ChoiceBlock `choice_id` by the nodes of option `option_index`.
// Throws CHOICE_NOT_FOUND or OPTION_OUT_OF_RANGE.
ProseDocument resolve_choice(const ProseDocument& doc, const std::string& choice_id, std::size_t option_index);

struct Part {
  PartKind kind = PartKind::body;
  std::string title;
  NodeSequence nodes;
  bool operator==(const Part&) const = default;
};

std::vector<Part> split_parts(const ProseDocument& doc);

// Presentational kinds a span renders with: inline ones plus those the style
// sheet maps its descriptive kinds to.
std::vector<PresentationalKind> effective_presentation(const MarkedSpan& s,
                                                       const std::map<std::string, std::string>& style_sheet);

// Number of ChoiceBlock nodes anywhere in the document.
std::size_t count_choices(const ProseDocument& doc);

}  // namespace sla
