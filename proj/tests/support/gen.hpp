#pragma once

// Hand-rolled generators for property and acceptance tests. Everything is
// driven by one seeded engine so failures replay from the printed seed.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sla/agreement.hpp"
#include "sla/crossrefs.hpp"
#include "sla/parameters.hpp"
#include "sla/prose.hpp"

namespace sla::gen {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, n - 1)(eng); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return std::bernoulli_distribution(p)(eng); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    std::shuffle(v.begin(), v.end(), eng);
  }
};

inline std::string word(Rng& r) {
  // A few entries are non-NFC on purpose (decomposed accents).
  static const std::vector<std::string> words = {
      "the",   "party",  "shall", "pay",      "notional", "rate",  "schedule", "termination",
      "date",  "agreed", "per",   "annum",    "caf\xC3\xA9", "cafe\xCC\x81", "na\xC3\xAFve",
      "\xC3\x85ngstr\xC3\xB6m", "A\xCC\x8A", "law",   "England", "Wales",       "net",   "gross",
  };
  return r.pick(words);
}

inline std::string phrase(Rng& r, std::size_t min_words = 1, std::size_t max_words = 4) {
  std::string s;
  std::size_t n = r.between(min_words, max_words);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += word(r);
  }
  return s;
}

struct DocBudget {
  std::size_t nodes = 50;
  unsigned next_table = 1;
  std::size_t next_anchor = 0;
  std::size_t next_choice = 0;
  bool take() {
    if (nodes == 0) return false;
    --nodes;
    return true;
  }
};

inline NodeSequence sequence(Rng& r, DocBudget& b, int depth);

inline std::vector<Markup> span_markups(Rng& r) {
  std::vector<Markup> pool = {Markup::bold(), Markup::italic(), Markup::underline(), Markup::clause(),
                              Markup::descriptive(DescriptiveKind::heading),
                              Markup::descriptive(DescriptiveKind::section)};
  r.shuffle(pool);
  pool.resize(r.between(1, 3));
  return pool;
}

inline ProseNode node(Rng& r, DocBudget& b, int depth) {
  std::size_t roll = r.below(100);
  if (depth < 3 && roll < 22 && b.nodes > 2) return span(span_markups(r), sequence(r, b, depth + 1));
  if (depth < 2 && roll < 30 && b.nodes > 3) {
    std::vector<NodeSequence> items;
    std::size_t n = r.between(1, 3);
    for (std::size_t i = 0; i < n; ++i) items.push_back(NodeSequence{text(phrase(r))});
    return list(static_cast<ListStyle>(r.below(3)), std::move(items));
  }
  if (depth < 2 && roll < 36 && b.nodes > 6) {
    std::size_t rows = r.between(1, 2), cols = r.between(1, 3);
    std::vector<TableRow> t(rows, TableRow(cols));
    for (auto& row : t)
      for (auto& cell : row) cell = NodeSequence{text(phrase(r, 1, 2))};
    std::optional<std::string> caption;
    if (r.chance(0.5)) caption = phrase(r);
    return table(b.next_table++, std::move(t), caption);
  }
  if (depth < 2 && roll < 42 && b.nodes > 4) {
    std::vector<NodeSequence> options;
    std::size_t n = r.between(2, 3);
    for (std::size_t i = 0; i < n; ++i) options.push_back(NodeSequence{text(phrase(r))});
    return choice("c" + std::to_string(b.next_choice++), std::move(options));
  }
  if (roll < 50) return anchor("a" + std::to_string(b.next_anchor++));
  return text(phrase(r));
}

inline NodeSequence sequence(Rng& r, DocBudget& b, int depth) {
  NodeSequence seq;
  std::size_t n = r.between(1, 4);
  for (std::size_t i = 0; i < n && b.take(); ++i) seq.push_back(node(r, b, depth));
  if (seq.empty()) seq.push_back(text(phrase(r)));
  return seq;
}

// A structurally valid document of at most `max_nodes` generated nodes. Adjacent
// text runs and decomposed characters leave it non-canonical on purpose.
inline ProseDocument document(Rng& r, DocumentId id, std::size_t max_nodes = 50) {
  DocBudget b;
  b.nodes = max_nodes;
  ProseDocument d{std::move(id), {}};
  while (b.nodes > 0 && d.root.size() < 12) {
    if (r.chance(0.12) && b.take()) d.root.push_back(part(static_cast<PartKind>(r.below(5)), phrase(r)));
    if (!b.take()) break;
    d.root.push_back(node(r, b, 0));
    if (r.chance(0.15)) break;
  }
  if (d.root.empty()) d.root.push_back(text(phrase(r)));
  return d;
}

// Paths of text nodes outside choice blocks (choices may be resolved away).
inline std::vector<NodePath> text_paths(const ProseDocument& d, std::size_t min_len = 1) {
  std::vector<NodePath> out;
  std::vector<NodePath> choice_paths;
  for_each_node(d, [&](const ProseNode& n, const NodePath& p) {
    if (n.as<ChoiceBlock>()) choice_paths.push_back(p);
    auto* t = n.as<Text>();
    if (!t || text_length(n) < min_len) return;
    for (const auto& c : choice_paths)
      if (p.size() > c.size() && std::equal(c.begin(), c.end(), p.begin())) return;
    out.push_back(p);
  });
  return out;
}

inline std::optional<TextRange> random_range(Rng& r, std::size_t len) {
  if (len < 2 || r.chance(0.4)) return std::nullopt;
  std::size_t b = r.below(len - 1);
  std::size_t e = r.between(b + 1, len);
  return TextRange{b, e};
}

inline ParamValue value_of(Rng& r, BuiltinType t) {
  switch (t) {
    case BuiltinType::integer: return ParamValue::integer(std::to_string(r.below(100000)));
    case BuiltinType::decimal: return ParamValue::decimal(std::to_string(r.below(100)) + "." + std::to_string(r.below(100)));
    case BuiltinType::date: return ParamValue::date("2024-0" + std::to_string(r.between(1, 9)) + "-1" + std::to_string(r.below(10)));
    case BuiltinType::boolean: return ParamValue::boolean(r.chance(0.5));
    default: return ParamValue::text(phrase(r));
  }
}

inline Parameter random_entry(Rng& r, const std::string& name) {
  static const std::vector<BuiltinType> kinds = {BuiltinType::text, BuiltinType::integer, BuiltinType::decimal,
                                                 BuiltinType::date, BuiltinType::boolean};
  BuiltinType t = r.pick(kinds);
  if (r.chance(0.3)) return unbound_parameter(name, TypeRef::builtin(t));
  Attributes attrs;
  if (r.chance(0.3)) attrs["execution"] = "true";
  return bound_parameter(name, TypeRef::builtin(t), value_of(r, t), attrs);
}

inline std::string uuid(Rng& r) {
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (int i = 0; i < 36; ++i) s += (i == 8 || i == 13 || i == 18 || i == 23) ? '-' : hex[r.below(16)];
  return s;
}

struct AgreementLimits {
  std::size_t max_docs = 3;
  std::size_t max_nodes = 50;
  std::size_t max_params = 10;
  std::size_t max_xrefs = 5;
};

// Marks up to `count` parameters in `doc_index` and gives each a dual-policy
// entry in the document's own set.
inline void add_parameters(Rng& r, SmartLegalAgreement& a, std::size_t doc_index, std::size_t count,
                           std::size_t& next_param) {
  for (std::size_t k = 0; k < count; ++k) {
    ProseDocument& d = a.documents[doc_index];
    auto paths = text_paths(d);
    if (paths.empty()) return;
    NodePath p = r.pick(paths);
    std::string name = "p" + std::to_string(next_param++);
    try {
      d = apply_markup(d, p, random_range(r, text_length(*node_at(d, p))), Markup::parameter(name)).document;
    } catch (const Error&) {
      continue;
    }
    a.ensure_parameter_set(d.id).entries.push_back(random_entry(r, name));
  }
}

inline TargetLocator random_target(Rng& r, const SmartLegalAgreement& a, const ProseDocument& target, bool inter) {
  std::vector<std::string> anchors;
  std::vector<unsigned> tables;
  for_each_node(target, [&](const ProseNode& n, const NodePath&) {
    if (auto* x = n.as<Anchor>()) anchors.push_back(x->anchor_id);
    if (auto* t = n.as<TableBlock>()) tables.push_back(t->number);
  });
  std::size_t roll = r.below(4);
  if (roll == 0 && !anchors.empty()) return AnchorTarget{target.id, r.pick(anchors)};
  if (roll == 1 && !tables.empty()) return TableTarget{target.id, r.pick(tables)};
  if (roll == 2) {
    auto paths = text_paths(target, 1);
    if (!paths.empty()) return SpanTarget{target.id, r.pick(paths)};
  }
  if (inter) return DocumentTarget{target.id};
  (void)a;
  if (!anchors.empty()) return AnchorTarget{target.id, anchors.front()};
  return SpanTarget{target.id, text_paths(target).empty() ? NodePath{0} : text_paths(target).front()};
}

inline void add_xrefs(Rng& r, SmartLegalAgreement& a, std::size_t count, bool force_inter = false) {
  for (std::size_t k = 0; k < count; ++k) {
    const ProseDocument& src = a.documents[r.below(a.documents.size())];
    bool inter = a.documents.size() > 1 && (force_inter || r.chance(0.5));
    const ProseDocument* tgt = &src;
    if (inter) {
      while (tgt->id == src.id) tgt = &a.documents[r.below(a.documents.size())];
    }
    auto paths = text_paths(src, 2);
    if (paths.empty()) continue;
    NodePath p = r.pick(paths);
    Locator source{src.id, p, random_range(r, text_length(*node_at(src, p)))};
    TargetLocator target = random_target(r, a, *tgt, inter);
    try {
      a = add_crossref(a, source, target).agreement;
    } catch (const Error&) {
      // overlapping or self-referencing draws are skipped
    }
  }
}

inline SmartLegalAgreement agreement(Rng& r, const AgreementLimits& lim = {}) {
  SmartLegalAgreement a;
  std::size_t docs = r.between(1, lim.max_docs);
  for (std::size_t i = 0; i < docs; ++i) {
    DocumentId id = r.chance(0.3) ? DocumentId::global(uuid(r))
                                  : DocumentId::local("doc-" + std::to_string(i));
    a.documents.push_back(document(r, id, r.between(3, lim.max_nodes)));
  }
  std::size_t params = r.below(lim.max_params + 1);
  std::size_t next_param = 0;
  for (std::size_t i = 0; i < params; ++i) add_parameters(r, a, r.below(a.documents.size()), 1, next_param);
  if (r.chance(0.3) && next_param < lim.max_params) {
    a.ensure_parameter_set(std::nullopt).entries.push_back(random_entry(r, "g" + std::to_string(r.below(9))));
  }
  add_xrefs(r, a, r.below(lim.max_xrefs + 1));

  AgreementHeader& h = a.ensure_agreement_header();
  h.doc_status = static_cast<DocStatus>(r.below(4));
  h.version.timestamp = *parse_timestamp("2024-03-01T10:00:00Z");
  if (r.chance(0.5)) h.dates["signing"] = "2024-03-0" + std::to_string(r.between(1, 9));
  if (r.chance(0.4)) {
    h.signatures.push_back({"Alice", *parse_timestamp("2024-03-02T09:00:00Z"), "aa01"});
    h.signatures.push_back({"Bob", *parse_timestamp("2024-03-02T09:30:00Z"), "bb02"});
  }
  if (r.chance(0.3)) h.code_refs.push_back({"evm", "1.0", std::nullopt});
  if (r.chance(0.3)) h.type_definitions.push_back({"Percentage", TypeRef::builtin(BuiltinType::decimal), NumericRange{"0", "100"}});
  for (const auto& d : a.documents) {
    if (r.chance(0.5)) {
      AgreementHeader& dh = a.ensure_header_for(d.id);
      dh.doc_type = r.chance(0.5) ? "schedule" : "master";
      dh.identifiers.insert(DocumentId::local("file-" + d.id.value));
    }
  }
  return a;
}

// Reorders every collection whose order carries no meaning.
inline SmartLegalAgreement permuted(Rng& r, SmartLegalAgreement a) {
  r.shuffle(a.documents);
  r.shuffle(a.headers);
  r.shuffle(a.parameter_sets);
  for (auto& s : a.parameter_sets) r.shuffle(s.entries);
  for (auto& h : a.headers) {
    r.shuffle(h.signatures);
    r.shuffle(h.xref_table);
    r.shuffle(h.type_definitions);
    r.shuffle(h.other_data);
    r.shuffle(h.code_refs);
  }
  return a;
}

}  // namespace sla::gen
