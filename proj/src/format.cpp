#include "sla/format.hpp"

#include <openssl/evp.h>

#include <algorithm>

#include "codec.hpp"
#include "remap.hpp"
#include "unicode.hpp"

namespace sla {

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------

namespace {

NodePath child_path(const NodePath& prefix, std::size_t i) {
  NodePath p = prefix;
  p.push_back(i);
  return p;
}

bool starts_with(const NodePath& p, const NodePath& prefix) {
  return p.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), p.begin());
}

Attributes nfc_attributes(const Attributes& a) {
  Attributes out;
  for (const auto& [k, v] : a) out[detail::to_nfc(k)] = detail::to_nfc(v);
  return out;
}

Markup canonical_markup(const Markup& m) {
  if (auto* d = m.descriptive_if()) {
    Descriptive c = *d;
    c.id = detail::to_nfc(c.id);
    c.attributes = nfc_attributes(c.attributes);
    return {c};
  }
  return m;
}

void sort_markups(std::vector<Markup>& ms) {
  std::stable_sort(ms.begin(), ms.end(), markup_less);
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
}

// Union of two markup lists, or nullopt when the same kind and identifier
// appear with different attributes.
std::optional<std::vector<Markup>> merge_markups(const std::vector<Markup>& a, const std::vector<Markup>& b) {
  std::vector<Markup> out = a;
  for (const auto& m : b) {
    bool clash = false;
    bool dup = false;
    for (const auto& x : a) {
      if (markup_key(x) != markup_key(m)) continue;
      if (x == m) {
        dup = true;
      } else {
        clash = true;
      }
    }
    if (clash) return std::nullopt;
    if (!dup) out.push_back(m);
  }
  sort_markups(out);
  return out;
}

// Rewrites new positions under `from` to sit under `to` instead.
void lift(detail::PathMap& map, const NodePath& from, const NodePath& to) {
  for (auto& [old, moved] : map) {
    if (!starts_with(moved.path, from)) continue;
    NodePath p = to;
    p.insert(p.end(), moved.path.begin() + static_cast<std::ptrdiff_t>(from.size()), moved.path.end());
    moved.path = std::move(p);
  }
}

NodeSequence canon_seq(const NodeSequence& seq, const NodePath& old_prefix, const NodePath& new_prefix,
                       detail::PathMap& map);

ProseNode canon_node(const ProseNode& n, const NodePath& old_path, const NodePath& new_path, detail::PathMap& map) {
  if (auto* s = n.as<MarkedSpan>()) {
    MarkedSpan out;
    for (const auto& m : s->markups) out.markups.push_back(canonical_markup(m));
    sort_markups(out.markups);
    detail::PathMap local;
    out.children = canon_seq(s->children, old_path, new_path, local);
    while (out.children.size() == 1 && out.children[0].is<MarkedSpan>() && !out.markups.empty()) {
      MarkedSpan& inner = *out.children[0].as<MarkedSpan>();
      if (inner.markups.empty()) break;
      auto merged = merge_markups(out.markups, inner.markups);
      if (!merged) break;
      NodeSequence grandchildren = std::move(inner.children);
      out.markups = std::move(*merged);
      out.children = std::move(grandchildren);
      lift(local, child_path(new_path, 0), new_path);
    }
    map.merge(local);
    return ProseNode{std::move(out)};
  }
  ProseNode copy = n;
  if (auto* l = copy.as<ListBlock>()) {
    for (std::size_t k = 0; k < l->items.size(); ++k) {
      l->items[k] = canon_seq(n.as<ListBlock>()->items[k], child_path(old_path, k), child_path(new_path, k), map);
    }
  } else if (auto* t = copy.as<TableBlock>()) {
    if (t->caption) {
      t->caption = detail::to_nfc(*t->caption);
      if (t->caption->empty()) t->caption.reset();
    }
    const auto& rows = n.as<TableBlock>()->rows;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        t->rows[r][c] = canon_seq(rows[r][c], child_path(child_path(old_path, r), c),
                                  child_path(child_path(new_path, r), c), map);
      }
    }
  } else if (auto* ch = copy.as<ChoiceBlock>()) {
    for (std::size_t k = 0; k < ch->options.size(); ++k) {
      ch->options[k] = canon_seq(n.as<ChoiceBlock>()->options[k], child_path(old_path, k), child_path(new_path, k), map);
    }
  } else if (auto* p = copy.as<PartBoundary>()) {
    p->title = detail::to_nfc(p->title);
  } else if (auto* a = copy.as<Anchor>()) {
    a->anchor_id = detail::to_nfc(a->anchor_id);
  }
  return copy;
}

NodeSequence canon_seq(const NodeSequence& seq, const NodePath& old_prefix, const NodePath& new_prefix,
                       detail::PathMap& map) {
  NodeSequence out;
  // Old paths of the texts merged into out.back(), with their raw pieces.
  std::vector<std::pair<NodePath, std::string>> run;
  auto close_run = [&]() {
    if (run.empty()) return;
    std::string merged;
    for (const auto& [old, piece] : run) merged += piece;
    std::string nfc = detail::to_nfc(merged);
    NodePath at = child_path(new_prefix, out.size() - 1);
    if (run.size() == 1) {
      map[run[0].first] = detail::Moved{at, std::nullopt, false};
    } else {
      std::size_t offset = 0;
      for (const auto& [old, piece] : run) {
        std::size_t len = detail::scalar_count(detail::to_nfc(piece));
        map[old] = detail::Moved{at, TextRange{offset, offset + len}, false};
        offset += len;
      }
    }
    out.back().as<Text>()->content = std::move(nfc);
    run.clear();
  };
  for (std::size_t i = 0; i < seq.size(); ++i) {
    NodePath old_path = child_path(old_prefix, i);
    if (auto* t = seq[i].as<Text>()) {
      if (t->content.empty()) {
        map[old_path] = detail::Moved{{}, std::nullopt, true};
        continue;
      }
      if (run.empty()) out.push_back(text(""));
      run.emplace_back(old_path, t->content);
      continue;
    }
    close_run();
    NodePath new_path = child_path(new_prefix, out.size());
    map[old_path] = detail::Moved{new_path, std::nullopt, false};
    out.push_back(canon_node(seq[i], old_path, new_path, map));
  }
  close_run();
  return out;
}

ParamValue canonical_value(const ParamValue& v) {
  switch (v.kind()) {
    case ParamValue::Kind::text: return ParamValue::text(detail::to_nfc(v.literal()));
    case ParamValue::Kind::list: {
      std::vector<ParamValue> items;
      for (const auto& i : v.items()) items.push_back(canonical_value(i));
      return ParamValue::list(std::move(items));
    }
    default: return v;
  }
}

bool locator_less(const Locator& a, const Locator& b) {
  if (a.doc != b.doc) return a.doc < b.doc;
  if (a.path != b.path) return a.path < b.path;
  auto key = [](const Locator& l) {
    return l.range ? std::make_pair(l.range->begin + 1, l.range->end) : std::make_pair(std::size_t{0}, std::size_t{0});
  };
  return key(a) < key(b);
}

void canonicalize_header(AgreementHeader& h) {
  for (auto& s : h.signatures) s.signer = detail::to_nfc(s.signer);
  std::sort(h.signatures.begin(), h.signatures.end());
  std::sort(h.xref_table.begin(), h.xref_table.end(),
            [](const CrossReference& a, const CrossReference& b) { return a.xref_id < b.xref_id; });
  std::stable_sort(h.type_definitions.begin(), h.type_definitions.end(),
                   [](const TypeDef& a, const TypeDef& b) { return a.id < b.id; });
  if (h.style_sheet && h.style_sheet->empty()) h.style_sheet.reset();
  for (auto& r : h.other_data) {
    r.name = detail::to_nfc(r.name);
    r.value = detail::to_nfc(r.value);
  }
  std::stable_sort(h.other_data.begin(), h.other_data.end(), [](const OtherDataRecord& a, const OtherDataRecord& b) {
    if (a.name != b.name) return a.name < b.name;
    if (!(a.locator == b.locator)) return locator_less(a.locator, b.locator);
    if (a.value != b.value) return a.value < b.value;
    return a.sensitive < b.sensitive;
  });
  std::sort(h.code_refs.begin(), h.code_refs.end(), [](const CodeRef& a, const CodeRef& b) {
    return std::tie(a.platform, a.code_version, a.instance_id) < std::tie(b.platform, b.code_version, b.instance_id);
  });
  for (auto& e : h.edit_history) {
    e.actor = detail::to_nfc(e.actor);
    e.detail = detail::to_nfc(e.detail);
  }
  std::map<std::string, std::string> dates;
  for (const auto& [k, v] : h.dates) dates[detail::to_nfc(k)] = v;
  h.dates = std::move(dates);
}

}  // namespace

NodeSequence canonicalize_nodes(const NodeSequence& nodes) {
  detail::PathMap map;
  return canon_seq(nodes, {}, {}, map);
}

ProseDocument canonicalize(const ProseDocument& d) { return {d.id, canonicalize_nodes(d.root)}; }

SmartLegalAgreement canonicalize(const SmartLegalAgreement& agreement) {
  SmartLegalAgreement a = agreement;
  for (auto& d : a.documents) {
    detail::PathMap map;
    d.root = canon_seq(d.root, {}, {}, map);
    detail::remap_agreement(a, d.id, map);
  }
  std::stable_sort(a.documents.begin(), a.documents.end(),
                   [](const ProseDocument& x, const ProseDocument& y) { return x.id < y.id; });
  for (auto& s : a.parameter_sets) {
    for (auto& p : s.entries) {
      if (p.value) p.value = canonical_value(*p.value);
      p.attributes = nfc_attributes(p.attributes);
    }
    std::stable_sort(s.entries.begin(), s.entries.end(),
                     [](const Parameter& x, const Parameter& y) { return x.name < y.name; });
  }
  std::stable_sort(a.parameter_sets.begin(), a.parameter_sets.end(),
                   [](const ParameterSet& x, const ParameterSet& y) { return x.owner < y.owner; });
  for (auto& h : a.headers) canonicalize_header(h);
  std::stable_sort(a.headers.begin(), a.headers.end(),
                   [](const AgreementHeader& x, const AgreementHeader& y) { return x.attached_to < y.attached_to; });
  return a;
}

SmartContract canonicalize(const SmartContract& contract) {
  SmartContract c;
  std::vector<std::pair<std::string, SmartLegalAgreement>> keyed;
  for (const auto& a : contract.agreements) {
    SmartLegalAgreement canon = canonicalize(a);
    keyed.emplace_back(detail::dump(detail::encode(canon)), std::move(canon));
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [bytes, a] : keyed) c.agreements.push_back(std::move(a));
  c.code_refs = contract.code_refs;
  std::sort(c.code_refs.begin(), c.code_refs.end(), [](const CodeRef& a, const CodeRef& b) {
    return std::tie(a.platform, a.code_version, a.instance_id) < std::tie(b.platform, b.code_version, b.instance_id);
  });
  return c;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

void require_structure(const std::vector<const ProseDocument*>& docs) {
  ValidationReport report;
  for (const auto* d : docs) report.append(validate_structure(*d));
  if (report.has_errors()) throw ModelError(std::move(report));
}

std::vector<const ProseDocument*> documents_of(const SmartLegalAgreement& a) {
  std::vector<const ProseDocument*> out;
  for (const auto& d : a.documents) out.push_back(&d);
  return out;
}

}  // namespace

std::string serialize(const SmartContract& c) {
  std::vector<const ProseDocument*> docs;
  for (const auto& a : c.agreements)
    for (const auto& d : a.documents) docs.push_back(&d);
  require_structure(docs);
  return detail::dump(detail::encode(canonicalize(c)));
}

std::string serialize(const SmartLegalAgreement& a) {
  require_structure(documents_of(a));
  return detail::dump(detail::encode(canonicalize(a)));
}

std::string serialize(const ProseDocument& d) {
  require_structure({&d});
  return detail::dump(detail::encode(canonicalize(d)));
}

ModelValue parse(std::string_view bytes) {
  detail::json j = detail::parse_json(bytes);
  if (!j.is_object()) throw ParseError("SCHEMA_VIOLATION", 0, "/: expected an object");
  if (j.contains("format")) return detail::decode_contract(j);
  if (j.contains("root") || j.contains("id")) return detail::decode_document(j);
  return detail::decode_agreement(j);
}

SmartContract parse_contract(std::string_view bytes) { return detail::decode_contract(detail::parse_json(bytes)); }

SmartLegalAgreement parse_agreement(std::string_view bytes) {
  detail::json j = detail::parse_json(bytes);
  if (j.is_object() && j.contains("format")) {
    SmartContract c = detail::decode_contract(j);
    if (c.agreements.size() != 1) {
      throw ParseError("SCHEMA_VIOLATION", 0, "/agreements: expected exactly one agreement");
    }
    return c.agreements.front();
  }
  return detail::decode_agreement(j);
}

ProseDocument parse_document(std::string_view bytes) { return detail::decode_document(detail::parse_json(bytes)); }

// ---------------------------------------------------------------------------
// Hashing
// ---------------------------------------------------------------------------

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("DIGEST_FAILURE", "sha-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

namespace {

DigestValue digest_of(const std::string& bytes) { return DigestValue{std::string(kSha256), sha256_hex(bytes)}; }

// Drops what the digest does not cover.
SmartLegalAgreement hashed_view(const SmartLegalAgreement& a) {
  SmartLegalAgreement v = a;
  for (auto& h : v.headers) {
    if (h.is_agreement_level()) h.agreement_hash.reset();
    h.edit_history.clear();
    h.version.branch = Branch::local;
    std::erase_if(h.other_data, [](const OtherDataRecord& r) { return r.sensitive; });
  }
  return v;
}

}  // namespace

DigestValue hash_agreement(const SmartLegalAgreement& a) { return digest_of(serialize(hashed_view(a))); }

DigestValue hash_contract(const SmartContract& c) {
  SmartContract v = c;
  for (auto& a : v.agreements) a = hashed_view(a);
  return digest_of(serialize(v));
}

DigestValue hash_document(const ProseDocument& d) { return digest_of(serialize(d)); }

DigestValue hash_value(const ModelValue& v) {
  struct V {
    DigestValue operator()(const SmartContract& c) const { return hash_contract(c); }
    DigestValue operator()(const SmartLegalAgreement& a) const { return hash_agreement(a); }
    DigestValue operator()(const ProseDocument& d) const { return hash_document(d); }
  };
  return std::visit(V{}, v);
}

DigestValue hash_clause(const ProseDocument& doc, const NodePath& path) {
  const ProseNode* n = node_at(doc, path);
  if (!n) throw Error("LOCATOR_INVALID", "path " + format_path(path) + " does not resolve to a node");
  const auto* s = n->as<MarkedSpan>();
  bool clause = s && std::any_of(s->markups.begin(), s->markups.end(),
                                 [](const Markup& m) { return m.is(DescriptiveKind::clause); });
  if (!clause) throw Error("NOT_A_CLAUSE", format_path(path) + " is not a clause span");
  NodeSequence canon = canonicalize_nodes({*n});
  return digest_of(detail::dump(detail::encode(canon.front())));
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

VerifyResult verify(std::string_view bytes, std::string_view expected) {
  DigestValue d;
  auto colon = expected.find(':');
  if (colon == std::string_view::npos) {
    d.hex = std::string(expected);
  } else {
    d.algorithm = std::string(expected.substr(0, colon));
    d.hex = std::string(expected.substr(colon + 1));
  }
  return verify(bytes, d);
}

VerifyResult verify(std::string_view bytes, const DigestValue& expected) {
  VerifyResult r;
  if (expected.algorithm != kSha256) {
    r.report.add("UNSUPPORTED_ALGORITHM", "", "", "unsupported digest algorithm '" + expected.algorithm + "'");
    return r;
  }
  if (!expected.well_formed()) {
    r.report.add("BAD_DIGEST_FORMAT", "", "", "expected 64 lowercase hex digits, got '" + expected.hex + "'");
    return r;
  }
  ModelValue value;
  try {
    value = parse(bytes);
  } catch (const ParseError& e) {
    r.report.add(e.code(), "", "", "at byte " + std::to_string(e.offset()) + ": " + e.what());
    return r;
  }
  DigestValue actual;
  try {
    actual = hash_value(value);
  } catch (const ModelError& e) {
    r.report = e.report();
    return r;
  }
  if (!(actual == expected)) {
    r.report.add("DIGEST_MISMATCH", "", "", "content digest is " + actual.to_string());
  }
  auto check_stored = [&](const SmartLegalAgreement& a) {
    const AgreementHeader* h = a.agreement_header();
    if (h && h->agreement_hash && !(*h->agreement_hash == hash_agreement(a))) {
      r.report.add("STORED_HASH_MISMATCH", "", "", "stored agreement hash does not match the content");
    }
  };
  if (auto* a = std::get_if<SmartLegalAgreement>(&value)) check_stored(*a);
  if (auto* c = std::get_if<SmartContract>(&value)) {
    for (const auto& a : c->agreements) check_stored(a);
  }
  r.ok = r.report.empty();
  return r;
}

SmartLegalAgreement seal(const SmartLegalAgreement& agreement) {
  SmartLegalAgreement a = agreement;
  a.ensure_agreement_header();
  DigestValue d = hash_agreement(a);
  a.agreement_header()->agreement_hash = d;
  return a;
}

std::string digest_file_line(const DigestValue& d, std::string_view filename) {
  return d.hex + "  " + std::string(filename) + "\n";
}

}  // namespace sla
