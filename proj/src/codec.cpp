#include "codec.hpp"

#include <algorithm>

#include "sla/format.hpp"

namespace sla::detail {

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

json encode(const DocumentId& id) { return {{"scope", to_string(id.scope)}, {"value", id.value}}; }

json encode(const Markup& m) {
  if (auto* p = std::get_if<Presentational>(&m.value)) return {{"kind", kind_name(p->kind)}};
  const auto& d = std::get<Descriptive>(m.value);
  json j = {{"kind", kind_name(d.kind)}};
  if (!d.id.empty()) j["id"] = d.id;
  if (!d.attributes.empty()) j["attributes"] = d.attributes;
  return j;
}

json encode_nodes(const NodeSequence& seq) {
  json arr = json::array();
  for (const auto& n : seq) arr.push_back(encode(n));
  return arr;
}

json encode(const ProseNode& n) {
  struct V {
    json operator()(const Text& t) const { return {{"type", "text"}, {"text", t.content}}; }
    json operator()(const MarkedSpan& s) const {
      json ms = json::array();
      for (const auto& m : s.markups) ms.push_back(encode(m));
      return {{"type", "span"}, {"markups", ms}, {"children", encode_nodes(s.children)}};
    }
    json operator()(const Anchor& a) const { return {{"type", "anchor"}, {"id", a.anchor_id}}; }
    json operator()(const ListBlock& l) const {
      json items = json::array();
      for (const auto& item : l.items) items.push_back(encode_nodes(item));
      return {{"type", "list"}, {"style", to_string(l.style)}, {"items", items}};
    }
    json operator()(const TableBlock& t) const {
      json rows = json::array();
      for (const auto& row : t.rows) {
        json cells = json::array();
        for (const auto& cell : row) cells.push_back(encode_nodes(cell));
        rows.push_back(cells);
      }
      json j = {{"type", "table"}, {"number", t.number}, {"rows", rows}};
      if (t.caption) j["caption"] = *t.caption;
      return j;
    }
    json operator()(const ChoiceBlock& c) const {
      json opts = json::array();
      for (const auto& o : c.options) opts.push_back(encode_nodes(o));
      return {{"type", "choice"}, {"id", c.choice_id}, {"options", opts}};
    }
    json operator()(const PartBoundary& p) const {
      return {{"type", "part"}, {"kind", to_string(p.part_kind)}, {"title", p.title}};
    }
  };
  return std::visit(V{}, n.value);
}

json encode(const ProseDocument& d) { return {{"id", encode(d.id)}, {"root", encode_nodes(d.root)}}; }

json encode(const TypeRef& t) {
  switch (t.form()) {
    case TypeRef::Form::builtin: return std::string(to_string(t.builtin_kind()));
    case TypeRef::Form::named: return {{"named", t.name()}};
    case TypeRef::Form::list_of: return {{"list_of", encode(t.element())}};
  }
  return nullptr;
}

json encode(const ParamValue& v) {
  switch (v.kind()) {
    case ParamValue::Kind::boolean: return {{"boolean", v.as_bool()}};
    case ParamValue::Kind::list: {
      json items = json::array();
      for (const auto& i : v.items()) items.push_back(encode(i));
      return {{"list", items}};
    }
    default: return {{std::string(to_string(v.kind())), v.literal()}};
  }
}

json encode(const TypeDef& d) {
  json j = {{"id", d.id}, {"base", encode(d.base)}};
  if (auto* p = std::get_if<std::string>(&d.constraint)) j["pattern"] = *p;
  if (auto* r = std::get_if<NumericRange>(&d.constraint)) {
    json range = json::object();
    if (r->min) range["min"] = *r->min;
    if (r->max) range["max"] = *r->max;
    j["range"] = range;
  }
  return j;
}

json encode(const Parameter& p) {
  json j = {{"name", p.name}, {"type", encode(p.type)}};
  if (std::holds_alternative<Bound>(p.status)) {
    j["status"] = "bound";
  } else if (std::holds_alternative<Unbound>(p.status)) {
    j["status"] = "unbound";
  } else {
    const auto& loc = std::get<BindingLocation>(p.status);
    j["status"] = "binding-location";
    j["target"] = {{"doc", encode(loc.doc)}, {"name", loc.name}};
  }
  if (p.value) j["value"] = encode(*p.value);
  if (!p.attributes.empty()) j["attributes"] = p.attributes;
  return j;
}

json encode(const ParameterSet& s) {
  json entries = json::array();
  for (const auto& p : s.entries) entries.push_back(encode(p));
  json j = {{"entries", entries}};
  if (s.owner) j["owner"] = encode(*s.owner);
  return j;
}

json encode(const Locator& l) {
  json j = {{"doc", encode(l.doc)}, {"path", l.path}};
  if (l.range) j["range"] = {l.range->begin, l.range->end};
  return j;
}

json encode(const TargetLocator& t) {
  struct V {
    json operator()(const SpanTarget& s) const { return {{"type", "span"}, {"doc", encode(s.doc)}, {"path", s.path}}; }
    json operator()(const ListItemTarget& l) const {
      return {{"type", "list-item"}, {"doc", encode(l.doc)}, {"list", l.list}, {"index", l.index}};
    }
    json operator()(const TableTarget& t) const { return {{"type", "table"}, {"doc", encode(t.doc)}, {"number", t.number}}; }
    json operator()(const AnchorTarget& a) const {
      return {{"type", "anchor"}, {"doc", encode(a.doc)}, {"anchor", a.anchor_id}};
    }
    json operator()(const IndirectTarget& i) const { return {{"type", "indirect"}, {"doc", encode(i.doc)}, {"slot", i.slot}}; }
    json operator()(const DocumentTarget& d) const { return {{"type", "document"}, {"doc", encode(d.doc)}}; }
  };
  return std::visit(V{}, t);
}

json encode(const CodeRef& c) {
  json j = {{"platform", c.platform}, {"code_version", c.code_version}};
  if (c.instance_id) j["instance_id"] = *c.instance_id;
  return j;
}

namespace {

json encode_ids(const DocumentIdSet& ids) {
  json arr = json::array();
  for (const auto& id : ids) arr.push_back(encode(id));
  return arr;
}

template <typename T>
json encode_all(const std::vector<T>& items) {
  json arr = json::array();
  for (const auto& i : items) arr.push_back(encode(i));
  return arr;
}

}  // namespace

json encode(const AgreementHeader& h) {
  json j = json::object();
  if (h.attached_to) j["attached_to"] = encode(*h.attached_to);
  if (!h.identifiers.empty()) j["identifiers"] = encode_ids(h.identifiers);
  if (!h.dates.empty()) j["dates"] = h.dates;
  if (!h.signatures.empty()) {
    json sigs = json::array();
    for (const auto& s : h.signatures) {
      sigs.push_back({{"signer", s.signer}, {"timestamp", format_timestamp(s.timestamp)}, {"signature", s.signature_hex}});
    }
    j["signatures"] = sigs;
  }
  if (h.agreement_hash) j["agreement_hash"] = {{"algorithm", h.agreement_hash->algorithm}, {"hex", h.agreement_hash->hex}};
  if (!h.xref_table.empty()) {
    json xs = json::array();
    for (const auto& x : h.xref_table) {
      xs.push_back({{"id", x.xref_id},
                    {"kind", x.kind == XrefKind::intra ? "intra" : "inter"},
                    {"source", encode(x.source)},
                    {"target", encode(x.target)}});
    }
    j["xrefs"] = xs;
  }
  if (!h.type_definitions.empty()) j["type_definitions"] = encode_all(h.type_definitions);
  if (h.style_sheet) j["style_sheet"] = *h.style_sheet;
  if (h.doc_type) j["doc_type"] = *h.doc_type;
  j["doc_status"] = to_string(h.doc_status);
  if (!h.parent_ids.empty()) j["parent_ids"] = encode_ids(h.parent_ids);
  if (!h.child_ids.empty()) j["child_ids"] = encode_ids(h.child_ids);
  j["version"] = {{"number", h.version.number},
                  {"timestamp", format_timestamp(h.version.timestamp)},
                  {"branch", to_string(h.version.branch)}};
  if (!h.edit_history.empty()) {
    json hist = json::array();
    for (const auto& e : h.edit_history) {
      hist.push_back({{"timestamp", format_timestamp(e.timestamp)},
                      {"actor", e.actor},
                      {"change", to_string(e.change)},
                      {"detail", e.detail},
                      {"version", e.resulting_version}});
    }
    j["edit_history"] = hist;
  }
  if (!h.other_data.empty()) {
    json od = json::array();
    for (const auto& r : h.other_data) {
      json rec = {{"name", r.name}, {"value", r.value}, {"locator", encode(r.locator)}};
      if (r.sensitive) rec["sensitive"] = true;
      od.push_back(rec);
    }
    j["other_data"] = od;
  }
  if (!h.indirection.empty()) {
    json ind = json::object();
    if (!h.indirection.incoming.empty()) {
      json in = json::object();
      for (const auto& [id, s] : h.indirection.incoming) {
        json slot = {{"locator", encode(s.locator)}, {"kind", to_string(s.kind)}, {"key", s.key}};
        if (s.stale) slot["stale"] = true;
        in[id] = slot;
      }
      ind["incoming"] = in;
    }
    if (!h.indirection.outgoing.empty()) {
      json out = json::object();
      for (const auto& [id, e] : h.indirection.outgoing) out[id] = {{"doc", encode(e.doc)}, {"slot", e.slot}};
      ind["outgoing"] = out;
    }
    j["indirection"] = ind;
  }
  if (!h.code_refs.empty()) j["code_refs"] = encode_all(h.code_refs);
  return j;
}

json encode(const SmartLegalAgreement& a) {
  return {{"documents", encode_all(a.documents)},
          {"parameter_sets", encode_all(a.parameter_sets)},
          {"headers", encode_all(a.headers)}};
}

json encode(const SmartContract& c) {
  return {{"format", std::string(kFormatTag)}, {"agreements", encode_all(c.agreements)}, {"code_refs", encode_all(c.code_refs)}};
}

json encode(const ExecutionParameter& p) {
  return {{"name", p.name}, {"type", encode(p.type)}, {"value", encode(p.value)}};
}

std::string dump(const json& j) {
  try {
    return j.dump();
  } catch (const json::type_error& e) {
    ValidationReport r;
    r.add("INVALID_UTF8", "", "", e.what());
    throw ModelError(std::move(r));
  }
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw ParseError("SCHEMA_VIOLATION", 0, (where.empty() ? std::string("/") : where) + ": " + what);
}

class Obj {
 public:
  Obj(const json& j, std::string where, std::initializer_list<std::string_view> required,
      std::initializer_list<std::string_view> optional = {})
      : j_(j), where_(std::move(where)) {
    if (!j.is_object()) schema(where_, "expected an object");
    for (auto k : required) {
      if (!j.contains(std::string(k))) schema(where_, "missing key '" + std::string(k) + "'");
    }
    for (const auto& [k, v] : j.items()) {
      bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                   std::find(optional.begin(), optional.end(), k) != optional.end();
      if (!known) schema(where_, "unexpected key '" + k + "'");
    }
  }

  bool has(const std::string& k) const { return j_.contains(k); }
  const json& operator[](const std::string& k) const { return j_.at(k); }
  std::string at(const std::string& k) const { return where_ + "/" + k; }

 private:
  const json& j_;
  std::string where_;
};

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) schema(where, "expected a string");
  return j.get<std::string>();
}

std::size_t uint(const json& j, const std::string& where) {
  if (!j.is_number_unsigned()) schema(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

bool boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) schema(where, "expected a boolean");
  return j.get<bool>();
}

const json& arr(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array");
  return j;
}

std::string idx(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

std::map<std::string, std::string> string_map(const json& j, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) out[k] = str(v, where + "/" + k);
  return out;
}

template <typename E, typename F>
E enum_value(const json& j, const std::string& where, F from, const char* what) {
  auto v = from(str(j, where));
  if (!v) schema(where, std::string("unknown ") + what + " '" + j.get<std::string>() + "'");
  return *v;
}

Timestamp timestamp(const json& j, const std::string& where) {
  auto t = parse_timestamp(str(j, where));
  if (!t) schema(where, "expected a YYYY-MM-DDTHH:MM:SSZ timestamp");
  return *t;
}

DocumentId doc_id(const json& j, const std::string& where) {
  Obj o(j, where, {"scope", "value"});
  std::string scope = str(o["scope"], o.at("scope"));
  if (scope != "local" && scope != "global") schema(o.at("scope"), "unknown scope '" + scope + "'");
  return {scope == "local" ? IdScope::local : IdScope::global, str(o["value"], o.at("value"))};
}

DocumentIdSet doc_ids(const json& j, const std::string& where) {
  DocumentIdSet out;
  const json& a = arr(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.insert(doc_id(a[i], idx(where, i)));
  return out;
}

NodePath node_path(const json& j, const std::string& where) {
  NodePath p;
  const json& a = arr(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) p.push_back(uint(a[i], idx(where, i)));
  return p;
}

Markup markup(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind")) schema(where, "markup needs a kind");
  std::string kind = str(j.at("kind"), where + "/kind");
  if (auto p = presentational_kind_from(kind)) {
    Obj o(j, where, {"kind"});
    return {Presentational{*p}};
  }
  auto d = descriptive_kind_from(kind);
  if (!d) throw ParseError("UNKNOWN_MARKUP_KIND", 0, where + ": unknown markup kind '" + kind + "'");
  Obj o(j, where, {"kind"}, {"id", "attributes"});
  Descriptive desc{*d, o.has("id") ? str(o["id"], o.at("id")) : std::string{}, {}};
  if (o.has("attributes")) desc.attributes = string_map(o["attributes"], o.at("attributes"));
  return {desc};
}

NodeSequence nodes(const json& j, const std::string& where);

ProseNode node(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type")) schema(where, "node needs a type");
  std::string type = str(j.at("type"), where + "/type");
  if (type == "text") {
    Obj o(j, where, {"type", "text"});
    return text(str(o["text"], o.at("text")));
  }
  if (type == "span") {
    Obj o(j, where, {"type", "markups", "children"});
    const json& ms = arr(o["markups"], o.at("markups"));
    if (ms.empty()) schema(o.at("markups"), "a span needs at least one markup");
    std::vector<Markup> markups;
    for (std::size_t i = 0; i < ms.size(); ++i) markups.push_back(markup(ms[i], idx(o.at("markups"), i)));
    return span(std::move(markups), nodes(o["children"], o.at("children")));
  }
  if (type == "anchor") {
    Obj o(j, where, {"type", "id"});
    return anchor(str(o["id"], o.at("id")));
  }
  if (type == "list") {
    Obj o(j, where, {"type", "style", "items"});
    auto style = enum_value<ListStyle>(o["style"], o.at("style"), list_style_from, "list style");
    std::vector<NodeSequence> items;
    const json& a = arr(o["items"], o.at("items"));
    for (std::size_t i = 0; i < a.size(); ++i) items.push_back(nodes(a[i], idx(o.at("items"), i)));
    return list(style, std::move(items));
  }
  if (type == "table") {
    Obj o(j, where, {"type", "number", "rows"}, {"caption"});
    std::size_t number = uint(o["number"], o.at("number"));
    if (number > 0xffffffffu) schema(o.at("number"), "table number out of range");
    std::vector<TableRow> rows;
    const json& a = arr(o["rows"], o.at("rows"));
    for (std::size_t r = 0; r < a.size(); ++r) {
      std::string rw = idx(o.at("rows"), r);
      const json& cells = arr(a[r], rw);
      TableRow row;
      for (std::size_t c = 0; c < cells.size(); ++c) row.push_back(nodes(cells[c], idx(rw, c)));
      if (!rows.empty() && row.size() != rows.front().size()) {
        throw ParseError("RAGGED_TABLE", 0, rw + ": row has " + std::to_string(row.size()) + " cells, row 0 has " +
                                                std::to_string(rows.front().size()));
      }
      rows.push_back(std::move(row));
    }
    std::optional<std::string> caption;
    if (o.has("caption")) caption = str(o["caption"], o.at("caption"));
    return table(static_cast<unsigned>(number), std::move(rows), std::move(caption));
  }
  if (type == "choice") {
    Obj o(j, where, {"type", "id", "options"});
    std::vector<NodeSequence> options;
    const json& a = arr(o["options"], o.at("options"));
    for (std::size_t i = 0; i < a.size(); ++i) options.push_back(nodes(a[i], idx(o.at("options"), i)));
    return choice(str(o["id"], o.at("id")), std::move(options));
  }
  if (type == "part") {
    Obj o(j, where, {"type", "kind", "title"});
    auto kind = enum_value<PartKind>(o["kind"], o.at("kind"), part_kind_from, "part kind");
    return part(kind, str(o["title"], o.at("title")));
  }
  schema(where, "unknown node type '" + type + "'");
}

NodeSequence nodes(const json& j, const std::string& where) {
  NodeSequence out;
  const json& a = arr(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(node(a[i], idx(where, i)));
  return out;
}

TypeRef type_ref(const json& j, const std::string& where) {
  if (j.is_string()) {
    auto b = builtin_type_from(j.get<std::string>());
    if (!b) schema(where, "unknown builtin type '" + j.get<std::string>() + "'");
    return TypeRef::builtin(*b);
  }
  if (j.is_object() && j.contains("named")) {
    Obj o(j, where, {"named"});
    std::string name = str(o["named"], o.at("named"));
    if (name.empty()) schema(o.at("named"), "empty type name");
    return TypeRef::named(name);
  }
  Obj o(j, where, {"list_of"});
  return TypeRef::list_of(type_ref(o["list_of"], o.at("list_of")));
}

ParamValue param_value(const json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) schema(where, "a value is an object with exactly one key");
  const auto& [k, v] = *j.items().begin();
  std::string w = where + "/" + k;
  if (k == "text") return ParamValue::text(str(v, w));
  if (k == "integer") return ParamValue::integer(str(v, w));
  if (k == "decimal") return ParamValue::decimal(str(v, w));
  if (k == "date") return ParamValue::date(str(v, w));
  if (k == "boolean") return ParamValue::boolean(boolean(v, w));
  if (k == "list") {
    std::vector<ParamValue> items;
    const json& a = arr(v, w);
    for (std::size_t i = 0; i < a.size(); ++i) items.push_back(param_value(a[i], idx(w, i)));
    return ParamValue::list(std::move(items));
  }
  schema(where, "unknown value kind '" + k + "'");
}

TypeDef type_def(const json& j, const std::string& where) {
  Obj o(j, where, {"id", "base"}, {"pattern", "range"});
  TypeDef d{str(o["id"], o.at("id")), type_ref(o["base"], o.at("base")), {}};
  if (o.has("pattern") && o.has("range")) schema(where, "a type has at most one constraint");
  if (o.has("pattern")) d.constraint = str(o["pattern"], o.at("pattern"));
  if (o.has("range")) {
    Obj r(o["range"], o.at("range"), {}, {"min", "max"});
    NumericRange range;
    if (r.has("min")) range.min = str(r["min"], r.at("min"));
    if (r.has("max")) range.max = str(r["max"], r.at("max"));
    d.constraint = range;
  }
  return d;
}

Parameter parameter(const json& j, const std::string& where) {
  Obj o(j, where, {"name", "type", "status"}, {"target", "value", "attributes"});
  Parameter p;
  p.name = str(o["name"], o.at("name"));
  p.type = type_ref(o["type"], o.at("type"));
  std::string status = str(o["status"], o.at("status"));
  if (status == "bound") {
    p.status = Bound{};
  } else if (status == "unbound") {
    p.status = Unbound{};
  } else if (status == "binding-location") {
    if (!o.has("target")) schema(where, "binding-location needs a target");
    Obj t(o["target"], o.at("target"), {"doc", "name"});
    p.status = BindingLocation{doc_id(t["doc"], t.at("doc")), str(t["name"], t.at("name"))};
  } else {
    schema(o.at("status"), "unknown status '" + status + "'");
  }
  if (o.has("target") && status != "binding-location") schema(o.at("target"), "target only applies to binding-location");
  if (o.has("value")) p.value = param_value(o["value"], o.at("value"));
  if (o.has("attributes")) p.attributes = string_map(o["attributes"], o.at("attributes"));
  return p;
}

ParameterSet parameter_set(const json& j, const std::string& where) {
  Obj o(j, where, {"entries"}, {"owner"});
  ParameterSet s;
  if (o.has("owner")) s.owner = doc_id(o["owner"], o.at("owner"));
  const json& a = arr(o["entries"], o.at("entries"));
  for (std::size_t i = 0; i < a.size(); ++i) s.entries.push_back(parameter(a[i], idx(o.at("entries"), i)));
  return s;
}

Locator locator(const json& j, const std::string& where) {
  Obj o(j, where, {"doc", "path"}, {"range"});
  Locator l{doc_id(o["doc"], o.at("doc")), node_path(o["path"], o.at("path")), std::nullopt};
  if (o.has("range")) {
    const json& r = arr(o["range"], o.at("range"));
    if (r.size() != 2) schema(o.at("range"), "a range has two offsets");
    l.range = TextRange{uint(r[0], idx(o.at("range"), 0)), uint(r[1], idx(o.at("range"), 1))};
    if (l.range->begin > l.range->end) schema(o.at("range"), "range begins after it ends");
  }
  return l;
}

TargetLocator target(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type")) schema(where, "target needs a type");
  std::string type = str(j.at("type"), where + "/type");
  if (type == "span") {
    Obj o(j, where, {"type", "doc", "path"});
    return SpanTarget{doc_id(o["doc"], o.at("doc")), node_path(o["path"], o.at("path"))};
  }
  if (type == "list-item") {
    Obj o(j, where, {"type", "doc", "list", "index"});
    return ListItemTarget{doc_id(o["doc"], o.at("doc")), node_path(o["list"], o.at("list")), uint(o["index"], o.at("index"))};
  }
  if (type == "table") {
    Obj o(j, where, {"type", "doc", "number"});
    return TableTarget{doc_id(o["doc"], o.at("doc")), static_cast<unsigned>(uint(o["number"], o.at("number")))};
  }
  if (type == "anchor") {
    Obj o(j, where, {"type", "doc", "anchor"});
    return AnchorTarget{doc_id(o["doc"], o.at("doc")), str(o["anchor"], o.at("anchor"))};
  }
  if (type == "indirect") {
    Obj o(j, where, {"type", "doc", "slot"});
    return IndirectTarget{doc_id(o["doc"], o.at("doc")), str(o["slot"], o.at("slot"))};
  }
  if (type == "document") {
    Obj o(j, where, {"type", "doc"});
    return DocumentTarget{doc_id(o["doc"], o.at("doc"))};
  }
  schema(where, "unknown target type '" + type + "'");
}

CodeRef code_ref(const json& j, const std::string& where) {
  Obj o(j, where, {"platform", "code_version"}, {"instance_id"});
  CodeRef c{str(o["platform"], o.at("platform")), str(o["code_version"], o.at("code_version")), std::nullopt};
  if (o.has("instance_id")) c.instance_id = str(o["instance_id"], o.at("instance_id"));
  return c;
}

AgreementHeader header(const json& j, const std::string& where) {
  Obj o(j, where, {"doc_status", "version"},
        {"attached_to", "identifiers", "dates", "signatures", "agreement_hash", "xrefs", "type_definitions",
         "style_sheet", "doc_type", "parent_ids", "child_ids", "edit_history", "other_data", "indirection",
         "code_refs"});
  AgreementHeader h;
  if (o.has("attached_to")) h.attached_to = doc_id(o["attached_to"], o.at("attached_to"));
  if (o.has("identifiers")) h.identifiers = doc_ids(o["identifiers"], o.at("identifiers"));
  if (o.has("dates")) h.dates = string_map(o["dates"], o.at("dates"));
  if (o.has("signatures")) {
    const json& a = arr(o["signatures"], o.at("signatures"));
    for (std::size_t i = 0; i < a.size(); ++i) {
      Obj s(a[i], idx(o.at("signatures"), i), {"signer", "timestamp", "signature"});
      h.signatures.push_back(
          {str(s["signer"], s.at("signer")), timestamp(s["timestamp"], s.at("timestamp")), str(s["signature"], s.at("signature"))});
    }
  }
  if (o.has("agreement_hash")) {
    Obj d(o["agreement_hash"], o.at("agreement_hash"), {"algorithm", "hex"});
    h.agreement_hash = DigestValue{str(d["algorithm"], d.at("algorithm")), str(d["hex"], d.at("hex"))};
  }
  if (o.has("xrefs")) {
    const json& a = arr(o["xrefs"], o.at("xrefs"));
    for (std::size_t i = 0; i < a.size(); ++i) {
      Obj x(a[i], idx(o.at("xrefs"), i), {"id", "kind", "source", "target"});
      std::string kind = str(x["kind"], x.at("kind"));
      if (kind != "intra" && kind != "inter") schema(x.at("kind"), "unknown reference kind '" + kind + "'");
      h.xref_table.push_back({str(x["id"], x.at("id")), locator(x["source"], x.at("source")),
                              target(x["target"], x.at("target")), kind == "intra" ? XrefKind::intra : XrefKind::inter});
    }
  }
  if (o.has("type_definitions")) {
    const json& a = arr(o["type_definitions"], o.at("type_definitions"));
    for (std::size_t i = 0; i < a.size(); ++i) h.type_definitions.push_back(type_def(a[i], idx(o.at("type_definitions"), i)));
  }
  if (o.has("style_sheet")) h.style_sheet = string_map(o["style_sheet"], o.at("style_sheet"));
  if (o.has("doc_type")) h.doc_type = str(o["doc_type"], o.at("doc_type"));
  h.doc_status = enum_value<DocStatus>(o["doc_status"], o.at("doc_status"), doc_status_from, "status");
  if (o.has("parent_ids")) h.parent_ids = doc_ids(o["parent_ids"], o.at("parent_ids"));
  if (o.has("child_ids")) h.child_ids = doc_ids(o["child_ids"], o.at("child_ids"));
  {
    Obj v(o["version"], o.at("version"), {"number", "timestamp", "branch"});
    std::size_t n = uint(v["number"], v.at("number"));
    if (n > 0xffffffffu) schema(v.at("number"), "version number out of range");
    h.version = {static_cast<unsigned>(n), timestamp(v["timestamp"], v.at("timestamp")),
                 enum_value<Branch>(v["branch"], v.at("branch"), branch_from, "branch")};
  }
  if (o.has("edit_history")) {
    const json& a = arr(o["edit_history"], o.at("edit_history"));
    for (std::size_t i = 0; i < a.size(); ++i) {
      Obj e(a[i], idx(o.at("edit_history"), i), {"timestamp", "actor", "change", "detail", "version"});
      h.edit_history.push_back({timestamp(e["timestamp"], e.at("timestamp")), str(e["actor"], e.at("actor")),
                                enum_value<ChangeKind>(e["change"], e.at("change"), change_kind_from, "change kind"),
                                str(e["detail"], e.at("detail")),
                                static_cast<unsigned>(uint(e["version"], e.at("version")))});
    }
  }
  if (o.has("other_data")) {
    const json& a = arr(o["other_data"], o.at("other_data"));
    for (std::size_t i = 0; i < a.size(); ++i) {
      Obj r(a[i], idx(o.at("other_data"), i), {"name", "value", "locator"}, {"sensitive"});
      h.other_data.push_back({str(r["name"], r.at("name")), str(r["value"], r.at("value")),
                              locator(r["locator"], r.at("locator")),
                              r.has("sensitive") && boolean(r["sensitive"], r.at("sensitive"))});
    }
  }
  if (o.has("indirection")) {
    Obj ind(o["indirection"], o.at("indirection"), {}, {"incoming", "outgoing"});
    if (ind.has("incoming")) {
      const json& in = ind["incoming"];
      if (!in.is_object()) schema(ind.at("incoming"), "expected an object");
      for (const auto& [id, v] : in.items()) {
        Obj s(v, ind.at("incoming") + "/" + id, {"locator", "kind", "key"}, {"stale"});
        h.indirection.incoming[id] = {locator(s["locator"], s.at("locator")),
                                      enum_value<SlotKind>(s["kind"], s.at("kind"), slot_kind_from, "slot kind"),
                                      str(s["key"], s.at("key")), s.has("stale") && boolean(s["stale"], s.at("stale"))};
      }
    }
    if (ind.has("outgoing")) {
      const json& out = ind["outgoing"];
      if (!out.is_object()) schema(ind.at("outgoing"), "expected an object");
      for (const auto& [id, v] : out.items()) {
        Obj e(v, ind.at("outgoing") + "/" + id, {"doc", "slot"});
        h.indirection.outgoing[id] = {doc_id(e["doc"], e.at("doc")), str(e["slot"], e.at("slot"))};
      }
    }
  }
  if (o.has("code_refs")) {
    const json& a = arr(o["code_refs"], o.at("code_refs"));
    for (std::size_t i = 0; i < a.size(); ++i) h.code_refs.push_back(code_ref(a[i], idx(o.at("code_refs"), i)));
  }
  return h;
}

ProseDocument document(const json& j, const std::string& where) {
  Obj o(j, where, {"id", "root"});
  return {doc_id(o["id"], o.at("id")), nodes(o["root"], o.at("root"))};
}

SmartLegalAgreement agreement(const json& j, const std::string& where) {
  Obj o(j, where, {}, {"documents", "parameter_sets", "headers"});
  SmartLegalAgreement a;
  if (o.has("documents")) {
    const json& d = arr(o["documents"], o.at("documents"));
    for (std::size_t i = 0; i < d.size(); ++i) a.documents.push_back(document(d[i], idx(o.at("documents"), i)));
  }
  if (o.has("parameter_sets")) {
    const json& s = arr(o["parameter_sets"], o.at("parameter_sets"));
    for (std::size_t i = 0; i < s.size(); ++i) a.parameter_sets.push_back(parameter_set(s[i], idx(o.at("parameter_sets"), i)));
  }
  if (o.has("headers")) {
    const json& h = arr(o["headers"], o.at("headers"));
    for (std::size_t i = 0; i < h.size(); ++i) a.headers.push_back(header(h[i], idx(o.at("headers"), i)));
  }
  return a;
}

}  // namespace

json parse_json(std::string_view bytes) {
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") {
    throw ParseError("MALFORMED_SYNTAX", 0, "byte-order mark is not allowed");
  }
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError("MALFORMED_SYNTAX", offset, e.what());
  }
}

SmartContract decode_contract(const json& j) {
  Obj o(j, "", {"format"}, {"agreements", "code_refs"});
  if (str(o["format"], "/format") != kFormatTag) schema("/format", "unsupported format tag");
  SmartContract c;
  if (o.has("agreements")) {
    const json& a = arr(o["agreements"], "/agreements");
    for (std::size_t i = 0; i < a.size(); ++i) c.agreements.push_back(agreement(a[i], idx("/agreements", i)));
  }
  if (o.has("code_refs")) {
    const json& a = arr(o["code_refs"], "/code_refs");
    for (std::size_t i = 0; i < a.size(); ++i) c.code_refs.push_back(code_ref(a[i], idx("/code_refs", i)));
  }
  return c;
}

SmartLegalAgreement decode_agreement(const json& j) { return agreement(j, ""); }

ProseDocument decode_document(const json& j) { return document(j, ""); }

}  // namespace sla::detail
