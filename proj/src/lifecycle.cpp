#include "sla/lifecycle.hpp"

#include <algorithm>
#include <set>

#include "codec.hpp"
#include "sla/format.hpp"

namespace sla {

// ---------------------------------------------------------------------------
// History and status
// ---------------------------------------------------------------------------

AgreementHeader record_edit(const AgreementHeader& header, ChangeKind kind, std::string detail, const EditStamp& stamp) {
  AgreementHeader out = header;
  Timestamp ts = stamp.timestamp ? *stamp.timestamp : now_utc();
  if (!out.edit_history.empty()) ts = std::max(ts, out.edit_history.back().timestamp);
  ts = std::max(ts, out.version.timestamp);
  out.version.number += 1;
  out.version.timestamp = ts;
  out.edit_history.push_back({ts, stamp.actor, kind, std::move(detail), out.version.number});
  return out;
}

AgreementHeader set_status(const AgreementHeader& header, DocStatus next, const EditStamp& stamp) {
  if (!is_legal_transition(header.doc_status, next)) {
    throw Error("ILLEGAL_TRANSITION",
                std::string(to_string(header.doc_status)) + " cannot move to " + std::string(to_string(next)));
  }
  AgreementHeader out = record_edit(
      header, ChangeKind::status_changed,
      std::string(to_string(header.doc_status)) + " -> " + std::string(to_string(next)), stamp);
  out.doc_status = next;
  return out;
}

// ---------------------------------------------------------------------------
// Hierarchy
// ---------------------------------------------------------------------------

Derivation derive_document(const ProseDocument& parent, const AgreementHeader& parent_header, std::string new_type,
                           std::optional<DocumentId> child_id, const EditStamp& stamp) {
  Derivation d;
  d.child = parent;
  d.child.id = child_id ? *child_id : fresh_document_id();
  d.child_header.attached_to = d.child.id;
  d.child_header.doc_type = std::move(new_type);
  d.child_header.parent_ids = {parent.id};
  d.child_header.style_sheet = parent_header.style_sheet;
  d.child_header.type_definitions = parent_header.type_definitions;
  d.child_header.version = VersionInfo{1, stamp.timestamp ? *stamp.timestamp : now_utc(), Branch::local};
  d.parent_header = parent_header;
  d.parent_header.child_ids.insert(d.child.id);
  return d;
}

SmartLegalAgreement derive_in_agreement(const SmartLegalAgreement& agreement, const DocumentId& parent,
                                        std::string new_type, std::optional<DocumentId> child_id,
                                        const EditStamp& stamp) {
  const ProseDocument* p = agreement.find_document(parent);
  if (!p) throw Error("LOCATOR_INVALID", "unknown parent document " + to_string(parent));
  if (child_id && agreement.find_document(*child_id)) {
    throw Error("DUPLICATE_DOCUMENT_ID", "document " + to_string(*child_id) + " already exists");
  }
  SmartLegalAgreement out = agreement;
  out.ensure_agreement_header();
  AgreementHeader& ph = out.ensure_header_for(parent);
  Derivation d = derive_document(*out.find_document(parent), ph, std::move(new_type), child_id, stamp);
  ph = d.parent_header;
  if (const ParameterSet* own = out.parameter_set_for(parent)) {
    ParameterSet copy = *own;
    copy.owner = d.child.id;
    out.parameter_sets.push_back(std::move(copy));
  }
  out.documents.push_back(std::move(d.child));
  out.headers.push_back(std::move(d.child_header));
  return out;
}

// ---------------------------------------------------------------------------
// Transmission
// ---------------------------------------------------------------------------

std::string export_transmission(const SmartLegalAgreement& agreement) {
  ValidationReport report = validate_model(agreement);
  if (report.has_errors()) throw ModelError(std::move(report));
  SmartLegalAgreement copy = agreement;
  for (auto& h : copy.headers) {
    h.edit_history.clear();
    h.version.branch = Branch::transmitted;
    std::erase_if(h.other_data, [](const OtherDataRecord& r) { return r.sensitive; });
  }
  SmartContract wrapper;
  wrapper.agreements.push_back(std::move(copy));
  return serialize(wrapper);
}

namespace {

SmartLegalAgreement parse_received(std::string_view bytes) {
  try {
    return parse_agreement(bytes);
  } catch (const ParseError& e) {
    throw Error("PARSE_FAILURE", std::string("received copy does not parse (") + e.what() + ")");
  }
}

}  // namespace

SmartLegalAgreement import_transmission(std::string_view bytes) {
  SmartLegalAgreement a = parse_received(bytes);
  for (auto& h : a.headers) h.version.branch = Branch::local;
  return a;
}

// ---------------------------------------------------------------------------
// Merge
// ---------------------------------------------------------------------------

namespace {

using detail::json;

// The agreement as a map of merge units: unit name -> canonical JSON text.
struct Units {
  std::map<std::string, json> by_name;
};

std::string owner_key(const json& header_or_set, const char* field) {
  return header_or_set.contains(field) ? header_or_set.at(field).at("value").get<std::string>() : "@agreement";
}

// Top-level chunks of a root sequence, split before each part boundary.
std::vector<json> part_chunks(const json& root) {
  std::vector<json> chunks;
  json current = json::array();
  for (const auto& n : root) {
    if (n.at("type") == "part" && !current.empty()) {
      chunks.push_back(current);
      current = json::array();
    }
    current.push_back(n);
  }
  if (!current.empty() || chunks.empty()) chunks.push_back(current);
  return chunks;
}

Units units_of(const SmartLegalAgreement& a) {
  Units u;
  json j = detail::encode(canonicalize(a));
  for (const auto& h : j.at("headers")) {
    std::string who = "header[" + owner_key(h, "attached_to") + "]";
    for (const auto& [k, v] : h.items()) {
      if (k == "edit_history" || k == "version" || k == "attached_to") continue;
      u.by_name[who + "/" + k] = v;
    }
    u.by_name[who] = true;
  }
  for (const auto& d : j.at("documents")) {
    std::string who = "doc[" + d.at("id").at("value").get<std::string>() + "]";
    u.by_name[who] = true;
    auto chunks = part_chunks(d.at("root"));
    u.by_name[who + "/parts"] = chunks.size();
    for (std::size_t i = 0; i < chunks.size(); ++i) u.by_name[who + "/part" + std::to_string(i)] = chunks[i];
  }
  for (const auto& s : j.at("parameter_sets")) {
    std::string who = "params[" + owner_key(s, "owner") + "]";
    u.by_name[who] = true;
    for (const auto& p : s.at("entries")) u.by_name[who + "/" + p.at("name").get<std::string>()] = p;
  }
  return u;
}

// "doc[d]/partN" conflicts name the first diverging node, descending through
// spans that agree on their markup.
std::string conflict_name(const std::string& name, const Units& L, const std::optional<json>& l,
                          const std::optional<json>& r) {
  auto open = name.find('['), close = name.find(']');
  if (name.compare(0, 4, "doc[") != 0 || name.find("/part", close) != close + 1 || !l || !r) return name;
  if (name.compare(close + 2, 5, "parts") == 0) return name;
  const std::string who = name.substr(open + 1, close - open - 1);
  const std::size_t part = std::stoul(name.substr(close + 6));
  std::size_t offset = 0;
  for (std::size_t k = 0; k < part; ++k) {
    auto it = L.by_name.find("doc[" + who + "]/part" + std::to_string(k));
    if (it != L.by_name.end()) offset += it->second.size();
  }
  NodePath path;
  const json* a = &*l;
  const json* b = &*r;
  bool top = true;
  while (true) {
    std::size_t i = 0;
    while (i < a->size() && i < b->size() && (*a)[i] == (*b)[i]) ++i;
    path.push_back(top ? offset + i : i);
    top = false;
    if (i >= a->size() || i >= b->size()) break;
    const json& x = (*a)[i];
    const json& y = (*b)[i];
    if (x.at("type") != "span" || y.at("type") != "span" || x.at("markups") != y.at("markups")) break;
    a = &x.at("children");
    b = &y.at("children");
  }
  return name + " at " + who + ":" + format_path(path);
}

std::optional<json> unit(const Units& u, const std::string& name) {
  auto it = u.by_name.find(name);
  if (it == u.by_name.end()) return std::nullopt;
  return it->second;
}

// Rebuilds agreement JSON from merge units.
json rebuild(const Units& u, const json& template_json) {
  std::map<std::string, json> headers;
  std::map<std::string, std::vector<std::pair<std::size_t, json>>> parts;
  std::map<std::string, json> sets;
  auto id_json = [&](const std::string& value, const char* array, const char* field) -> std::optional<json> {
    for (const auto& e : template_json.at(array)) {
      if (e.contains(field) && e.at(field).at("value") == value) return e.at(field);
    }
    return std::nullopt;
  };
  for (const auto& [name, v] : u.by_name) {
    auto open = name.find('[');
    auto close = name.find(']');
    std::string kind = name.substr(0, open);
    std::string who = name.substr(open + 1, close - open - 1);
    std::string rest = close + 1 < name.size() ? name.substr(close + 2) : "";
    if (kind == "header") {
      json& h = headers[who];
      if (h.is_null()) h = json::object();
      if (!rest.empty()) h[rest] = v;
    } else if (kind == "doc") {
      if (rest.rfind("part", 0) == 0 && rest != "parts") parts[who].emplace_back(std::stoul(rest.substr(4)), v);
      else parts.try_emplace(who);
    } else if (kind == "params") {
      json& s = sets[who];
      if (s.is_null()) s = json{{"entries", json::array()}};
      if (!rest.empty()) s["entries"].push_back(v);
    }
  }
  json out = {{"documents", json::array()}, {"headers", json::array()}, {"parameter_sets", json::array()}};
  for (auto& [who, h] : headers) {
    if (who != "@agreement") {
      auto id = id_json(who, "headers", "attached_to");
      h["attached_to"] = id ? *id : json{{"scope", "local"}, {"value", who}};
    }
    h["version"] = json{{"number", 1}, {"timestamp", "1970-01-01T00:00:00Z"}, {"branch", "local"}};
    for (const auto& orig : template_json.at("headers")) {
      if (owner_key(orig, "attached_to") == who) h["version"] = orig.at("version");
    }
    if (!h.contains("doc_status")) h["doc_status"] = "draft";
    out["headers"].push_back(h);
  }
  for (auto& [who, list] : parts) {
    std::sort(list.begin(), list.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    json root = json::array();
    for (const auto& [i, chunk] : list)
      for (const auto& n : chunk) root.push_back(n);
    auto id = id_json(who, "documents", "id");
    out["documents"].push_back({{"id", id ? *id : json{{"scope", "local"}, {"value", who}}}, {"root", root}});
  }
  for (auto& [who, s] : sets) {
    if (who != "@agreement") {
      auto id = id_json(who, "parameter_sets", "owner");
      s["owner"] = id ? *id : json{{"scope", "local"}, {"value", who}};
    }
    out["parameter_sets"].push_back(s);
  }
  return out;
}

}  // namespace

MergeOutcome import_merge(const SmartLegalAgreement& local, std::string_view received_bytes,
                          const std::optional<SmartLegalAgreement>& base, const EditStamp& stamp) {
  SmartLegalAgreement received = import_transmission(received_bytes);

  std::set<DocumentId> local_ids;
  for (const auto& d : local.documents) local_ids.insert(d.id);
  bool related = local.documents.empty() && received.documents.empty();
  for (const auto& d : received.documents) related = related || local_ids.count(d.id);
  if (!related) throw Error("UNRELATED_DOCUMENT", "received copy shares no document with the local agreement");

  MergeOutcome outcome;
  if (hash_agreement(received) == hash_agreement(local)) {
    outcome.merged = local;
    outcome.no_op = true;
    return outcome;
  }

  const Units L = units_of(local);
  const Units R = units_of(received);
  const Units B = units_of(base ? *base : local);

  std::set<std::string> names;
  for (const auto* u : {&L, &R, &B})
    for (const auto& [n, v] : u->by_name) names.insert(n);

  Units merged;
  struct Taken {
    std::string name;
    bool bound_now;
  };
  std::vector<Taken> taken;
  for (const auto& n : names) {
    auto l = unit(L, n), r = unit(R, n), b = unit(B, n);
    std::optional<json> result;
    if (l == r) {
      result = l;
    } else if (l == b) {
      result = r;
      bool bound_now = n.rfind("params[", 0) == 0 && r && r->is_object() && r->value("status", "") == "bound" &&
                       (!l || l->value("status", "") != "bound");
      if (n.find('/') != std::string::npos || !r) taken.push_back({n, bound_now});
    } else if (r == b) {
      result = l;
    } else {
      outcome.conflicts.push_back(conflict_name(n, L, l, r));
      continue;
    }
    if (result) merged.by_name[n] = *result;
  }
  if (!outcome.conflicts.empty()) return outcome;
  if (taken.empty()) {
    outcome.merged = local;
    outcome.no_op = true;
    return outcome;
  }

  json local_json = detail::encode(canonicalize(local));
  SmartLegalAgreement result;
  try {
    result = detail::decode_agreement(rebuild(merged, local_json));
  } catch (const ParseError& e) {
    outcome.conflicts.push_back(std::string("unmergeable: ") + e.what());
    return outcome;
  }
  // Histories are branch-local: keep ours.
  for (auto& h : result.headers) {
    const AgreementHeader* mine = h.attached_to ? local.header_for(*h.attached_to) : local.agreement_header();
    if (mine) {
      h.edit_history = mine->edit_history;
      h.version = mine->version;
    }
  }
  AgreementHeader& ah = result.ensure_agreement_header();
  for (const auto& t : taken) {
    ah = record_edit(ah, t.bound_now ? ChangeKind::parameter_bound : ChangeKind::edited, "merged " + t.name, stamp);
  }
  outcome.merged = std::move(result);
  return outcome;
}

// ---------------------------------------------------------------------------
// Code binding
// ---------------------------------------------------------------------------

InstantiationRequest bind_code(const SmartLegalAgreement& agreement, const CodeRef& code, const ResolvedEnvironment& env) {
  const AgreementHeader* h = agreement.agreement_header();
  if (!h || h->doc_status != DocStatus::signed_) {
    throw Error("NOT_SIGNED", "agreement status is " + std::string(h ? to_string(h->doc_status) : "draft"));
  }
  return InstantiationRequest{code, collect_execution_parameters(agreement, env)};
}

std::string serialize(const InstantiationRequest& r) {
  detail::json params = detail::json::array();
  for (const auto& p : r.parameters) params.push_back(detail::encode(p));
  return detail::dump({{"code", detail::encode(r.code)}, {"parameters", params}});
}

SmartLegalAgreement attach_code(const SmartLegalAgreement& agreement, const CodeRef& code, const EditStamp& stamp) {
  SmartLegalAgreement out = agreement;
  AgreementHeader& h = out.ensure_agreement_header();
  for (const auto& c : h.code_refs)
    if (c.same_code(code)) return agreement;
  h.code_refs.push_back(code);
  h = record_edit(h, ChangeKind::edited, "attached code " + code.platform + " " + code.code_version, stamp);
  return out;
}

SmartLegalAgreement dual_integrate(const SmartLegalAgreement& agreement, const CodeRef& code,
                                   const std::string& instance_id, const EditStamp& stamp) {
  if (instance_id.empty()) throw Error("INVALID_CODE_REF", "instance id must not be empty");
  SmartLegalAgreement out = agreement;
  AgreementHeader* h = out.agreement_header();
  CodeRef* ref = nullptr;
  if (h) {
    for (auto& c : h->code_refs)
      if (c.same_code(code)) ref = &c;
  }
  if (!ref) throw Error("UNKNOWN_CODE_REF", "no code ref " + code.platform + " " + code.code_version);
  if (ref->instance_id) throw Error("ALREADY_INTEGRATED", "code ref already bound to instance " + *ref->instance_id);
  if (h->doc_status != DocStatus::signed_) {
    throw Error("NOT_SIGNED", "agreement status is " + std::string(to_string(h->doc_status)));
  }
  if (!h->agreement_hash) throw Error("HASH_MISSING", "agreement-level header has no agreement hash");

  const std::string previous = h->agreement_hash->to_string();
  ref->instance_id = instance_id;
  *h = record_edit(*h, ChangeKind::code_bound,
                   "platform=" + code.platform + "; instance=" + instance_id + "; previous_hash=" + previous, stamp);
  *h = set_status(*h, DocStatus::code_bound_pending_authorization, stamp);
  return seal(out);
}

std::string format_history(const EditHistory& history) {
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
      }
    }
    return out;
  };
  std::string out;
  for (const auto& e : history) {
    out += format_timestamp(e.timestamp) + "\t" + escape(e.actor) + "\t" + std::string(to_string(e.change)) + "\t" +
           escape(e.detail) + "\n";
  }
  return out;
}

}  // namespace sla
