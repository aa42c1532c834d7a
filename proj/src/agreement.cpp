#include "sla/agreement.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <set>

#include "sla/crossrefs.hpp"
#include "sla/parameters.hpp"

namespace sla {

// ---------------------------------------------------------------------------
// Time
// ---------------------------------------------------------------------------

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  auto days = floor<std::chrono::days>(t);
  year_month_day ymd{days};
  hh_mm_ss hms{t - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z') {
    return std::nullopt;
  }
  auto num = [&](std::size_t pos, std::size_t len) -> int {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') return -1;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  int y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2), mi = num(14, 2), sec = num(17, 2);
  if (y < 0 || mo < 0 || d < 0 || h < 0 || mi < 0 || sec < 0 || h > 23 || mi > 59 || sec > 59) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
}

Timestamp now_utc() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

bool DigestValue::well_formed() const {
  return algorithm == kSha256 && hex.size() == 64 &&
         std::all_of(hex.begin(), hex.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

// ---------------------------------------------------------------------------
// Locators and enums
// ---------------------------------------------------------------------------

std::string format_locator(const Locator& l) {
  std::string out = to_string(l.doc) + ":" + format_path(l.path);
  if (l.range) out += "[" + std::to_string(l.range->begin) + "," + std::to_string(l.range->end) + ")";
  return out;
}

const DocumentId& target_doc(const TargetLocator& t) {
  return std::visit([](const auto& v) -> const DocumentId& { return v.doc; }, t);
}

std::string format_target(const TargetLocator& t) {
  struct V {
    std::string operator()(const SpanTarget& s) const { return to_string(s.doc) + ":" + format_path(s.path); }
    std::string operator()(const ListItemTarget& l) const {
      return to_string(l.doc) + ":" + format_path(l.list) + "#item" + std::to_string(l.index);
    }
    std::string operator()(const TableTarget& t) const { return to_string(t.doc) + ":table" + std::to_string(t.number); }
    std::string operator()(const AnchorTarget& a) const { return to_string(a.doc) + ":anchor(" + a.anchor_id + ")"; }
    std::string operator()(const IndirectTarget& i) const { return to_string(i.doc) + ":slot(" + i.slot + ")"; }
    std::string operator()(const DocumentTarget& d) const { return to_string(d.doc) + ":document"; }
  };
  return std::visit(V{}, t);
}

std::string_view to_string(SlotKind k) {
  switch (k) {
    case SlotKind::span: return "span";
    case SlotKind::anchor: return "anchor";
    case SlotKind::list_item: return "list-item";
    case SlotKind::table: return "table";
    case SlotKind::document: return "document";
  }
  return "span";
}

std::optional<SlotKind> slot_kind_from(std::string_view s) {
  for (auto k : {SlotKind::span, SlotKind::anchor, SlotKind::list_item, SlotKind::table, SlotKind::document}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::string_view to_string(ChangeKind k) {
  switch (k) {
    case ChangeKind::edited: return "edited";
    case ChangeKind::parameter_bound: return "parameter-bound";
    case ChangeKind::choice_resolved: return "choice-resolved";
    case ChangeKind::redacted: return "redacted";
    case ChangeKind::status_changed: return "status-changed";
    case ChangeKind::code_bound: return "code-bound";
    case ChangeKind::rejected_amendment: return "rejected-amendment";
    case ChangeKind::approval: return "approval";
  }
  return "edited";
}

std::optional<ChangeKind> change_kind_from(std::string_view s) {
  for (auto k : {ChangeKind::edited, ChangeKind::parameter_bound, ChangeKind::choice_resolved, ChangeKind::redacted,
                 ChangeKind::status_changed, ChangeKind::code_bound, ChangeKind::rejected_amendment,
                 ChangeKind::approval}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Branch b) { return b == Branch::local ? "local" : "transmitted"; }

std::optional<Branch> branch_from(std::string_view s) {
  if (s == "local") return Branch::local;
  if (s == "transmitted") return Branch::transmitted;
  return std::nullopt;
}

std::string_view to_string(DocStatus s) {
  switch (s) {
    case DocStatus::draft: return "draft";
    case DocStatus::parameters_identified: return "parameters-identified";
    case DocStatus::agreed_with_counterparties: return "agreed-with-counterparties";
    case DocStatus::signed_: return "signed";
    case DocStatus::code_bound_pending_authorization: return "code-bound-pending-authorization";
    case DocStatus::executed: return "executed";
  }
  return "draft";
}

std::optional<DocStatus> doc_status_from(std::string_view s) {
  for (auto k : {DocStatus::draft, DocStatus::parameters_identified, DocStatus::agreed_with_counterparties,
                 DocStatus::signed_, DocStatus::code_bound_pending_authorization, DocStatus::executed}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

bool is_legal_transition(DocStatus from, DocStatus to) {
  if (to == DocStatus::draft) return true;
  return static_cast<int>(to) == static_cast<int>(from) + 1;
}

std::string_view to_string(PlacementPolicy p) {
  switch (p) {
    case PlacementPolicy::prose_only: return "prose-only";
    case PlacementPolicy::element_only: return "element-only";
    case PlacementPolicy::dual: return "dual";
  }
  return "dual";
}

std::optional<PlacementPolicy> placement_policy_from(std::string_view s) {
  for (auto p : {PlacementPolicy::prose_only, PlacementPolicy::element_only, PlacementPolicy::dual}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Containers
// ---------------------------------------------------------------------------

const ProseDocument* SmartLegalAgreement::find_document(const DocumentId& id) const {
  for (const auto& d : documents)
    if (d.id == id) return &d;
  return nullptr;
}

ProseDocument* SmartLegalAgreement::find_document(const DocumentId& id) {
  for (auto& d : documents)
    if (d.id == id) return &d;
  return nullptr;
}

const AgreementHeader* SmartLegalAgreement::agreement_header() const {
  for (const auto& h : headers)
    if (h.is_agreement_level()) return &h;
  return nullptr;
}

AgreementHeader* SmartLegalAgreement::agreement_header() {
  for (auto& h : headers)
    if (h.is_agreement_level()) return &h;
  return nullptr;
}

const AgreementHeader* SmartLegalAgreement::header_for(const DocumentId& id) const {
  for (const auto& h : headers)
    if (h.attached_to == id) return &h;
  return nullptr;
}

AgreementHeader* SmartLegalAgreement::header_for(const DocumentId& id) {
  for (auto& h : headers)
    if (h.attached_to == id) return &h;
  return nullptr;
}

AgreementHeader& SmartLegalAgreement::ensure_header_for(const DocumentId& id) {
  if (auto* h = header_for(id)) return *h;
  AgreementHeader h;
  h.attached_to = id;
  headers.push_back(std::move(h));
  return headers.back();
}

AgreementHeader& SmartLegalAgreement::ensure_agreement_header() {
  if (auto* h = agreement_header()) return *h;
  headers.emplace_back();
  return headers.back();
}

const ParameterSet* SmartLegalAgreement::parameter_set_for(const std::optional<DocumentId>& owner) const {
  for (const auto& s : parameter_sets)
    if (s.owner == owner) return &s;
  return nullptr;
}

ParameterSet& SmartLegalAgreement::ensure_parameter_set(const std::optional<DocumentId>& owner) {
  for (auto& s : parameter_sets)
    if (s.owner == owner) return s;
  parameter_sets.push_back(ParameterSet{owner, {}});
  return parameter_sets.back();
}

namespace {
template <typename T>
bool same_elements(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::is_permutation(a.begin(), a.end(), b.begin());
}
}  // namespace

bool SmartLegalAgreement::operator==(const SmartLegalAgreement& other) const {
  return same_elements(documents, other.documents) && same_elements(parameter_sets, other.parameter_sets) &&
         same_elements(headers, other.headers);
}

bool SmartContract::operator==(const SmartContract& other) const {
  return same_elements(agreements, other.agreements) && same_elements(code_refs, other.code_refs);
}

SmartContract new_smart_contract() { return {}; }

std::vector<TypeDef> visible_type_definitions(const SmartLegalAgreement& agreement) {
  std::vector<TypeDef> defs;
  for (const auto& h : agreement.headers) defs.insert(defs.end(), h.type_definitions.begin(), h.type_definitions.end());
  return defs;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

std::string owner_name(const std::optional<DocumentId>& owner) { return owner ? to_string(*owner) : "@agreement"; }

void validate_headers(const SmartLegalAgreement& a, ValidationReport& report) {
  std::size_t agreement_level = 0;
  std::set<DocumentId> attached;
  for (const auto& h : a.headers) {
    const std::string where = owner_name(h.attached_to);
    if (h.is_agreement_level()) {
      ++agreement_level;
    } else {
      if (!a.find_document(*h.attached_to)) {
        report.add("HEADER_UNKNOWN_DOCUMENT", where, "", "header attached to a document that is not in the agreement");
      }
      if (!attached.insert(*h.attached_to).second) {
        report.add("DUPLICATE_DOCUMENT_HEADER", where, "", "document has more than one header");
      }
      if (h.agreement_hash) {
        report.add("MISPLACED_AGREEMENT_HASH", where, "", "agreement hash belongs in the agreement-level header");
      }
      if (!h.xref_table.empty()) {
        report.add("MISPLACED_XREF_TABLE", where, "", "cross-reference table belongs in the agreement-level header");
      }
    }
    for (const auto& id : h.identifiers) {
      if (!is_valid_document_id(id)) report.add("INVALID_DOCUMENT_ID", where, "", "identifier '" + id.value + "'");
    }
    for (const auto& id : h.parent_ids) {
      if (h.child_ids.count(id)) {
        report.add("PARENT_CHILD_OVERLAP", where, "", to_string(id) + " is both parent and child");
      }
    }
    if (h.agreement_hash && h.agreement_hash->algorithm != kSha256) {
      report.add("UNSUPPORTED_ALGORITHM", where, "", "agreement hash uses '" + h.agreement_hash->algorithm + "'");
    } else if (h.agreement_hash && !h.agreement_hash->well_formed()) {
      report.add("BAD_DIGEST_FORMAT", where, "", "agreement hash must have 64 lowercase hex digits");
    }
    for (const auto& [kind, date] : h.dates) {
      if (!is_iso_date(date)) report.add("INVALID_DATE", where, "", kind + " date '" + date + "'");
    }
    if (h.style_sheet) {
      for (const auto& [from, to] : *h.style_sheet) {
        if (!descriptive_kind_from(from) || !presentational_kind_from(to)) {
          report.add("STYLE_SHEET_INVALID", where, "", from + " -> " + to);
        }
      }
    }
    if (h.version.number == 0) report.add("INVALID_VERSION", where, "", "version numbers start at 1");
    for (std::size_t i = 1; i < h.edit_history.size(); ++i) {
      if (h.edit_history[i].timestamp < h.edit_history[i - 1].timestamp) {
        report.add("HISTORY_OUT_OF_ORDER", where, "", "entry " + std::to_string(i) + " predates its predecessor");
      }
    }
    std::set<std::string> code_keys;
    for (const auto& c : h.code_refs) {
      if (c.platform.empty()) report.add("INVALID_CODE_REF", where, "", "code ref without platform");
      if (c.instance_id && c.instance_id->empty()) report.add("INVALID_CODE_REF", where, "", "empty instance id");
      if (!code_keys.insert(c.platform + "\x1f" + c.code_version).second) {
        report.add("DUPLICATE_CODE_REF", where, "", c.platform + " " + c.code_version);
      }
    }
  }
  if (!a.headers.empty() && agreement_level == 0) {
    report.add("MISSING_AGREEMENT_HEADER", "", "", "headers exist but none is agreement-level");
  }
  if (agreement_level > 1) {
    report.add("MULTIPLE_AGREEMENT_HEADERS", "", "", std::to_string(agreement_level) + " agreement-level headers");
  }
}

void validate_parameter_sets(const SmartLegalAgreement& a, ValidationReport& report) {
  const std::vector<TypeDef> defs = visible_type_definitions(a);
  report.append(check_type_definitions(defs));
  std::set<std::optional<DocumentId>> owners;
  for (const auto& set : a.parameter_sets) {
    const std::string where = owner_name(set.owner);
    if (!owners.insert(set.owner).second) report.add("DUPLICATE_PARAMETER_SET", where, "", "owner has two parameter sets");
    if (set.owner && !a.find_document(*set.owner)) {
      report.add("PARAMETER_SET_UNKNOWN_DOCUMENT", where, "", "parameter set owned by an unknown document");
    }
    std::set<std::string> names;
    for (const auto& p : set.entries) {
      if (!names.insert(p.name).second) report.add("DUPLICATE_PARAM", where, p.name, "parameter declared twice");
      if (auto* loc = std::get_if<BindingLocation>(&p.status)) {
        DocumentId self = set.owner ? *set.owner : agreement_level_owner();
        if (loc->doc == self) report.add("SELF_BINDING_LOCATION", where, p.name, "binding location names its own document");
      }
      for (auto d : typecheck_parameter(p, defs)) {
        d.doc = where;
        d.path = p.name;
        report.add(d.code, d.doc, d.path, d.message, d.severity);
      }
    }
  }
}

}  // namespace

ValidationReport validate_model(const SmartLegalAgreement& agreement) {
  ValidationReport report;
  std::set<DocumentId> ids;
  for (const auto& d : agreement.documents) {
    if (!ids.insert(d.id).second) report.add("DUPLICATE_DOCUMENT_ID", to_string(d.id), "", "document id reused");
    report.append(validate_structure(d));
  }
  validate_headers(agreement, report);
  validate_parameter_sets(agreement, report);
  report.append(validate_crossrefs(agreement));
  return report;
}

ValidationReport validate_placement(const SmartLegalAgreement& agreement, PlacementPolicy policy) {
  ValidationReport report;
  struct Occurrence {
    const ProseDocument* doc;
    NodePath path;
    const Descriptive* markup;
  };
  std::vector<Occurrence> occurrences;
  for (const auto& d : agreement.documents) {
    for_each_node(d, [&](const ProseNode& n, const NodePath& p) {
      if (auto* s = n.as<MarkedSpan>()) {
        for (const auto& m : s->markups) {
          if (m.is(DescriptiveKind::parameter)) occurrences.push_back({&d, p, m.descriptive_if()});
        }
      }
    });
  }

  switch (policy) {
    case PlacementPolicy::prose_only:
      for (const auto& set : agreement.parameter_sets) {
        if (!set.entries.empty()) {
          report.add("PARAM_SET_FORBIDDEN", owner_name(set.owner), "",
                     "prose-only placement keeps no parameter set entries");
        }
      }
      for (const auto& o : occurrences) {
        const auto& attrs = o.markup->attributes;
        bool self_contained = attrs.count("type") && (attrs.count("value") || attrs.count("status"));
        if (!self_contained) {
          report.add("PARAM_MARKUP_INCOMPLETE", to_string(o.doc->id), format_path(o.path),
                     "parameter " + o.markup->id + " lacks type and value attributes");
        }
      }
      break;
    case PlacementPolicy::element_only:
      for (const auto& o : occurrences) {
        report.add("PARAM_IN_PROSE_FORBIDDEN", to_string(o.doc->id), format_path(o.path),
                   "parameter " + o.markup->id + " is marked up in prose");
      }
      break;
    case PlacementPolicy::dual: {
      std::set<std::pair<DocumentId, std::string>> marked;
      for (const auto& o : occurrences) {
        marked.insert({o.doc->id, o.markup->id});
        const ParameterSet* own = agreement.parameter_set_for(o.doc->id);
        const ParameterSet* shared = agreement.parameter_set_for(std::nullopt);
        if (!(own && own->find(o.markup->id)) && !(shared && shared->find(o.markup->id))) {
          report.add("DANGLING_PARAM_REF", to_string(o.doc->id), format_path(o.path),
                     "parameter " + o.markup->id + " has no parameter set entry");
        }
      }
      for (const auto& set : agreement.parameter_sets) {
        if (!set.owner) continue;
        for (const auto& p : set.entries) {
          if (!marked.count({*set.owner, p.name})) {
            report.add("ORPHAN_PARAM_ENTRY", to_string(*set.owner), p.name,
                       "document-owned parameter does not appear in its prose");
          }
        }
      }
      break;
    }
  }
  return report;
}

ValidationReport validate_agreement(const SmartLegalAgreement& agreement, PlacementPolicy policy) {
  ValidationReport report = validate_model(agreement);
  report.append(validate_placement(agreement, policy));
  return report;
}

ValidationReport validate_contract(const SmartContract& contract, PlacementPolicy policy) {
  ValidationReport report;
  std::set<DocumentId> ids;
  for (const auto& a : contract.agreements) {
    for (const auto& d : a.documents) {
      if (!ids.insert(d.id).second) {
        report.add("DUPLICATE_DOCUMENT_ID", to_string(d.id), "", "document id used in more than one place");
      }
    }
  }
  for (const auto& a : contract.agreements) report.append(validate_agreement(a, policy));
  for (const auto& c : contract.code_refs) {
    if (c.platform.empty()) report.add("INVALID_CODE_REF", "", "", "code ref without platform");
  }
  return report;
}

}  // namespace sla
