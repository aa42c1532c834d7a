#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sla/diagnostics.hpp"
#include "sla/document_id.hpp"
#include "sla/prose.hpp"
#include "sla/values.hpp"

namespace sla {

// ---------------------------------------------------------------------------
// Time
// ---------------------------------------------------------------------------

using Timestamp = std::chrono::sys_seconds;

// YYYY-MM-DDTHH:MM:SSZ
std::string format_timestamp(Timestamp t);
std::optional<Timestamp> parse_timestamp(std::string_view s);
Timestamp now_utc();

// ---------------------------------------------------------------------------
// Digests
// ---------------------------------------------------------------------------

inline constexpr std::string_view kSha256 = "sha-256";

struct DigestValue {
  std::string algorithm{kSha256};
  std::string hex;

  bool well_formed() const;
  std::string to_string() const { return algorithm + ":" + hex; }
  bool operator==(const DigestValue&) const = default;
};

// ---------------------------------------------------------------------------
// Cross-references
// ---------------------------------------------------------------------------

struct Locator {
  DocumentId doc;
  NodePath path;
  std::optional<TextRange> range;
  bool operator==(const Locator&) const = default;
};

std::string format_locator(const Locator& l);

struct SpanTarget {  // MarkedSpan carrying xref-target(id)
  DocumentId doc;
  NodePath path;
  bool operator==(const SpanTarget&) const = default;
};
struct ListItemTarget {
  DocumentId doc;
  NodePath list;  // path of the ListBlock
  std::size_t index = 0;
  bool operator==(const ListItemTarget&) const = default;
};
struct TableTarget {
  DocumentId doc;
  unsigned number = 1;
  bool operator==(const TableTarget&) const = default;
};
struct AnchorTarget {
  DocumentId doc;
  std::string anchor_id;
  bool operator==(const AnchorTarget&) const = default;
};
struct IndirectTarget {  // slot in the target document's incoming table
  DocumentId doc;
  std::string slot;
  bool operator==(const IndirectTarget&) const = default;
};
// Whole-document target; only valid as input to add_crossref, which routes it
// through the reserved document slot.
struct DocumentTarget {
  DocumentId doc;
  bool operator==(const DocumentTarget&) const = default;
};

using TargetLocator = std::variant<SpanTarget, ListItemTarget, TableTarget, AnchorTarget, IndirectTarget, DocumentTarget>;

const DocumentId& target_doc(const TargetLocator& t);
std::string format_target(const TargetLocator& t);

enum class XrefKind { intra, inter };

struct CrossReference {
  std::string xref_id;
  Locator source;
  TargetLocator target;
  XrefKind kind = XrefKind::intra;
  bool operator==(const CrossReference&) const = default;
};

enum class SlotKind { span, anchor, list_item, table, document };

std::string_view to_string(SlotKind k);
std::optional<SlotKind> slot_kind_from(std::string_view s);

// Incoming slot: where the target currently is, plus the key used to find it
// again after the document is edited. Stale slots are kept as tombstones.
struct IncomingSlot {
  Locator locator;
  SlotKind kind = SlotKind::span;
  std::string key;  // xref id, anchor id, table number or item content digest
  bool stale = false;
  bool operator==(const IncomingSlot&) const = default;
};

struct OutgoingEntry {
  DocumentId doc;
  std::string slot;
  bool operator==(const OutgoingEntry&) const = default;
};

inline constexpr std::string_view kDocumentSlot = "@document";

struct IndirectionTables {
  std::map<std::string, IncomingSlot> incoming;   // slot id -> slot
  std::map<std::string, OutgoingEntry> outgoing;  // xref id -> (doc, slot)
  bool empty() const { return incoming.empty() && outgoing.empty(); }
  bool operator==(const IndirectionTables&) const = default;
};

// ---------------------------------------------------------------------------
// Lifecycle records
// ---------------------------------------------------------------------------

struct CodeRef {
  std::string platform;
  std::string code_version;
  std::optional<std::string> instance_id;

  bool same_code(const CodeRef& o) const { return platform == o.platform && code_version == o.code_version; }
  bool operator==(const CodeRef&) const = default;
};

enum class Branch { local, transmitted };

struct VersionInfo {
  unsigned number = 1;
  Timestamp timestamp{};
  Branch branch = Branch::local;
  bool operator==(const VersionInfo&) const = default;
};

enum class ChangeKind {
  edited,
  parameter_bound,
  choice_resolved,
  redacted,
  status_changed,
  code_bound,
  rejected_amendment,
  approval,
};

std::string_view to_string(ChangeKind k);
std::optional<ChangeKind> change_kind_from(std::string_view s);
std::string_view to_string(Branch b);
std::optional<Branch> branch_from(std::string_view s);

struct HistoryEntry {
  Timestamp timestamp{};
  std::string actor;
  ChangeKind change = ChangeKind::edited;
  std::string detail;
  unsigned resulting_version = 1;
  bool operator==(const HistoryEntry&) const = default;
};

using EditHistory = std::vector<HistoryEntry>;

// Linear order with a universal return to draft.
enum class DocStatus {
  draft,
  parameters_identified,
  agreed_with_counterparties,
  signed_,
  code_bound_pending_authorization,
  executed,
};

std::string_view to_string(DocStatus s);
std::optional<DocStatus> doc_status_from(std::string_view s);
bool is_legal_transition(DocStatus from, DocStatus to);

// ---------------------------------------------------------------------------
// Header
// ---------------------------------------------------------------------------

struct SignatureRecord {
  std::string signer;
  Timestamp timestamp{};
  std::string signature_hex;  // opaque bytes
  auto operator<=>(const SignatureRecord&) const = default;
  bool operator==(const SignatureRecord&) const = default;
};

struct OtherDataRecord {
  std::string name;
  std::string value;
  Locator locator;
  bool sensitive = false;
  bool operator==(const OtherDataRecord&) const = default;
};

struct AgreementHeader {
  // Empty for the agreement-level header; otherwise the document this header
  // belongs to.
  std::optional<DocumentId> attached_to;

  DocumentIdSet identifiers;
  std::map<std::string, std::string> dates;  // signing/execution/effective/... -> YYYY-MM-DD
  std::vector<SignatureRecord> signatures;
  std::optional<DigestValue> agreement_hash;
  std::vector<CrossReference> xref_table;
  std::vector<TypeDef> type_definitions;
  std::optional<std::map<std::string, std::string>> style_sheet;
  std::optional<std::string> doc_type;
  DocStatus doc_status = DocStatus::draft;
  DocumentIdSet parent_ids;
  DocumentIdSet child_ids;
  VersionInfo version;
  EditHistory edit_history;
  std::vector<OtherDataRecord> other_data;
  IndirectionTables indirection;
  std::vector<CodeRef> code_refs;

  bool is_agreement_level() const { return !attached_to.has_value(); }
  bool operator==(const AgreementHeader&) const = default;
};

// ---------------------------------------------------------------------------
// Containers
// ---------------------------------------------------------------------------

struct SmartLegalAgreement {
  std::vector<ProseDocument> documents;
  std::vector<ParameterSet> parameter_sets;
  std::vector<AgreementHeader> headers;

  const ProseDocument* find_document(const DocumentId& id) const;
  ProseDocument* find_document(const DocumentId& id);
  const AgreementHeader* agreement_header() const;
  AgreementHeader* agreement_header();
  const AgreementHeader* header_for(const DocumentId& id) const;
  AgreementHeader* header_for(const DocumentId& id);
  // Returns the header for `id`, creating an empty one if missing.
  AgreementHeader& ensure_header_for(const DocumentId& id);
  AgreementHeader& ensure_agreement_header();
  const ParameterSet* parameter_set_for(const std::optional<DocumentId>& owner) const;
  ParameterSet& ensure_parameter_set(const std::optional<DocumentId>& owner);

  // Element order carries no meaning.
  bool operator==(const SmartLegalAgreement& other) const;
};

struct SmartContract {
  std::vector<SmartLegalAgreement> agreements;
  std::vector<CodeRef> code_refs;

  bool operator==(const SmartContract& other) const;
};

SmartContract new_smart_contract();

enum class PlacementPolicy { prose_only, element_only, dual };

std::string_view to_string(PlacementPolicy p);
std::optional<PlacementPolicy> placement_policy_from(std::string_view s);

// Structural checks that hold regardless of placement policy: document
// structure, header multiplicity and attachment, parameter typing and
// cross-reference integrity.
ValidationReport validate_model(const SmartLegalAgreement& agreement);

ValidationReport validate_placement(const SmartLegalAgreement& agreement, PlacementPolicy policy);

// validate_model plus validate_placement.
ValidationReport validate_agreement(const SmartLegalAgreement& agreement, PlacementPolicy policy);

ValidationReport validate_contract(const SmartContract& contract, PlacementPolicy policy);

// All type definitions visible in an agreement (every header contributes).
std::vector<TypeDef> visible_type_definitions(const SmartLegalAgreement& agreement);

}  // namespace sla
