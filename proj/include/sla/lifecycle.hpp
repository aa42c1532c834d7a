#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sla/agreement.hpp"
#include "sla/parameters.hpp"

namespace sla {

struct EditStamp {
  std::string actor = "system";
  std::optional<Timestamp> timestamp;  // defaults to now
};

// Bumps the version, refreshes its timestamp and appends a history entry.
// Timestamps never go backwards along the history.
AgreementHeader record_edit(const AgreementHeader& header, ChangeKind kind, std::string detail,
                            const EditStamp& stamp = {});

// Throws ILLEGAL_TRANSITION.
AgreementHeader set_status(const AgreementHeader& header, DocStatus next, const EditStamp& stamp = {});

struct Derivation {
  ProseDocument child;
  AgreementHeader child_header;
  AgreementHeader parent_header;
};

Derivation derive_document(const ProseDocument& parent, const AgreementHeader& parent_header,
                           std::string new_type, std::optional<DocumentId> child_id = {},
                           const EditStamp& stamp = {});

// Derives inside one agreement: the child and its header are added and the
// parent's header gains the child id. Throws LOCATOR_INVALID for unknown
// parents.
SmartLegalAgreement derive_in_agreement(const SmartLegalAgreement& agreement, const DocumentId& parent,
                                        std::string new_type, std::optional<DocumentId> child_id = {},
                                        const EditStamp& stamp = {});

// Copy for a counterparty: histories emptied, branch set to transmitted and
// sensitive other-data dropped. Throws ModelError.
std::string export_transmission(const SmartLegalAgreement& agreement);

// Import into an empty repository: parsed copy on the local branch.
SmartLegalAgreement import_transmission(std::string_view bytes);

struct MergeOutcome {
  std::optional<SmartLegalAgreement> merged;
  std::vector<std::string> conflicts;  // divergent paths when not merged
  bool no_op = false;
};

// Three-way merge of a received copy against `local`, using `base` (the
// agreement as it was exported) to tell which side changed a unit. Without
// `base`, local is assumed unchanged since export. Units are header fields,
// top-level prose parts and parameter entries. Throws PARSE_FAILURE,
// UNRELATED_DOCUMENT.
MergeOutcome import_merge(const SmartLegalAgreement& local, std::string_view received,
                          const std::optional<SmartLegalAgreement>& base = {}, const EditStamp& stamp = {});

struct InstantiationRequest {
  CodeRef code;
  std::vector<ExecutionParameter> parameters;  // last entry is the agreement hash
  bool operator==(const InstantiationRequest&) const = default;
};

// Throws NOT_SIGNED, HASH_MISSING, UNRESOLVED_PARAMS.
InstantiationRequest bind_code(const SmartLegalAgreement& agreement, const CodeRef& code,
                               const ResolvedEnvironment& env);

// Canonical JSON of a request.
std::string serialize(const InstantiationRequest& r);

// Registers a code ref on the agreement-level header.
SmartLegalAgreement attach_code(const SmartLegalAgreement& agreement, const CodeRef& code,
                                const EditStamp& stamp = {});

// Stores the instance id on the matching code ref, moves the agreement to
// code-bound-pending-authorization and reseals it; the previous digest is kept
// in the history. Throws UNKNOWN_CODE_REF, ALREADY_INTEGRATED, NOT_SIGNED,
// HASH_MISSING.
SmartLegalAgreement dual_integrate(const SmartLegalAgreement& agreement, const CodeRef& code,
                                   const std::string& instance_id, const EditStamp& stamp = {});

// One `timestamp TAB actor TAB kind TAB detail` line per entry. Tabs, newlines
// and backslashes inside fields are escaped.
std::string format_history(const EditHistory& history);

}  // namespace sla
