#pragma once

#include <compare>
#include <set>
#include <string>

namespace sla {

enum class IdScope { local, global };

// Identifies a document. Global ids are hex digests or UUID text; local ids are
// filing identifiers meaningful to one organisation.
struct DocumentId {
  IdScope scope = IdScope::local;
  std::string value;

  static DocumentId local(std::string v) { return {IdScope::local, std::move(v)}; }
  static DocumentId global(std::string v) { return {IdScope::global, std::move(v)}; }

  auto operator<=>(const DocumentId&) const = default;
  bool operator==(const DocumentId&) const = default;
};

using DocumentIdSet = std::set<DocumentId>;

// Pseudo-owner under which agreement-level parameter sets take part in binding
// resolution. Documents may not use this id.
DocumentId agreement_level_owner();

bool is_valid_document_id(const DocumentId& id);
std::string to_string(const DocumentId& id);
std::string to_string(IdScope scope);

// Fresh random UUID (version 4) as a global id.
DocumentId fresh_document_id();

}  // namespace sla
