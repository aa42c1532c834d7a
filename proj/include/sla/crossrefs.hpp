#pragma once

#include <functional>
#include <string>

#include "sla/agreement.hpp"

namespace sla {

struct XrefResult {
  SmartLegalAgreement agreement;
  std::string xref_id;
};

// Marks the source range, marks or confirms the target and records the
// reference in the agreement-level table. Inter-document references go through
// a fresh incoming slot of the target document. Throws LOCATOR_INVALID,
// OVERLAP_FORBIDDEN, SELF_REFERENCE.
XrefResult add_crossref(const SmartLegalAgreement& agreement, const Locator& source, const TargetLocator& target);

enum class Direction { to_target, to_source };

// Throws XREF_NOT_FOUND, STALE_SLOT, LOCATOR_INVALID.
Locator navigate(const SmartLegalAgreement& agreement, const std::string& xref_id, Direction direction);

ValidationReport validate_crossrefs(const SmartLegalAgreement& agreement);

using DocumentEdit = std::function<ProseDocument(const ProseDocument&)>;

struct EditResult {
  SmartLegalAgreement agreement;
  ValidationReport diagnostics;  // TARGET_LOST for targets the edit removed
};

// Applies `edit` to one document and re-points incoming slots and table
// entries that live in it. Other documents are left untouched.
EditResult edit_preserving_sources(const SmartLegalAgreement& agreement, const DocumentId& target_doc,
                                   const DocumentEdit& edit);

}  // namespace sla
