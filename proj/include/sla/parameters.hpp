#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sla/agreement.hpp"

namespace sla {

struct ParameterOccurrence {
  std::string param_id;
  Locator locator;
  bool operator==(const ParameterOccurrence&) const = default;
};

// Every parameter markup, in document order.
std::vector<ParameterOccurrence> identify_parameters(const ProseDocument& doc);

// Brings prose markup and parameter sets in line with `policy`. Throws
// CONFLICTING_VALUES under dual placement when markup and entry disagree.
SmartLegalAgreement sync_parameters(const SmartLegalAgreement& agreement, PlacementPolicy policy);

ValidationReport typecheck_parameter(const Parameter& p, const std::vector<TypeDef>& defs);

// Checks definitions themselves: unique ids, resolvable references, no cycles.
ValidationReport check_type_definitions(const std::vector<TypeDef>& defs);

// Follows named types down to their builtin (or list) form. Returns nullopt on
// unknown names or cycles.
std::optional<TypeRef> resolve_type(const TypeRef& t, const std::vector<TypeDef>& defs);

struct QualifiedName {
  DocumentId doc;
  std::string name;
  auto operator<=>(const QualifiedName&) const = default;
  bool operator==(const QualifiedName&) const = default;
};

std::string to_string(const QualifiedName& q);

struct ResolvedBinding {
  ParamValue value;
  DocumentId provenance;
  bool operator==(const ResolvedBinding&) const = default;
};

struct ResolvedEnvironment {
  std::map<QualifiedName, ResolvedBinding> bindings;

  const ResolvedBinding* find(const QualifiedName& q) const;
  bool operator==(const ResolvedEnvironment&) const = default;
};

struct BindingError {
  std::string code;  // UNBOUND_AT_RESOLUTION | AMBIGUOUS_BINDING | BINDING_CYCLE | DANGLING_LOCATION
  QualifiedName name;
  std::string message;
  bool operator==(const BindingError&) const = default;
};

struct BindingResolution {
  ResolvedEnvironment environment;
  std::vector<BindingError> errors;  // sorted by name
};

using DocumentParameters = std::pair<DocumentId, ParameterSet>;

// Resolves every declaration. Bound entries resolve to themselves; binding
// locations are followed transitively; unbound entries take the single
// distinct value bound under the same name in another document.
BindingResolution resolve_bindings(const std::vector<DocumentParameters>& docs);

// Parameter sets of an agreement keyed for resolve_bindings; the
// agreement-level set appears under agreement_level_owner().
std::vector<DocumentParameters> binding_inputs(const SmartLegalAgreement& agreement);

struct ExecutionParameter {
  std::string name;
  TypeRef type;
  ParamValue value;
  bool operator==(const ExecutionParameter&) const = default;
};

inline constexpr std::string_view kAgreementHashParameter = "agreement_hash";

// Execution parameters sorted by name, then the agreement hash. Throws
// HASH_MISSING, UNRESOLVED_PARAMS or CONFLICTING_VALUES.
std::vector<ExecutionParameter> collect_execution_parameters(const SmartLegalAgreement& agreement,
                                                             const ResolvedEnvironment& env);

// Records the text of an other-data span in the document's header. Idempotent
// for the same name and locator. Throws LOCATOR_INVALID, NOT_OTHER_DATA_SPAN.
SmartLegalAgreement register_other_data(const SmartLegalAgreement& agreement, const Locator& locator,
                                        const std::string& name, bool sensitive = false);

}  // namespace sla
