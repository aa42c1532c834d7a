#pragma once

#include <string>

#include "json.hpp"
#include "sla/agreement.hpp"
#include "sla/parameters.hpp"

namespace sla::detail {

using json = nlohmann::json;

json encode(const DocumentId& id);
json encode(const Markup& m);
json encode(const ProseNode& n);
json encode_nodes(const NodeSequence& seq);
json encode(const ProseDocument& d);
json encode(const TypeRef& t);
json encode(const ParamValue& v);
json encode(const TypeDef& d);
json encode(const Parameter& p);
json encode(const ParameterSet& s);
json encode(const Locator& l);
json encode(const TargetLocator& t);
json encode(const CodeRef& c);
json encode(const AgreementHeader& h);
json encode(const SmartLegalAgreement& a);
json encode(const SmartContract& c);
json encode(const ExecutionParameter& p);

// Compact dump with bytewise-sorted keys. Throws ModelError on invalid UTF-8.
std::string dump(const json& j);

// Strict decoding: unknown keys, wrong types and bad enum values raise
// ParseError(SCHEMA_VIOLATION); unknown markup kinds UNKNOWN_MARKUP_KIND.
json parse_json(std::string_view bytes);
SmartContract decode_contract(const json& j);
SmartLegalAgreement decode_agreement(const json& j);
ProseDocument decode_document(const json& j);

}  // namespace sla::detail
