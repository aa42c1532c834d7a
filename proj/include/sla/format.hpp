#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "sla/agreement.hpp"

namespace sla {

inline constexpr std::string_view kFormatTag = "sla/1";

// Canonical UTF-8 JSON: keys sorted bytewise, no insignificant whitespace.
// Values are canonicalized before emission. Throws ModelError when document
// structure is invalid.
std::string serialize(const SmartContract& c);
std::string serialize(const SmartLegalAgreement& a);
std::string serialize(const ProseDocument& d);

using ModelValue = std::variant<SmartContract, SmartLegalAgreement, ProseDocument>;

// Accepts any key order and non-canonical but well-formed input. The kind of
// value is inferred from its top-level keys. Throws ParseError with
// MALFORMED_SYNTAX, UNKNOWN_MARKUP_KIND or SCHEMA_VIOLATION.
ModelValue parse(std::string_view bytes);
SmartContract parse_contract(std::string_view bytes);
SmartLegalAgreement parse_agreement(std::string_view bytes);
ProseDocument parse_document(std::string_view bytes);

SmartContract canonicalize(const SmartContract& c);
SmartLegalAgreement canonicalize(const SmartLegalAgreement& a);
ProseDocument canonicalize(const ProseDocument& d);
NodeSequence canonicalize_nodes(const NodeSequence& nodes);

std::string sha256_hex(std::string_view bytes);

// Digest of the canonical agreement with branch-local bookkeeping removed:
// the stored agreement hash, edit histories, branch tags and sensitive
// other-data records.
DigestValue hash_agreement(const SmartLegalAgreement& a);
DigestValue hash_contract(const SmartContract& c);
DigestValue hash_document(const ProseDocument& d);
DigestValue hash_value(const ModelValue& v);

// Digest of the canonical form of one clause span. Throws LOCATOR_INVALID,
// NOT_A_CLAUSE.
DigestValue hash_clause(const ProseDocument& doc, const NodePath& path);

struct VerifyResult {
  bool ok = false;
  ValidationReport report;  // BAD_DIGEST_FORMAT, parse codes, DIGEST_MISMATCH, STORED_HASH_MISMATCH
};

// Accepts `hex` or `sha-256:hex` as the expected digest.
VerifyResult verify(std::string_view bytes, std::string_view expected);
VerifyResult verify(std::string_view bytes, const DigestValue& expected);

// Sets the agreement-level header's agreement_hash to hash_agreement(a),
// creating the header if needed.
SmartLegalAgreement seal(const SmartLegalAgreement& a);

// `.sha256` digest file line.
std::string digest_file_line(const DigestValue& d, std::string_view filename);

}  // namespace sla
