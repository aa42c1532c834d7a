#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sla/document_id.hpp"
#include "sla/prose.hpp"

namespace sla {

enum class BuiltinType { text, integer, decimal, date, boolean };

std::string_view to_string(BuiltinType t);
std::optional<BuiltinType> builtin_type_from(std::string_view name);

// builtin(kind) | named(id) | list-of(element)
class TypeRef {
 public:
  enum class Form { builtin, named, list_of };

  TypeRef() = default;
  static TypeRef builtin(BuiltinType t);
  static TypeRef named(std::string id);
  static TypeRef list_of(TypeRef element);

  Form form() const { return form_; }
  BuiltinType builtin_kind() const { return builtin_; }
  const std::string& name() const { return name_; }
  const TypeRef& element() const { return *element_; }

  bool operator==(const TypeRef& other) const;

 private:
  Form form_ = Form::builtin;
  BuiltinType builtin_ = BuiltinType::text;
  std::string name_;
  std::shared_ptr<const TypeRef> element_;
};

// "text", "named:Percentage", "list:decimal", "list:named:Rate"
std::string to_string(const TypeRef& t);
std::optional<TypeRef> type_ref_from(std::string_view text);

struct NumericRange {
  std::optional<std::string> min;  // inclusive decimal literals
  std::optional<std::string> max;
  bool operator==(const NumericRange&) const = default;
};

struct TypeDef {
  std::string id;
  TypeRef base;
  std::variant<std::monostate, std::string, NumericRange> constraint;  // none | pattern | range
  bool operator==(const TypeDef&) const = default;
};

// Decimal literal kept verbatim so that scale survives; numeric comparison is
// available separately. Integer literals use the same representation.
struct DecimalLiteral {
  std::string literal;
  bool operator==(const DecimalLiteral&) const = default;
};

bool is_integer_literal(std::string_view s);
bool is_decimal_literal(std::string_view s);
// Three-way numeric comparison of two well-formed decimal or integer literals.
std::strong_ordering compare_decimal(std::string_view a, std::string_view b);
bool is_iso_date(std::string_view s);

class ParamValue {
 public:
  enum class Kind { text, integer, decimal, date, boolean, list };

  static ParamValue text(std::string s);
  static ParamValue integer(std::string literal);
  static ParamValue decimal(std::string literal);
  static ParamValue date(std::string iso);
  static ParamValue boolean(bool b);
  static ParamValue list(std::vector<ParamValue> items);

  Kind kind() const { return kind_; }
  const std::string& literal() const { return literal_; }
  bool as_bool() const { return boolean_; }
  const std::vector<ParamValue>& items() const { return items_; }

  // Exact equality (literal-for-literal).
  bool operator==(const ParamValue&) const = default;

 private:
  Kind kind_ = Kind::text;
  std::string literal_;
  bool boolean_ = false;
  std::vector<ParamValue> items_;
};

std::string_view to_string(ParamValue::Kind k);

// Equality where decimals and integers compare by numeric value.
bool numerically_equal(const ParamValue& a, const ParamValue& b);

// Literal text used in prose attributes and CLI output: booleans as
// true/false, lists as a JSON array of element literals.
std::string to_literal(const ParamValue& v);
// Inverse of to_literal for a value of builtin `kind` (or a list thereof).
std::optional<ParamValue> value_from_literal(const TypeRef& resolved, std::string_view literal);

struct BindingLocation {
  DocumentId doc;
  std::string name;
  bool operator==(const BindingLocation&) const = default;
};

struct Bound {
  bool operator==(const Bound&) const = default;
};
struct Unbound {
  bool operator==(const Unbound&) const = default;
};

using ParamStatus = std::variant<Bound, Unbound, BindingLocation>;

struct Parameter {
  std::string name;
  TypeRef type = TypeRef::builtin(BuiltinType::text);
  std::optional<ParamValue> value;
  ParamStatus status = Unbound{};
  Attributes attributes;  // e.g. execution=true

  bool is_bound() const { return std::holds_alternative<Bound>(status); }
  bool is_execution() const;

  bool operator==(const Parameter&) const = default;
};

Parameter bound_parameter(std::string name, TypeRef type, ParamValue value, Attributes attrs = {});
Parameter unbound_parameter(std::string name, TypeRef type = TypeRef::builtin(BuiltinType::text));
Parameter located_parameter(std::string name, TypeRef type, DocumentId target_doc, std::string target_name);

std::string status_name(const ParamStatus& s);

struct ParameterSet {
  std::optional<DocumentId> owner;  // empty: agreement-level set
  std::vector<Parameter> entries;

  const Parameter* find(const std::string& name) const;
  bool operator==(const ParameterSet& other) const;  // order-insensitive over entries
};

}  // namespace sla
