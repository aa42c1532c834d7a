#include "sla/values.hpp"

#include <algorithm>
#include <chrono>
#include "json.hpp"

namespace sla {

std::string_view to_string(BuiltinType t) {
  switch (t) {
    case BuiltinType::text: return "text";
    case BuiltinType::integer: return "integer";
    case BuiltinType::decimal: return "decimal";
    case BuiltinType::date: return "date";
    case BuiltinType::boolean: return "boolean";
  }
  return "text";
}

std::optional<BuiltinType> builtin_type_from(std::string_view name) {
  for (auto t : {BuiltinType::text, BuiltinType::integer, BuiltinType::decimal, BuiltinType::date, BuiltinType::boolean}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

TypeRef TypeRef::builtin(BuiltinType t) {
  TypeRef r;
  r.form_ = Form::builtin;
  r.builtin_ = t;
  return r;
}

TypeRef TypeRef::named(std::string id) {
  TypeRef r;
  r.form_ = Form::named;
  r.name_ = std::move(id);
  return r;
}

TypeRef TypeRef::list_of(TypeRef element) {
  TypeRef r;
  r.form_ = Form::list_of;
  r.element_ = std::make_shared<const TypeRef>(std::move(element));
  return r;
}

bool TypeRef::operator==(const TypeRef& other) const {
  if (form_ != other.form_) return false;
  switch (form_) {
    case Form::builtin: return builtin_ == other.builtin_;
    case Form::named: return name_ == other.name_;
    case Form::list_of: return *element_ == *other.element_;
  }
  return false;
}

std::string to_string(const TypeRef& t) {
  switch (t.form()) {
    case TypeRef::Form::builtin: return std::string(to_string(t.builtin_kind()));
    case TypeRef::Form::named: return "named:" + t.name();
    case TypeRef::Form::list_of: return "list:" + to_string(t.element());
  }
  return "text";
}

std::optional<TypeRef> type_ref_from(std::string_view text) {
  if (text.starts_with("list:")) {
    auto inner = type_ref_from(text.substr(5));
    if (!inner) return std::nullopt;
    return TypeRef::list_of(std::move(*inner));
  }
  if (text.starts_with("named:")) {
    if (text.size() == 6) return std::nullopt;
    return TypeRef::named(std::string(text.substr(6)));
  }
  if (auto b = builtin_type_from(text)) return TypeRef::builtin(*b);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Literals
// ---------------------------------------------------------------------------

namespace {

bool digits_only(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

struct DecimalParts {
  bool negative = false;
  std::string whole;     // no leading zeros ("" for zero)
  std::string fraction;  // no trailing zeros
};

DecimalParts split_decimal(std::string_view s) {
  DecimalParts p;
  if (!s.empty() && s.front() == '-') {
    p.negative = true;
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  while (!whole.empty() && whole.front() == '0') whole.remove_prefix(1);
  while (!frac.empty() && frac.back() == '0') frac.remove_suffix(1);
  p.whole = std::string(whole);
  p.fraction = std::string(frac);
  if (p.whole.empty() && p.fraction.empty()) p.negative = false;
  return p;
}

std::strong_ordering compare_magnitude(const DecimalParts& a, const DecimalParts& b) {
  if (a.whole.size() != b.whole.size()) return a.whole.size() <=> b.whole.size();
  if (auto c = a.whole.compare(b.whole); c != 0) return c <=> 0;
  if (auto c = a.fraction.compare(b.fraction); c != 0) return c <=> 0;
  return std::strong_ordering::equal;
}

}  // namespace

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (!digits_only(s)) return false;
  return s == "0" || s.front() != '0';
}

bool is_decimal_literal(std::string_view s) {
  auto dot = s.find('.');
  if (dot == std::string_view::npos) return is_integer_literal(s);
  return is_integer_literal(s.substr(0, dot)) && digits_only(s.substr(dot + 1));
}

std::strong_ordering compare_decimal(std::string_view a, std::string_view b) {
  DecimalParts pa = split_decimal(a);
  DecimalParts pb = split_decimal(b);
  if (pa.negative != pb.negative) return pa.negative ? std::strong_ordering::less : std::strong_ordering::greater;
  auto mag = compare_magnitude(pa, pb);
  if (pa.negative) return 0 <=> mag;
  return mag;
}

bool is_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  if (!digits_only(s.substr(0, 4)) || !digits_only(s.substr(5, 2)) || !digits_only(s.substr(8, 2))) return false;
  int y = std::stoi(std::string(s.substr(0, 4)));
  unsigned m = static_cast<unsigned>(std::stoi(std::string(s.substr(5, 2))));
  unsigned d = static_cast<unsigned>(std::stoi(std::string(s.substr(8, 2))));
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}.ok();
}

// ---------------------------------------------------------------------------
// ParamValue
// ---------------------------------------------------------------------------

ParamValue ParamValue::text(std::string s) {
  ParamValue v;
  v.kind_ = Kind::text;
  v.literal_ = std::move(s);
  return v;
}

ParamValue ParamValue::integer(std::string literal) {
  ParamValue v;
  v.kind_ = Kind::integer;
  v.literal_ = std::move(literal);
  return v;
}

ParamValue ParamValue::decimal(std::string literal) {
  ParamValue v;
  v.kind_ = Kind::decimal;
  v.literal_ = std::move(literal);
  return v;
}

ParamValue ParamValue::date(std::string iso) {
  ParamValue v;
  v.kind_ = Kind::date;
  v.literal_ = std::move(iso);
  return v;
}

ParamValue ParamValue::boolean(bool b) {
  ParamValue v;
  v.kind_ = Kind::boolean;
  v.boolean_ = b;
  return v;
}

ParamValue ParamValue::list(std::vector<ParamValue> items) {
  ParamValue v;
  v.kind_ = Kind::list;
  v.items_ = std::move(items);
  return v;
}

std::string_view to_string(ParamValue::Kind k) {
  switch (k) {
    case ParamValue::Kind::text: return "text";
    case ParamValue::Kind::integer: return "integer";
    case ParamValue::Kind::decimal: return "decimal";
    case ParamValue::Kind::date: return "date";
    case ParamValue::Kind::boolean: return "boolean";
    case ParamValue::Kind::list: return "list";
  }
  return "text";
}

bool numerically_equal(const ParamValue& a, const ParamValue& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ParamValue::Kind::integer:
    case ParamValue::Kind::decimal:
      if (is_decimal_literal(a.literal()) && is_decimal_literal(b.literal())) {
        return compare_decimal(a.literal(), b.literal()) == 0;
      }
      return a.literal() == b.literal();
    case ParamValue::Kind::list:
      if (a.items().size() != b.items().size()) return false;
      for (std::size_t i = 0; i < a.items().size(); ++i) {
        if (!numerically_equal(a.items()[i], b.items()[i])) return false;
      }
      return true;
    default:
      return a == b;
  }
}

std::string to_literal(const ParamValue& v) {
  switch (v.kind()) {
    case ParamValue::Kind::boolean: return v.as_bool() ? "true" : "false";
    case ParamValue::Kind::list: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& item : v.items()) arr.push_back(to_literal(item));
      return arr.dump();
    }
    default: return v.literal();
  }
}

std::optional<ParamValue> value_from_literal(const TypeRef& resolved, std::string_view literal) {
  if (resolved.form() == TypeRef::Form::list_of) {
    nlohmann::json arr = nlohmann::json::parse(literal, nullptr, false);
    if (arr.is_discarded() || !arr.is_array()) return std::nullopt;
    std::vector<ParamValue> items;
    for (const auto& e : arr) {
      if (!e.is_string()) return std::nullopt;
      auto item = value_from_literal(resolved.element(), e.get<std::string>());
      if (!item) return std::nullopt;
      items.push_back(std::move(*item));
    }
    return ParamValue::list(std::move(items));
  }
  if (resolved.form() == TypeRef::Form::named) return std::nullopt;
  std::string s(literal);
  switch (resolved.builtin_kind()) {
    case BuiltinType::text: return ParamValue::text(std::move(s));
    case BuiltinType::integer: return ParamValue::integer(std::move(s));
    case BuiltinType::decimal: return ParamValue::decimal(std::move(s));
    case BuiltinType::date: return ParamValue::date(std::move(s));
    case BuiltinType::boolean:
      if (s == "true") return ParamValue::boolean(true);
      if (s == "false") return ParamValue::boolean(false);
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

bool Parameter::is_execution() const {
  auto it = attributes.find("execution");
  return it != attributes.end() && it->second == "true";
}

Parameter bound_parameter(std::string name, TypeRef type, ParamValue value, Attributes attrs) {
  return Parameter{std::move(name), std::move(type), std::move(value), Bound{}, std::move(attrs)};
}

Parameter unbound_parameter(std::string name, TypeRef type) {
  return Parameter{std::move(name), std::move(type), std::nullopt, Unbound{}, {}};
}

Parameter located_parameter(std::string name, TypeRef type, DocumentId target_doc, std::string target_name) {
  return Parameter{std::move(name), std::move(type), std::nullopt,
                   BindingLocation{std::move(target_doc), std::move(target_name)}, {}};
}

std::string status_name(const ParamStatus& s) {
  if (std::holds_alternative<Bound>(s)) return "bound";
  if (std::holds_alternative<Unbound>(s)) return "unbound";
  const auto& loc = std::get<BindingLocation>(s);
  return "binding-location:" + to_string(loc.doc) + "/" + loc.name;
}

const Parameter* ParameterSet::find(const std::string& name) const {
  for (const auto& p : entries) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

bool ParameterSet::operator==(const ParameterSet& other) const {
  return owner == other.owner && entries.size() == other.entries.size() &&
         std::is_permutation(entries.begin(), entries.end(), other.entries.begin());
}

}  // namespace sla
