#include "sla/parameters.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "remap.hpp"
#include "unicode.hpp"

namespace sla {

std::vector<ParameterOccurrence> identify_parameters(const ProseDocument& doc) {
  std::vector<ParameterOccurrence> out;
  for_each_node(doc, [&](const ProseNode& n, const NodePath& p) {
    if (auto* s = n.as<MarkedSpan>()) {
      for (const auto& m : s->markups) {
        if (m.is(DescriptiveKind::parameter)) out.push_back({m.descriptive_if()->id, Locator{doc.id, p, std::nullopt}});
      }
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

namespace {

const TypeDef* find_def(const std::vector<TypeDef>& defs, const std::string& id) {
  for (const auto& d : defs)
    if (d.id == id) return &d;
  return nullptr;
}

std::optional<TypeRef> resolve_type_guarded(const TypeRef& t, const std::vector<TypeDef>& defs,
                                            std::set<std::string>& seen) {
  switch (t.form()) {
    case TypeRef::Form::builtin: return t;
    case TypeRef::Form::list_of: {
      auto e = resolve_type_guarded(t.element(), defs, seen);
      if (!e) return std::nullopt;
      return TypeRef::list_of(*e);
    }
    case TypeRef::Form::named: {
      if (!seen.insert(t.name()).second) return std::nullopt;
      const TypeDef* d = find_def(defs, t.name());
      if (!d) return std::nullopt;
      auto r = resolve_type_guarded(d->base, defs, seen);
      seen.erase(t.name());
      return r;
    }
  }
  return std::nullopt;
}

bool numeric_kind(ParamValue::Kind k) { return k == ParamValue::Kind::integer || k == ParamValue::Kind::decimal; }

void check_value(const ParamValue& v, const TypeRef& t, const std::vector<TypeDef>& defs, const std::string& name,
                 ValidationReport& report, int depth) {
  if (depth > static_cast<int>(defs.size()) + 1) {
    report.add("TYPE_CYCLE", "", name, "type definitions are cyclic");
    return;
  }
  auto mismatch = [&](const std::string& what) {
    report.add("VALUE_TYPE_MISMATCH", "", name, what + " does not match type " + to_string(t));
  };
  switch (t.form()) {
    case TypeRef::Form::builtin: {
      using K = ParamValue::Kind;
      switch (t.builtin_kind()) {
        case BuiltinType::text:
          if (v.kind() != K::text) mismatch(std::string(to_string(v.kind())) + " value");
          break;
        case BuiltinType::integer:
          if (v.kind() != K::integer || !is_integer_literal(v.literal())) mismatch("'" + to_literal(v) + "'");
          break;
        case BuiltinType::decimal:
          if (v.kind() != K::decimal || !is_decimal_literal(v.literal())) mismatch("'" + to_literal(v) + "'");
          break;
        case BuiltinType::date:
          if (v.kind() != K::date || !is_iso_date(v.literal())) mismatch("'" + to_literal(v) + "'");
          break;
        case BuiltinType::boolean:
          if (v.kind() != K::boolean) mismatch(std::string(to_string(v.kind())) + " value");
          break;
      }
      return;
    }
    case TypeRef::Form::list_of:
      if (v.kind() != ParamValue::Kind::list) {
        mismatch(std::string(to_string(v.kind())) + " value");
        return;
      }
      for (const auto& item : v.items()) check_value(item, t.element(), defs, name, report, depth + 1);
      return;
    case TypeRef::Form::named: {
      const TypeDef* d = find_def(defs, t.name());
      if (!d) {
        report.add("UNKNOWN_TYPE", "", name, "no definition for type '" + t.name() + "'");
        return;
      }
      std::size_t before = report.size();
      check_value(v, d->base, defs, name, report, depth + 1);
      if (report.size() != before) return;
      if (auto* pattern = std::get_if<std::string>(&d->constraint)) {
        if (v.kind() == ParamValue::Kind::text) {
          try {
            if (!std::regex_match(v.literal(), std::regex(*pattern, std::regex::ECMAScript))) {
              report.add("CONSTRAINT_VIOLATION", "", name, "'" + v.literal() + "' does not match " + t.name());
            }
          } catch (const std::regex_error&) {
            report.add("INVALID_PATTERN", "", name, "pattern of " + t.name() + " does not compile");
          }
        }
      } else if (auto* range = std::get_if<NumericRange>(&d->constraint)) {
        if (numeric_kind(v.kind()) && is_decimal_literal(v.literal())) {
          bool low = range->min && is_decimal_literal(*range->min) && compare_decimal(v.literal(), *range->min) < 0;
          bool high = range->max && is_decimal_literal(*range->max) && compare_decimal(v.literal(), *range->max) > 0;
          if (low || high) {
            report.add("CONSTRAINT_VIOLATION", "", name, v.literal() + " is outside the range of " + t.name());
          }
        }
      }
      return;
    }
  }
}

bool references_known(const TypeRef& t, const std::vector<TypeDef>& defs, std::string& missing) {
  switch (t.form()) {
    case TypeRef::Form::builtin: return true;
    case TypeRef::Form::list_of: return references_known(t.element(), defs, missing);
    case TypeRef::Form::named:
      if (find_def(defs, t.name())) return true;
      missing = t.name();
      return false;
  }
  return true;
}

}  // namespace

std::optional<TypeRef> resolve_type(const TypeRef& t, const std::vector<TypeDef>& defs) {
  std::set<std::string> seen;
  return resolve_type_guarded(t, defs, seen);
}

ValidationReport check_type_definitions(const std::vector<TypeDef>& defs) {
  ValidationReport report;
  std::set<std::string> ids;
  for (const auto& d : defs) {
    if (d.id.empty()) report.add("INVALID_TYPEDEF", "", "", "type definition without id");
    if (builtin_type_from(d.id)) report.add("INVALID_TYPEDEF", "", d.id, "type id shadows a builtin type");
    if (!ids.insert(d.id).second) report.add("DUPLICATE_TYPEDEF", "", d.id, "type defined twice");
    std::string missing;
    if (!references_known(d.base, defs, missing)) {
      report.add("UNKNOWN_TYPE", "", d.id, "base type '" + missing + "' is not defined");
      continue;
    }
    auto resolved = resolve_type(TypeRef::named(d.id), defs);
    if (!resolved) {
      report.add("TYPE_CYCLE", "", d.id, "type definition refers back to itself");
      continue;
    }
    bool text_base = resolved->form() == TypeRef::Form::builtin && resolved->builtin_kind() == BuiltinType::text;
    bool numeric_base = resolved->form() == TypeRef::Form::builtin &&
                        (resolved->builtin_kind() == BuiltinType::integer || resolved->builtin_kind() == BuiltinType::decimal);
    if (auto* pattern = std::get_if<std::string>(&d.constraint)) {
      if (!text_base) report.add("CONSTRAINT_BASE_MISMATCH", "", d.id, "patterns apply to text types only");
      try {
        std::regex compiled(*pattern, std::regex::ECMAScript);
      } catch (const std::regex_error&) {
        report.add("INVALID_PATTERN", "", d.id, "pattern does not compile");
      }
    } else if (auto* range = std::get_if<NumericRange>(&d.constraint)) {
      if (!numeric_base) report.add("CONSTRAINT_BASE_MISMATCH", "", d.id, "ranges apply to numeric types only");
      bool bad = (range->min && !is_decimal_literal(*range->min)) || (range->max && !is_decimal_literal(*range->max));
      if (bad) {
        report.add("INVALID_RANGE", "", d.id, "range bounds must be decimal literals");
      } else if (range->min && range->max && compare_decimal(*range->min, *range->max) > 0) {
        report.add("INVALID_RANGE", "", d.id, "range minimum exceeds maximum");
      }
    }
  }
  return report;
}

ValidationReport typecheck_parameter(const Parameter& p, const std::vector<TypeDef>& defs) {
  ValidationReport report;
  if (p.name.empty()) report.add("MISSING_IDENTIFIER", "", "", "parameter without name");
  std::string missing;
  if (!references_known(p.type, defs, missing)) {
    report.add("UNKNOWN_TYPE", "", p.name, "type '" + missing + "' is not defined");
    return report;
  }
  if (p.is_bound()) {
    if (!p.value) {
      report.add("MISSING_VALUE", "", p.name, "bound parameter has no value");
    } else {
      check_value(*p.value, p.type, defs, p.name, report, 0);
    }
  } else if (p.value) {
    report.add("UNEXPECTED_VALUE", "", p.name, status_name(p.status) + " parameter carries a value");
  }
  if (auto* loc = std::get_if<BindingLocation>(&p.status)) {
    if (loc->name.empty() || loc->doc.value.empty()) {
      report.add("DANGLING_LOCATION", "", p.name, "binding location is incomplete");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Synchronisation
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kTypeAttr = "type";
constexpr const char* kValueAttr = "value";
constexpr const char* kStatusAttr = "status";
constexpr const char* kTargetDocAttr = "target-doc";
constexpr const char* kTargetScopeAttr = "target-scope";
constexpr const char* kTargetNameAttr = "target-name";

bool is_folded_attr(const std::string& k) {
  return k == kTypeAttr || k == kValueAttr || k == kStatusAttr || k == kTargetDocAttr || k == kTargetScopeAttr ||
         k == kTargetNameAttr;
}

Attributes fold_entry(const Parameter& p) {
  Attributes a = p.attributes;
  a[kTypeAttr] = to_string(p.type);
  if (p.value) a[kValueAttr] = to_literal(*p.value);
  if (std::holds_alternative<Bound>(p.status)) {
    a[kStatusAttr] = "bound";
  } else if (std::holds_alternative<Unbound>(p.status)) {
    a[kStatusAttr] = "unbound";
  } else {
    const auto& loc = std::get<BindingLocation>(p.status);
    a[kStatusAttr] = "binding-location";
    a[kTargetDocAttr] = loc.doc.value;
    if (loc.doc.scope == IdScope::global) a[kTargetScopeAttr] = "global";
    a[kTargetNameAttr] = loc.name;
  }
  return a;
}

std::optional<ParamValue> attribute_value(const Attributes& attrs, const TypeRef& type,
                                          const std::vector<TypeDef>& defs, const std::string& name) {
  auto it = attrs.find(kValueAttr);
  if (it == attrs.end()) return std::nullopt;
  auto resolved = resolve_type(type, defs);
  if (!resolved) throw Error("UNKNOWN_TYPE", "parameter " + name + " uses an undefined type");
  auto v = value_from_literal(*resolved, it->second);
  if (!v) throw Error("VALUE_TYPE_MISMATCH", "parameter " + name + " value '" + it->second + "' is not a " + to_string(type));
  return v;
}

TypeRef attribute_type(const Attributes& attrs, const std::string& name) {
  auto it = attrs.find(kTypeAttr);
  if (it == attrs.end()) return TypeRef::builtin(BuiltinType::text);
  auto t = type_ref_from(it->second);
  if (!t) throw Error("UNKNOWN_TYPE", "parameter " + name + " has unreadable type '" + it->second + "'");
  return *t;
}

// Entry described by self-contained markup attributes.
Parameter entry_from_attributes(const std::string& name, const Attributes& attrs, const std::vector<TypeDef>& defs) {
  Parameter p;
  p.name = name;
  p.type = attribute_type(attrs, name);
  p.value = attribute_value(attrs, p.type, defs, name);
  auto status = attrs.find(kStatusAttr);
  std::string s = status == attrs.end() ? (p.value ? "bound" : "unbound") : status->second;
  if (s == "bound" && p.value) {
    p.status = Bound{};
  } else if (s == "binding-location") {
    auto doc = attrs.find(kTargetDocAttr);
    auto target = attrs.find(kTargetNameAttr);
    auto scope = attrs.find(kTargetScopeAttr);
    DocumentId id{scope != attrs.end() && scope->second == "global" ? IdScope::global : IdScope::local,
                  doc == attrs.end() ? std::string{} : doc->second};
    p.status = BindingLocation{id, target == attrs.end() ? std::string{} : target->second};
    p.value.reset();
  } else {
    p.status = Unbound{};
    p.value.reset();
  }
  for (const auto& [k, v] : attrs) {
    if (!is_folded_attr(k)) p.attributes[k] = v;
  }
  return p;
}

Parameter* find_mut(SmartLegalAgreement& a, const std::optional<DocumentId>& owner, const std::string& name) {
  for (auto& set : a.parameter_sets) {
    if (set.owner != owner) continue;
    for (auto& p : set.entries)
      if (p.name == name) return &p;
  }
  return nullptr;
}

// Entry a markup in `doc` refers to: the document's own set first, then the
// agreement-level set.
Parameter* entry_for(SmartLegalAgreement& a, const DocumentId& doc, const std::string& name) {
  if (auto* p = find_mut(a, doc, name)) return p;
  return find_mut(a, std::nullopt, name);
}

template <typename F>
void for_each_span_mut(NodeSequence& seq, F&& fn) {
  for (auto& n : seq) {
    if (auto* s = n.as<MarkedSpan>()) {
      fn(*s);
      for_each_span_mut(s->children, fn);
    } else if (auto* l = n.as<ListBlock>()) {
      for (auto& item : l->items) for_each_span_mut(item, fn);
    } else if (auto* t = n.as<TableBlock>()) {
      for (auto& row : t->rows)
        for (auto& cell : row) for_each_span_mut(cell, fn);
    } else if (auto* c = n.as<ChoiceBlock>()) {
      for (auto& opt : c->options) for_each_span_mut(opt, fn);
    }
  }
}

NodePath child_path(const NodePath& prefix, std::size_t i) {
  NodePath p = prefix;
  p.push_back(i);
  return p;
}

// Copies `seq` into `out` without parameter markup, splicing out spans left
// without markups. Records where every old node went.
void strip_into(const NodeSequence& seq, const NodePath& old_prefix, const NodePath& new_prefix, NodeSequence& out,
                detail::PathMap& map) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    NodePath old_path = child_path(old_prefix, i);
    const ProseNode& n = seq[i];
    if (auto* s = n.as<MarkedSpan>()) {
      MarkedSpan copy;
      for (const auto& m : s->markups)
        if (!m.is(DescriptiveKind::parameter)) copy.markups.push_back(m);
      if (copy.markups.empty()) {
        map[old_path] = detail::Moved{{}, std::nullopt, true};
        strip_into(s->children, old_path, new_prefix, out, map);
        continue;
      }
      NodePath new_path = child_path(new_prefix, out.size());
      map[old_path] = detail::Moved{new_path, std::nullopt, false};
      strip_into(s->children, old_path, new_path, copy.children, map);
      out.push_back(ProseNode{std::move(copy)});
      continue;
    }
    NodePath new_path = child_path(new_prefix, out.size());
    map[old_path] = detail::Moved{new_path, std::nullopt, false};
    ProseNode copy = n;
    if (auto* l = copy.as<ListBlock>()) {
      for (std::size_t k = 0; k < l->items.size(); ++k) {
        NodeSequence item;
        strip_into(n.as<ListBlock>()->items[k], child_path(old_path, k), child_path(new_path, k), item, map);
        l->items[k] = std::move(item);
      }
    } else if (auto* t = copy.as<TableBlock>()) {
      const auto& rows = n.as<TableBlock>()->rows;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
          NodeSequence cell;
          strip_into(rows[r][c], child_path(child_path(old_path, r), c), child_path(child_path(new_path, r), c), cell, map);
          t->rows[r][c] = std::move(cell);
        }
      }
    } else if (auto* ch = copy.as<ChoiceBlock>()) {
      for (std::size_t k = 0; k < ch->options.size(); ++k) {
        NodeSequence opt;
        strip_into(n.as<ChoiceBlock>()->options[k], child_path(old_path, k), child_path(new_path, k), opt, map);
        ch->options[k] = std::move(opt);
      }
    }
    out.push_back(std::move(copy));
  }
}

SmartLegalAgreement sync_prose_only(SmartLegalAgreement a) {
  for (auto& d : a.documents) {
    for_each_span_mut(d.root, [&](MarkedSpan& s) {
      for (auto& m : s.markups) {
        if (!m.is(DescriptiveKind::parameter)) continue;
        auto& desc = std::get<Descriptive>(m.value);
        if (const Parameter* p = entry_for(a, d.id, desc.id)) {
          Attributes folded = fold_entry(*p);
          for (const auto& [k, v] : desc.attributes) folded.try_emplace(k, v);
          desc.attributes = std::move(folded);
        }
      }
    });
  }
  a.parameter_sets.clear();
  return a;
}

SmartLegalAgreement sync_element_only(SmartLegalAgreement a) {
  const auto defs = visible_type_definitions(a);
  for (auto& d : a.documents) {
    for (const auto& occ : identify_parameters(d)) {
      if (entry_for(a, d.id, occ.param_id)) continue;
      const auto* m = span_at(d, occ.locator.path);
      Attributes attrs;
      for (const auto& mk : m->markups)
        if (mk.is(DescriptiveKind::parameter, occ.param_id)) attrs = mk.descriptive_if()->attributes;
      a.ensure_parameter_set(d.id).entries.push_back(entry_from_attributes(occ.param_id, attrs, defs));
    }
  }
  for (std::size_t i = 0; i < a.documents.size(); ++i) {
    detail::PathMap map;
    NodeSequence root;
    strip_into(a.documents[i].root, {}, {}, root, map);
    a.documents[i].root = std::move(root);
    detail::remap_agreement(a, a.documents[i].id, map);
  }
  return a;
}

SmartLegalAgreement sync_dual(SmartLegalAgreement a) {
  const auto defs = visible_type_definitions(a);
  for (auto& d : a.documents) {
    std::vector<std::pair<std::string, Attributes>> found;
    for_each_span_mut(d.root, [&](MarkedSpan& s) {
      for (auto& m : s.markups) {
        if (!m.is(DescriptiveKind::parameter)) continue;
        auto& desc = std::get<Descriptive>(m.value);
        found.emplace_back(desc.id, desc.attributes);
        desc.attributes.clear();
      }
    });
    for (const auto& [name, attrs] : found) {
      Parameter* p = entry_for(a, d.id, name);
      if (!p) {
        a.ensure_parameter_set(d.id).entries.push_back(entry_from_attributes(name, attrs, defs));
        continue;
      }
      if (attrs.count(kTypeAttr) && attribute_type(attrs, name) != p->type) {
        throw Error("CONFLICTING_VALUES", "parameter " + name + ": markup type " + attrs.at(kTypeAttr) +
                                              " differs from entry type " + to_string(p->type));
      }
      if (auto v = attribute_value(attrs, p->type, defs, name)) {
        if (p->value && !numerically_equal(*p->value, *v)) {
          throw Error("CONFLICTING_VALUES", "parameter " + name + ": markup value " + to_literal(*v) +
                                                " differs from entry value " + to_literal(*p->value));
        }
        if (!p->value) {
          if (std::holds_alternative<BindingLocation>(p->status)) {
            throw Error("CONFLICTING_VALUES", "parameter " + name + " is bound elsewhere but markup gives a value");
          }
          p->value = *v;
          p->status = Bound{};
        }
      }
      for (const auto& [k, v] : attrs) {
        if (!is_folded_attr(k)) p->attributes.try_emplace(k, v);
      }
    }
  }
  return a;
}

}  // namespace

SmartLegalAgreement sync_parameters(const SmartLegalAgreement& agreement, PlacementPolicy policy) {
  switch (policy) {
    case PlacementPolicy::prose_only: return sync_prose_only(agreement);
    case PlacementPolicy::element_only: return sync_element_only(agreement);
    case PlacementPolicy::dual: return sync_dual(agreement);
  }
  return agreement;
}

// ---------------------------------------------------------------------------
// Binding resolution
// ---------------------------------------------------------------------------

std::string to_string(const QualifiedName& q) { return to_string(q.doc) + "/" + q.name; }

const ResolvedBinding* ResolvedEnvironment::find(const QualifiedName& q) const {
  auto it = bindings.find(q);
  return it == bindings.end() ? nullptr : &it->second;
}

BindingResolution resolve_bindings(const std::vector<DocumentParameters>& docs) {
  std::map<QualifiedName, const Parameter*> index;
  std::map<std::string, std::vector<QualifiedName>> bound_by_name;
  for (const auto& [doc, set] : docs) {
    for (const auto& p : set.entries) {
      QualifiedName q{doc, p.name};
      index.emplace(q, &p);
      if (p.is_bound() && p.value) bound_by_name[p.name].push_back(q);
    }
  }
  for (auto& [name, list] : bound_by_name) std::sort(list.begin(), list.end());

  BindingResolution result;
  for (const auto& [start, param] : index) {
    std::set<QualifiedName> visited{start};
    QualifiedName cur = start;
    const Parameter* p = param;
    std::optional<BindingError> error;
    while (true) {
      if (p->is_bound()) {
        if (p->value) {
          result.environment.bindings.emplace(start, ResolvedBinding{*p->value, cur.doc});
        } else {
          error = BindingError{"UNBOUND_AT_RESOLUTION", start, "bound entry " + to_string(cur) + " has no value"};
        }
        break;
      }
      if (auto* loc = std::get_if<BindingLocation>(&p->status)) {
        QualifiedName next{loc->doc, loc->name};
        auto it = index.find(next);
        if (it == index.end()) {
          error = BindingError{"DANGLING_LOCATION", start, to_string(cur) + " points at missing " + to_string(next)};
          break;
        }
        if (!visited.insert(next).second) {
          error = BindingError{"BINDING_CYCLE", start, "binding locations loop back to " + to_string(next)};
          break;
        }
        cur = next;
        p = it->second;
        continue;
      }
      // Unbound: the unique value bound under the same name elsewhere.
      std::vector<const QualifiedName*> distinct;
      if (auto it = bound_by_name.find(cur.name); it != bound_by_name.end()) {
        for (const auto& q : it->second) {
          const ParamValue& v = *index.at(q)->value;
          bool seen = std::any_of(distinct.begin(), distinct.end(),
                                  [&](const QualifiedName* d) { return numerically_equal(*index.at(*d)->value, v); });
          if (!seen) distinct.push_back(&q);
        }
      }
      if (distinct.empty()) {
        error = BindingError{"UNBOUND_AT_RESOLUTION", start, "no document binds " + cur.name};
      } else if (distinct.size() > 1) {
        error = BindingError{"AMBIGUOUS_BINDING", start,
                             std::to_string(distinct.size()) + " distinct values are bound for " + cur.name};
      } else {
        result.environment.bindings.emplace(start, ResolvedBinding{*index.at(*distinct[0])->value, distinct[0]->doc});
      }
      break;
    }
    if (error) result.errors.push_back(std::move(*error));
  }
  return result;
}

std::vector<DocumentParameters> binding_inputs(const SmartLegalAgreement& agreement) {
  std::map<DocumentId, ParameterSet> merged;
  for (const auto& s : agreement.parameter_sets) {
    DocumentId owner = s.owner ? *s.owner : agreement_level_owner();
    auto& target = merged[owner];
    target.owner = s.owner;
    target.entries.insert(target.entries.end(), s.entries.begin(), s.entries.end());
  }
  return {merged.begin(), merged.end()};
}

// ---------------------------------------------------------------------------
// Execution parameters
// ---------------------------------------------------------------------------

std::vector<ExecutionParameter> collect_execution_parameters(const SmartLegalAgreement& agreement,
                                                             const ResolvedEnvironment& env) {
  const AgreementHeader* header = agreement.agreement_header();
  if (!header || !header->agreement_hash) throw Error("HASH_MISSING", "agreement-level header has no agreement hash");
  const auto defs = visible_type_definitions(agreement);

  struct Candidate {
    std::string name;
    TypeRef type;
    std::optional<ParamValue> value;
  };
  std::vector<Candidate> candidates;
  auto from_env = [&](const QualifiedName& q) -> std::optional<ParamValue> {
    if (auto* b = env.find(q)) return b->value;
    return std::nullopt;
  };

  for (const auto& s : agreement.parameter_sets) {
    DocumentId owner = s.owner ? *s.owner : agreement_level_owner();
    for (const auto& p : s.entries) {
      if (!p.is_execution()) continue;
      auto v = from_env({owner, p.name});
      if (!v && p.is_bound()) v = p.value;
      candidates.push_back({p.name, p.type, v});
    }
  }
  for (const auto& d : agreement.documents) {
    for_each_node(d, [&](const ProseNode& n, const NodePath&) {
      auto* s = n.as<MarkedSpan>();
      if (!s) return;
      for (const auto& m : s->markups) {
        if (!m.is(DescriptiveKind::parameter)) continue;
        const auto* desc = m.descriptive_if();
        auto ex = desc->attributes.find("execution");
        if (ex == desc->attributes.end() || ex->second != "true") continue;
        const ParameterSet* own = agreement.parameter_set_for(d.id);
        const ParameterSet* shared = agreement.parameter_set_for(std::nullopt);
        if (own && own->find(desc->id)) {
          const Parameter* p = own->find(desc->id);
          auto v = from_env({d.id, desc->id});
          candidates.push_back({desc->id, p->type, v ? v : (p->is_bound() ? p->value : std::nullopt)});
        } else if (shared && shared->find(desc->id)) {
          const Parameter* p = shared->find(desc->id);
          auto v = from_env({agreement_level_owner(), desc->id});
          candidates.push_back({desc->id, p->type, v ? v : (p->is_bound() ? p->value : std::nullopt)});
        } else {
          TypeRef type = attribute_type(desc->attributes, desc->id);
          auto status = desc->attributes.find(kStatusAttr);
          std::optional<ParamValue> v;
          if (status == desc->attributes.end() || status->second == "bound") {
            v = attribute_value(desc->attributes, type, defs, desc->id);
          }
          candidates.push_back({desc->id, type, v});
        }
      }
    });
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.name < b.name; });
  std::vector<ExecutionParameter> out;
  std::set<std::string> unresolved;
  for (const auto& c : candidates) {
    if (!c.value) {
      unresolved.insert(c.name);
      continue;
    }
    if (!out.empty() && out.back().name == c.name) {
      if (!numerically_equal(out.back().value, *c.value)) {
        throw Error("CONFLICTING_VALUES", "execution parameter " + c.name + " has values " + to_literal(out.back().value) +
                                              " and " + to_literal(*c.value));
      }
      continue;
    }
    out.push_back({c.name, c.type, *c.value});
  }
  std::erase_if(out, [&](const ExecutionParameter& p) { return unresolved.count(p.name) > 0; });
  if (!unresolved.empty()) {
    std::string names;
    for (const auto& n : unresolved) names += (names.empty() ? "" : ", ") + n;
    throw Error("UNRESOLVED_PARAMS", "[" + names + "]");
  }
  out.push_back({std::string(kAgreementHashParameter), TypeRef::builtin(BuiltinType::text),
                 ParamValue::text(header->agreement_hash->hex)});
  return out;
}

// ---------------------------------------------------------------------------
// Other data
// ---------------------------------------------------------------------------

SmartLegalAgreement register_other_data(const SmartLegalAgreement& agreement, const Locator& locator,
                                        const std::string& name, bool sensitive) {
  const ProseDocument* doc = agreement.find_document(locator.doc);
  if (!doc) throw Error("LOCATOR_INVALID", "unknown document " + to_string(locator.doc));
  const ProseNode* node = node_at(*doc, locator.path);
  if (!node) throw Error("LOCATOR_INVALID", "path " + format_path(locator.path) + " does not resolve");
  const auto* s = node->as<MarkedSpan>();
  bool marked =
      s && std::any_of(s->markups.begin(), s->markups.end(), [&](const Markup& m) { return m.is(DescriptiveKind::other_data, name); });
  if (!marked) throw Error("NOT_OTHER_DATA_SPAN", format_path(locator.path) + " is not marked other-data(" + name + ")");

  std::string value = plain_text(s->children);
  if (locator.range) {
    if (locator.range->begin > locator.range->end || locator.range->end > detail::scalar_count(value)) {
      throw Error("LOCATOR_INVALID", "range exceeds the span text");
    }
    value = detail::substr_scalars(value, locator.range->begin, locator.range->end);
  }

  SmartLegalAgreement out = agreement;
  out.ensure_agreement_header();
  AgreementHeader& h = out.ensure_header_for(locator.doc);
  for (const auto& r : h.other_data) {
    if (r.name == name && r.locator == locator) return agreement;
  }
  h.other_data.push_back({name, value, locator, sensitive});
  return out;
}

}  // namespace sla
