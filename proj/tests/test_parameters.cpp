#include "doctest.h"
#include "sla/format.hpp"
#include "sla/parameters.hpp"
#include "support/fixtures.hpp"

using namespace sla;

namespace {

const DocumentId kD = DocumentId::local("d");

SmartLegalAgreement one_doc(NodeSequence root) {
  SmartLegalAgreement a;
  a.documents.push_back(ProseDocument{kD, std::move(root)});
  return a;
}

template <typename F>
std::string code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("identify_parameters in document order, duplicates kept") {
  ProseDocument none{kD, {text("no params")}};
  CHECK(identify_parameters(none).empty());

  ProseDocument two{kD,
                    {span({Markup::parameter("notional")}, {text("1m")}), text(" at "),
                     span({Markup::parameter("rate")}, {text("4.5")})}};
  auto occ = identify_parameters(two);
  REQUIRE(occ.size() == 2);
  CHECK(occ[0].param_id == "notional");
  CHECK(occ[1].param_id == "rate");
  CHECK(occ[0].locator.path == NodePath{0});
  CHECK(occ[1].locator.path == NodePath{2});

  ProseDocument same{kD, {span({Markup::parameter("x")}, {text("a")}), span({Markup::parameter("x")}, {text("b")})}};
  auto dup = identify_parameters(same);
  REQUIRE(dup.size() == 2);
  CHECK(dup[0].param_id == dup[1].param_id);
}

TEST_CASE("placement: empty agreement is clean under every policy") {
  SmartLegalAgreement a;
  for (auto p : {PlacementPolicy::prose_only, PlacementPolicy::element_only, PlacementPolicy::dual})
    CHECK(validate_placement(a, p).empty());
}

TEST_CASE("placement: dangling markup under dual") {
  auto a = one_doc({span({Markup::parameter("p1")}, {text("v")})});
  auto r = validate_placement(a, PlacementPolicy::dual);
  REQUIRE(r.size() == 1);
  CHECK(r.items()[0].code == "DANGLING_PARAM_REF");
}

TEST_CASE("placement: markup forbidden under element-only") {
  auto a = one_doc({span({Markup::parameter("p1")}, {text("v")})});
  auto r = validate_placement(a, PlacementPolicy::element_only);
  REQUIRE(r.size() == 1);
  CHECK(r.items()[0].code == "PARAM_IN_PROSE_FORBIDDEN");
}

TEST_CASE("sync dual: consistent agreement is a fixpoint") {
  auto a = one_doc({span({Markup::parameter("rate")}, {text("4.5")})});
  a.ensure_parameter_set(kD).entries = {bound_parameter("rate", TypeRef::builtin(BuiltinType::decimal), ParamValue::decimal("4.5"))};
  CHECK(sync_parameters(a, PlacementPolicy::dual) == a);
}

TEST_CASE("sync dual: missing entry is created as unbound text") {
  auto a = one_doc({span({Markup::parameter("rate")}, {text("4.5")})});
  auto s = sync_parameters(a, PlacementPolicy::dual);
  const ParameterSet* set = s.parameter_set_for(kD);
  REQUIRE(set);
  const Parameter* p = set->find("rate");
  REQUIRE(p);
  CHECK(p->type == TypeRef::builtin(BuiltinType::text));
  CHECK(std::holds_alternative<Unbound>(p->status));
  CHECK_FALSE(p->value);
  CHECK(validate_placement(s, PlacementPolicy::dual).empty());
}

TEST_CASE("sync dual: attribute value disagreeing with the entry conflicts") {
  auto a = one_doc({span({Markup::parameter("rate", {{"value", "4.5"}, {"type", "decimal"}})}, {text("4.5")})});
  a.ensure_parameter_set(kD).entries = {bound_parameter("rate", TypeRef::builtin(BuiltinType::decimal), ParamValue::decimal("4.6"))};
  CHECK(code_of([&] { sync_parameters(a, PlacementPolicy::dual); }) == "CONFLICTING_VALUES");
}

TEST_CASE("sync prose-only folds entries into markup and back") {
  auto a = one_doc({span({Markup::parameter("rate")}, {text("4.5")})});
  a.ensure_parameter_set(kD).entries = {bound_parameter("rate", TypeRef::builtin(BuiltinType::decimal), ParamValue::decimal("4.5"))};
  auto prose = sync_parameters(a, PlacementPolicy::prose_only);
  CHECK(prose.parameter_sets.empty());
  CHECK(validate_placement(prose, PlacementPolicy::prose_only).empty());
  auto back = sync_parameters(prose, PlacementPolicy::dual);
  CHECK(back == a);
}

TEST_CASE("sync element-only strips markup and keeps entries") {
  auto a = one_doc({text("at "), span({Markup::parameter("rate")}, {text("4.5")}), text(" pa")});
  a.ensure_parameter_set(kD).entries = {bound_parameter("rate", TypeRef::builtin(BuiltinType::decimal), ParamValue::decimal("4.5"))};
  auto e = sync_parameters(a, PlacementPolicy::element_only);
  CHECK(identify_parameters(e.documents[0]).empty());
  CHECK(plain_text(e.documents[0].root) == "at 4.5 pa");
  CHECK(e.parameter_set_for(kD)->find("rate"));
  CHECK(validate_placement(e, PlacementPolicy::element_only).empty());
}

TEST_CASE("typecheck") {
  CHECK(typecheck_parameter(bound_parameter("x", TypeRef::builtin(BuiltinType::integer), ParamValue::integer("17")), {}).empty());
  auto bad_date = typecheck_parameter(bound_parameter("d", TypeRef::builtin(BuiltinType::date), ParamValue::date("2017-02-30")), {});
  CHECK(bad_date.contains("VALUE_TYPE_MISMATCH"));
  CHECK(typecheck_parameter(bound_parameter("d", TypeRef::builtin(BuiltinType::date), ParamValue::date("2016-02-29")), {}).empty());
  CHECK(typecheck_parameter(bound_parameter("d", TypeRef::builtin(BuiltinType::date), ParamValue::date("2100-02-29")), {})
            .contains("VALUE_TYPE_MISMATCH"));

  std::vector<TypeDef> defs = {{"Percentage", TypeRef::builtin(BuiltinType::decimal), NumericRange{"0", "100"}}};
  auto over = typecheck_parameter(bound_parameter("p", TypeRef::named("Percentage"), ParamValue::decimal("150")), defs);
  CHECK(over.contains("CONSTRAINT_VIOLATION"));
  CHECK(typecheck_parameter(bound_parameter("p", TypeRef::named("Percentage"), ParamValue::decimal("99.5")), defs).empty());
  CHECK(typecheck_parameter(bound_parameter("p", TypeRef::named("Nope"), ParamValue::decimal("1")), defs).contains("UNKNOWN_TYPE"));
}

TEST_CASE("typedef cycles are rejected and resolution terminates") {
  std::vector<TypeDef> defs = {{"A", TypeRef::named("B"), std::monostate{}}, {"B", TypeRef::named("A"), std::monostate{}}};
  CHECK(check_type_definitions(defs).contains("TYPE_CYCLE"));
  CHECK_FALSE(resolve_type(TypeRef::named("A"), defs));
}

TEST_CASE("pattern constraint") {
  std::vector<TypeDef> defs = {{"Iso", TypeRef::builtin(BuiltinType::text), std::string("[A-Z]{3}")}};
  CHECK(typecheck_parameter(bound_parameter("c", TypeRef::named("Iso"), ParamValue::text("GBP")), defs).empty());
  CHECK(typecheck_parameter(bound_parameter("c", TypeRef::named("Iso"), ParamValue::text("gbp")), defs)
            .contains("CONSTRAINT_VIOLATION"));
}

TEST_CASE("binding: master defers to schedule, confirmation refers by name") {
  auto a = fixtures::msc_unsealed();
  auto res = resolve_bindings(binding_inputs(a));
  CHECK(res.errors.empty());
  for (const auto& doc : {fixtures::kMaster, fixtures::kSchedule, fixtures::kConfirmation}) {
    const ResolvedBinding* b = res.environment.find({doc, "rate"});
    REQUIRE(b);
    CHECK(b->value == ParamValue::decimal("4.5"));
    CHECK(b->provenance == fixtures::kSchedule);
  }
}

TEST_CASE("binding: single document all bound resolves to itself") {
  ParameterSet s{kD, {bound_parameter("a", TypeRef::builtin(BuiltinType::integer), ParamValue::integer("1")),
                      bound_parameter("b", TypeRef::builtin(BuiltinType::text), ParamValue::text("x"))}};
  auto res = resolve_bindings({{kD, s}});
  CHECK(res.errors.empty());
  REQUIRE(res.environment.bindings.size() == 2);
  CHECK(res.environment.find({kD, "a"})->value == ParamValue::integer("1"));
  CHECK(res.environment.find({kD, "b"})->provenance == kD);
}

TEST_CASE("binding: location cycle") {
  DocumentId A = DocumentId::local("A"), B = DocumentId::local("B");
  ParameterSet sa{A, {located_parameter("x", TypeRef::builtin(BuiltinType::text), B, "x")}};
  ParameterSet sb{B, {located_parameter("x", TypeRef::builtin(BuiltinType::text), A, "x")}};
  auto res = resolve_bindings({{A, sa}, {B, sb}});
  REQUIRE(res.errors.size() == 2);
  CHECK(res.errors[0].code == "BINDING_CYCLE");
  CHECK(res.errors[1].code == "BINDING_CYCLE");
}

TEST_CASE("binding: ambiguous and unbound") {
  DocumentId A = DocumentId::local("A"), B = DocumentId::local("B"), C = DocumentId::local("C");
  ParameterSet sa{A, {bound_parameter("x", TypeRef::builtin(BuiltinType::integer), ParamValue::integer("1"))}};
  ParameterSet sb{B, {bound_parameter("x", TypeRef::builtin(BuiltinType::integer), ParamValue::integer("2"))}};
  ParameterSet sc{C, {unbound_parameter("x"), unbound_parameter("y")}};
  auto res = resolve_bindings({{A, sa}, {B, sb}, {C, sc}});
  REQUIRE(res.errors.size() == 2);
  CHECK(res.errors[0].code == "AMBIGUOUS_BINDING");
  CHECK(res.errors[1].code == "UNBOUND_AT_RESOLUTION");
}

TEST_CASE("execution parameters: hash only") {
  auto a = seal(one_doc({text("nothing to see")}));
  auto params = collect_execution_parameters(a, {});
  REQUIRE(params.size() == 1);
  CHECK(params[0].name == "agreement_hash");
  CHECK(params[0].value == ParamValue::text(hash_agreement(a).hex));
}

TEST_CASE("execution parameters: sorted names then the hash") {
  auto a = one_doc({span({Markup::parameter("rate", {{"execution", "true"}})}, {text("4.5")}),
                    span({Markup::parameter("notional", {{"execution", "true"}})}, {text("1000000")})});
  a.ensure_parameter_set(kD).entries = {
      bound_parameter("rate", TypeRef::builtin(BuiltinType::decimal), ParamValue::decimal("4.5")),
      bound_parameter("notional", TypeRef::builtin(BuiltinType::integer), ParamValue::integer("1000000"))};
  a = seal(a);
  auto env = resolve_bindings(binding_inputs(a)).environment;
  auto params = collect_execution_parameters(a, env);
  REQUIRE(params.size() == 3);
  CHECK(params[0].name == "notional");
  CHECK(params[0].value == ParamValue::integer("1000000"));
  CHECK(params[1].name == "rate");
  CHECK(params[2].name == "agreement_hash");
  // Oracle: digest of the canonical bytes with the stored hash removed.
  SmartLegalAgreement stripped = a;
  for (auto& h : stripped.headers) h.agreement_hash.reset();
  CHECK(params[2].value == ParamValue::text(sha256_hex(serialize(stripped))));
}

TEST_CASE("execution parameters: unresolved names are listed") {
  auto a = one_doc({span({Markup::parameter("termination_date", {{"execution", "true"}})}, {text("TBD")})});
  a.ensure_parameter_set(kD).entries = {unbound_parameter("termination_date", TypeRef::builtin(BuiltinType::date))};
  a.ensure_parameter_set(kD).entries[0].attributes["execution"] = "true";
  a = seal(a);
  try {
    collect_execution_parameters(a, resolve_bindings(binding_inputs(a)).environment);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == "UNRESOLVED_PARAMS");
    CHECK(std::string(e.what()).find("[termination_date]") != std::string::npos);
  }
}

TEST_CASE("execution parameters need a hash") {
  auto a = one_doc({text("x")});
  CHECK(code_of([&] { collect_execution_parameters(a, {}); }) == "HASH_MISSING");
}

TEST_CASE("other data registration") {
  auto a = one_doc({text("Law: "), span({Markup::other_data("governing_law")}, {text("England and Wales")}),
                    span({Markup::bold()}, {text("bold")})});
  Locator loc{kD, {1}, std::nullopt};
  auto r = register_other_data(a, loc, "governing_law");
  const AgreementHeader* h = r.header_for(kD);
  REQUIRE(h);
  REQUIRE(h->other_data.size() == 1);
  CHECK(h->other_data[0].name == "governing_law");
  CHECK(h->other_data[0].value == "England and Wales");
  CHECK(h->other_data[0].locator == loc);

  CHECK(register_other_data(r, loc, "governing_law") == r);
  CHECK(code_of([&] { register_other_data(a, Locator{kD, {2}, std::nullopt}, "x"); }) == "NOT_OTHER_DATA_SPAN");
  CHECK(code_of([&] { register_other_data(a, Locator{kD, {9}, std::nullopt}, "x"); }) == "LOCATOR_INVALID");
}
