#pragma once

#include "sla/agreement.hpp"
#include "sla/crossrefs.hpp"
#include "sla/format.hpp"
#include "sla/parameters.hpp"
#include "sla/prose.hpp"

namespace sla::fixtures {

inline Timestamp at(const char* iso) { return *parse_timestamp(iso); }

inline const DocumentId kMaster = DocumentId::local("master");
inline const DocumentId kSchedule = DocumentId::local("schedule");
inline const DocumentId kConfirmation = DocumentId::local("confirmation");

// Master declares the rate and defers its value to the Schedule; the
// Confirmation only refers to it by name.
inline SmartLegalAgreement msc_unsealed() {
  SmartLegalAgreement a;
  a.documents.push_back(ProseDocument{
      kMaster,
      {part(PartKind::definitions, "Definitions"),
       span({Markup::clause()},
            {text("The Notional Amount is "), span({Markup::parameter("notional")}, {text("1000000")}),
             text(" and interest accrues at the Rate of "), span({Markup::parameter("rate")}, {text("[rate]")}),
             text(" per annum.")}),
       part(PartKind::body, "Terms"),
       span({Markup::clause()}, {text("See the Schedule for the rate.")}),
       text(" Governing law: "), span({Markup::other_data("governing_law")}, {text("England and Wales")})}});
  a.documents.push_back(ProseDocument{
      kSchedule,
      {part(PartKind::schedule, "Schedule 1"), anchor("sched-rate"),
       span({Markup::clause()}, {text("Rate: "), span({Markup::parameter("rate")}, {text("4.5")}), text(" percent.")})}});
  a.documents.push_back(ProseDocument{
      kConfirmation,
      {text("This Confirmation supplements the Master. Trade rate: "), span({Markup::parameter("rate")}, {text("4.5")}),
       text(".")}});

  a.ensure_parameter_set(kMaster).entries = {
      bound_parameter("notional", TypeRef::builtin(BuiltinType::integer), ParamValue::integer("1000000"),
                      {{"execution", "true"}}),
      [] {
        Parameter p = located_parameter("rate", TypeRef::builtin(BuiltinType::decimal), kSchedule, "rate");
        p.attributes["execution"] = "true";
        return p;
      }(),
  };
  a.ensure_parameter_set(kSchedule).entries = {
      bound_parameter("rate", TypeRef::builtin(BuiltinType::decimal), ParamValue::decimal("4.5"))};
  a.ensure_parameter_set(kConfirmation).entries = {unbound_parameter("rate", TypeRef::builtin(BuiltinType::decimal))};

  AgreementHeader& h = a.ensure_agreement_header();
  h.doc_status = DocStatus::signed_;
  h.version = VersionInfo{4, at("2024-05-01T12:00:00Z"), Branch::local};
  h.dates["signing"] = "2024-05-01";
  h.signatures = {{"Party A", at("2024-05-01T11:00:00Z"), "a1b2"}, {"Party B", at("2024-05-01T11:30:00Z"), "c3d4"}};
  h.code_refs = {{"evm", "1.0", std::nullopt}, {"fabric", "2.1", std::nullopt}};

  AgreementHeader& mh = a.ensure_header_for(kMaster);
  mh.doc_type = "master";
  mh.child_ids = {kSchedule, kConfirmation};
  AgreementHeader& sh = a.ensure_header_for(kSchedule);
  sh.doc_type = "schedule";
  sh.parent_ids = {kMaster};
  AgreementHeader& ch = a.ensure_header_for(kConfirmation);
  ch.doc_type = "confirmation";
  ch.parent_ids = {kMaster};

  // Master's "See the Schedule" clause points at the schedule's rate anchor.
  a = add_crossref(a, Locator{kMaster, {3, 0}, TextRange{4, 16}}, AnchorTarget{kSchedule, "sched-rate"}).agreement;
  a = register_other_data(a, Locator{kMaster, {5}, std::nullopt}, "governing_law");
  return a;
}

inline SmartLegalAgreement msc() { return seal(msc_unsealed()); }

inline SmartContract wrap(SmartLegalAgreement a) {
  SmartContract c;
  c.agreements.push_back(std::move(a));
  return c;
}

}  // namespace sla::fixtures
