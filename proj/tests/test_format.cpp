#include <algorithm>

#include "doctest.h"
#include "json.hpp"
#include "sla/format.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"

using namespace sla;

namespace {

// Pinned with Python hashlib over the literal bytes.
constexpr const char* kEmptyAgreementBytes = R"({"documents":[],"headers":[],"parameter_sets":[]})";
constexpr const char* kEmptyAgreementHex = "6ad0816c43f9a1c7d080fc7e2a4f27b3e1f3c7789140f28475f2f249df625a8b";
constexpr const char* kEmptyContractBytes = R"({"agreements":[],"code_refs":[],"format":"sla/1"})";
constexpr const char* kEmptyContractHex = "b0f1a1a8f01eec5d983f40e83770dc4fd83d7d96e6dba8c321941cf50922970f";

template <typename F>
std::string code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

// Reverses key order everywhere but leaves arrays alone.
nlohmann::ordered_json scramble_keys(const nlohmann::ordered_json& j) {
  if (j.is_array()) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& e : j) out.push_back(scramble_keys(e));
    return out;
  }
  if (j.is_object()) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    for (auto k = keys.rbegin(); k != keys.rend(); ++k) out[*k] = scramble_keys(j.at(*k));
    return out;
  }
  return j;
}

ProseDocument one(NodeSequence root) { return ProseDocument{DocumentId::local("d"), std::move(root)}; }

}  // namespace

TEST_CASE("empty contract") {
  SmartContract c = new_smart_contract();
  CHECK(c.agreements.empty());
  CHECK(c.code_refs.empty());
  CHECK(serialize(c) == kEmptyContractBytes);
  CHECK(parse_contract(serialize(c)) == c);
  CHECK(hash_contract(new_smart_contract()) == hash_contract(new_smart_contract()));
  CHECK(hash_contract(c).hex == kEmptyContractHex);
}

TEST_CASE("empty agreement encodes as three empty arrays") {
  CHECK(serialize(SmartLegalAgreement{}) == kEmptyAgreementBytes);
  CHECK(hash_agreement(SmartLegalAgreement{}).hex == kEmptyAgreementHex);
}

TEST_CASE("sha256 matches known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("bold italic versus italic bold") {
  auto bi = one({span({Markup::bold()}, {span({Markup::italic()}, {text("x")})})});
  auto ib = one({span({Markup::italic()}, {span({Markup::bold()}, {text("x")})})});
  CHECK(canonicalize(bi) == canonicalize(ib));
  CHECK(hash_document(bi) == hash_document(ib));
  CHECK(serialize(bi) == serialize(ib));
}

TEST_CASE("all nestings of three markups share one canonical form") {
  std::vector<Markup> ms = {Markup::bold(), Markup::italic(), Markup::underline()};
  std::sort(ms.begin(), ms.end(), markup_less);
  std::set<std::string> forms;
  do {
    auto d = one({span({ms[0]}, {span({ms[1]}, {span({ms[2]}, {text("x")})})})});
    forms.insert(serialize(d));
  } while (std::next_permutation(ms.begin(), ms.end(), markup_less));
  CHECK(forms.size() == 1);
  CHECK(*forms.begin() == serialize(one({span({Markup::bold(), Markup::italic(), Markup::underline()}, {text("x")})})));
}

TEST_CASE("canonicalization is idempotent and normalizes text") {
  auto d = one({text("caf"), text("e\xCC\x81"), text(""), span({Markup::bold()}, {text("A\xCC\x8A")})});
  auto c = canonicalize(d);
  CHECK(canonicalize(c) == c);
  REQUIRE(c.root.size() == 2);
  CHECK(c.root[0] == text("caf\xC3\xA9"));
  CHECK(plain_text(c.root[1]) == "\xC3\x85");
}

TEST_CASE("merged text keeps locators pointing at the right content") {
  SmartLegalAgreement a;
  a.documents.push_back(one({text("ab"), text("cd"), span({Markup::other_data("law")}, {text("x")})}));
  a = register_other_data(a, Locator{DocumentId::local("d"), {2}, std::nullopt}, "law");
  auto c = canonicalize(a);
  CHECK(c.header_for(DocumentId::local("d"))->other_data[0].locator.path == NodePath{1});
}

TEST_CASE("serialize, parse, serialize is a fixpoint") {
  gen::Rng r(5);
  for (int i = 0; i < 100; ++i) {
    auto a = gen::agreement(r);
    std::string once = serialize(a);
    CHECK(serialize(parse_agreement(once)) == once);
    CHECK(parse_agreement(once) == canonicalize(a));
  }
}

TEST_CASE("permuted collections serialize identically") {
  gen::Rng r(9);
  for (int i = 0; i < 100; ++i) {
    auto a = gen::agreement(r);
    auto b = gen::permuted(r, a);
    CHECK(canonicalize(a) == canonicalize(b));
    CHECK(serialize(a) == serialize(b));
    CHECK(hash_agreement(a) == hash_agreement(b));
  }
}

TEST_CASE("reordered input parses to the canonical model") {
  auto a = fixtures::msc();
  std::string canonical = serialize(a);
  // Arrays that carry meaning (prose sequences, list items) must keep their
  // order, so only reverse the top-level collections here.
  auto j = nlohmann::ordered_json::parse(canonical);
  for (const char* key : {"documents", "headers", "parameter_sets"}) {
    nlohmann::ordered_json rev = nlohmann::ordered_json::array();
    for (auto it = j[key].rbegin(); it != j[key].rend(); ++it) rev.push_back(scramble_keys(*it));
    j[key] = rev;
  }
  std::string messy = j.dump(2);
  CHECK(messy != canonical);
  CHECK(parse_agreement(messy) == canonicalize(a));
  CHECK(serialize(parse_agreement(messy)) == canonical);
}

TEST_CASE("truncated input is malformed with an offset") {
  std::string bytes = serialize(fixtures::msc());
  std::string cut = bytes.substr(0, bytes.size() / 2);
  try {
    parse(cut);
    FAIL("expected throw");
  } catch (const ParseError& e) {
    CHECK(e.code() == "MALFORMED_SYNTAX");
    CHECK(e.offset() <= cut.size());
    CHECK(e.offset() > 0);
  }
}

TEST_CASE("unknown keys and kinds are schema errors") {
  CHECK(code_of([] { parse(R"({"documents":[],"headers":[],"parameter_sets":[],"extra":1})"); }) == "SCHEMA_VIOLATION");
  CHECK(code_of([] { parse(R"({"id":{"scope":"local","value":"d"},"root":[{"type":"span","markups":[{"kind":"blink"}],"children":[]}]})"); }) ==
        "UNKNOWN_MARKUP_KIND");
  CHECK(code_of([] { parse(R"({"agreements":[],"code_refs":[],"format":"sla/9"})"); }) == "SCHEMA_VIOLATION");
}

TEST_CASE("list item outside a list cannot be expressed") {
  CHECK(code_of([] { parse(R"({"id":{"scope":"local","value":"d"},"root":[{"type":"item","children":[]}]})"); }) ==
        "SCHEMA_VIOLATION");
}

TEST_CASE("changing a bound value changes the digest") {
  auto a = fixtures::msc();
  auto before = hash_agreement(a);
  for (auto& s : a.parameter_sets)
    for (auto& p : s.entries)
      if (p.name == "rate" && p.value) p.value = ParamValue::decimal("4.6");
  CHECK(hash_agreement(a) != before);
}

TEST_CASE("history and branch do not affect the digest") {
  auto a = fixtures::msc();
  auto before = hash_agreement(a);
  a.agreement_header()->edit_history.push_back({fixtures::at("2024-06-01T00:00:00Z"), "x", ChangeKind::approval, "ok", 5});
  a.agreement_header()->version.branch = Branch::transmitted;
  CHECK(hash_agreement(a) == before);
}

TEST_CASE("clause digests address content") {
  auto d1 = ProseDocument{DocumentId::local("one"), {text("x"), span({Markup::clause()}, {text("Same words.")})}};
  auto d2 = ProseDocument{DocumentId::local("two"), {span({Markup::clause()}, {text("Same words.")})}};
  CHECK(hash_clause(d1, {1}) == hash_clause(d2, {0}));
  auto d3 = ProseDocument{DocumentId::local("two"), {span({Markup::clause()}, {text("Same wordz.")})}};
  CHECK(hash_clause(d3, {0}) != hash_clause(d2, {0}));
  CHECK(code_of([&] { hash_clause(d1, {0}); }) == "NOT_A_CLAUSE");
  CHECK(code_of([&] { hash_clause(d1, {7}); }) == "LOCATOR_INVALID");
}

TEST_CASE("verify") {
  auto a = fixtures::msc();
  std::string bytes = serialize(a);
  auto d = hash_agreement(a);
  CHECK(verify(bytes, d.hex).ok);
  CHECK(verify(bytes, d.to_string()).ok);

  auto short_digest = verify(bytes, d.hex.substr(1));
  CHECK_FALSE(short_digest.ok);
  CHECK(short_digest.report.contains("BAD_DIGEST_FORMAT"));

  std::string tampered = bytes;
  auto pos = tampered.find("England");
  tampered[pos] = 'e';
  auto t = verify(tampered, d.hex);
  CHECK_FALSE(t.ok);
  CHECK(t.report.contains("DIGEST_MISMATCH"));

  auto trunc = verify(bytes.substr(0, 40), d.hex);
  CHECK_FALSE(trunc.ok);
  CHECK(trunc.report.contains("MALFORMED_SYNTAX"));
}

TEST_CASE("seal stores the digest of the unsealed content") {
  auto u = fixtures::msc_unsealed();
  auto s = seal(u);
  REQUIRE(s.agreement_header()->agreement_hash);
  CHECK(*s.agreement_header()->agreement_hash == hash_agreement(u));
  CHECK(hash_agreement(s) == hash_agreement(u));
}

TEST_CASE("digest file line") {
  DigestValue d{"sha-256", kEmptyAgreementHex};
  CHECK(digest_file_line(d, "a.sla.json") == std::string(kEmptyAgreementHex) + "  a.sla.json\n");
}
