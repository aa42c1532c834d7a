#include "doctest.h"
#include "sla/format.hpp"
#include "sla/prose.hpp"
#include "support/gen.hpp"

using namespace sla;

namespace {

ProseDocument doc_of(NodeSequence root) { return ProseDocument{DocumentId::local("d"), std::move(root)}; }

}  // namespace

TEST_CASE("single text document validates clean") {
  CHECK(validate_structure(doc_of({text("hello")})).empty());
}

TEST_CASE("ragged table is rejected") {
  std::vector<TableRow> rows = {{{text("a")}, {text("b")}}, {{text("c")}, {text("d")}, {text("e")}}};
  auto r = validate_structure(doc_of({table(1, rows)}));
  CHECK(r.contains("RAGGED_TABLE"));
}

TEST_CASE("choice with one option is degenerate") {
  auto r = validate_structure(doc_of({choice("c1", {{text("only")}})}));
  CHECK(r.contains("DEGENERATE_CHOICE"));
}

TEST_CASE("part boundary inside a span is misplaced") {
  auto r = validate_structure(doc_of({span({Markup::bold()}, {part(PartKind::annex, "A")})}));
  CHECK(r.contains("MISPLACED_PART_BOUNDARY"));
}

TEST_CASE("duplicate anchors and table numbers") {
  auto r = validate_structure(doc_of({anchor("x"), anchor("x"), table(2, {{{text("a")}}}), table(2, {{{text("b")}}})}));
  CHECK(r.contains("DUPLICATE_ANCHOR"));
  CHECK(r.contains("DUPLICATE_TABLE_NUMBER"));
}

TEST_CASE("parameter markup needs an identifier") {
  auto r = validate_structure(doc_of({span({Markup::parameter("")}, {text("x")})}));
  CHECK(r.contains("MISSING_IDENTIFIER"));
}

TEST_CASE("apply_markup splits a text node") {
  auto res = apply_markup(doc_of({text("hello world")}), {0}, TextRange{0, 5}, Markup::bold());
  REQUIRE(res.document.root.size() == 2);
  auto* s = res.document.root[0].as<MarkedSpan>();
  REQUIRE(s);
  CHECK(s->markups == std::vector<Markup>{Markup::bold()});
  CHECK(s->children == NodeSequence{text("hello")});
  CHECK(res.document.root[1] == text(" world"));
}

TEST_CASE("bold then italic over the same range hashes like one span with both") {
  auto d = doc_of({text("hello world")});
  auto once = apply_markup(d, {0}, TextRange{0, 5}, Markup::bold()).document;
  // The new span sits at /0; wrap its whole content again.
  auto twice = apply_markup(once, {0}, std::nullopt, Markup::italic()).document;
  auto direct = doc_of({span({Markup::italic(), Markup::bold()}, {text("hello")}), text(" world")});
  CHECK(canonicalize(twice) == canonicalize(direct));
  CHECK(hash_document(twice) == hash_document(direct));
}

TEST_CASE("overlapping range is refused") {
  auto d = doc_of({span({Markup::bold()}, {text("hello")}), text(" world")});
  // Absolute [3,8) crosses the span boundary at 5; addressed from the root sequence.
  try {
    apply_markup(d, {}, TextRange{3, 8}, Markup::italic());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == "OVERLAP_FORBIDDEN");
  }
}

TEST_CASE("offsets count code points, not bytes") {
  auto d = doc_of({text("caf\xC3\xA9 bar")});
  auto res = apply_markup(d, {0}, TextRange{0, 4}, Markup::bold()).document;
  CHECK(plain_text(res.root[0]) == "caf\xC3\xA9");
}

TEST_CASE("redact without redaction markup is a no-op") {
  auto d = doc_of({text("plain"), span({Markup::bold()}, {text("x")})});
  auto r = redact(d);
  CHECK(r.document == d);
  CHECK(r.report.spans_redacted == 0);
  CHECK(r.report.bytes_removed == 0);
}

TEST_CASE("redaction replaces the content and leaves no trace") {
  auto d = doc_of({text("Rate: "), span({Markup::to_be_redacted()}, {text("secret rate 4.5%")})});
  auto r = redact(d);
  auto* s = r.document.root[1].as<MarkedSpan>();
  REQUIRE(s);
  CHECK(s->markups.front() == Markup::descriptive(DescriptiveKind::has_been_redacted));
  CHECK(plain_text(s->children) == std::string(kRedactionPlaceholder));
  CHECK(r.report.spans_redacted == 1);
  CHECK(serialize(r.document).find("secret rate 4.5%") == std::string::npos);
}

TEST_CASE("nested redaction: outer wins") {
  auto d = doc_of({span({Markup::to_be_redacted()},
                        {text("outer "), span({Markup::to_be_redacted()}, {text("inner secret")})})});
  auto r = redact(d);
  CHECK(r.report.spans_redacted == 1);
  CHECK(r.report.bytes_removed == std::string("outer inner secret").size());
  CHECK(serialize(r.document).find("inner secret") == std::string::npos);
  CHECK(redact(r.document).document == r.document);
}

TEST_CASE("resolve_choice substitutes the option") {
  auto d = doc_of({choice("c1", {{text("A")}, {text("B")}})});
  CHECK(resolve_choice(d, "c1", 1).root == NodeSequence{text("B")});
  try {
    resolve_choice(d, "c1", 2);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == "OPTION_OUT_OF_RANGE");
  }
  try {
    resolve_choice(d, "nope", 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == "CHOICE_NOT_FOUND");
  }
}

TEST_CASE("resolving every choice leaves no degenerate choices") {
  gen::Rng r(7);
  for (int i = 0; i < 200; ++i) {
    auto d = gen::document(r, DocumentId::local("t"));
    while (count_choices(d) > 0) {
      std::optional<std::pair<std::string, std::size_t>> first;
      for_each_node(d, [&](const ProseNode& n, const NodePath&) {
        if (auto* c = n.as<ChoiceBlock>(); c && !first) first = {c->choice_id, c->options.size()};
      });
      d = resolve_choice(d, first->first, r.below(first->second));
    }
    CHECK_FALSE(validate_structure(d).contains("DEGENERATE_CHOICE"));
  }
}

TEST_CASE("split_parts without boundaries yields one body part") {
  auto parts = split_parts(doc_of({text("a"), text("b")}));
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].kind == PartKind::body);
  CHECK(parts[0].nodes.size() == 2);
}

TEST_CASE("split_parts drops an empty leading body part") {
  auto parts = split_parts(
      doc_of({part(PartKind::definitions, "Defs"), text("x"), part(PartKind::schedule, "S1"), text("y")}));
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].kind == PartKind::definitions);
  CHECK(parts[0].title == "Defs");
  CHECK(parts[0].nodes == NodeSequence{text("x")});
  CHECK(parts[1].kind == PartKind::schedule);
  CHECK(parts[1].nodes == NodeSequence{text("y")});
}

TEST_CASE("split then concatenate preserves text order") {
  gen::Rng r(11);
  for (int i = 0; i < 200; ++i) {
    auto d = gen::document(r, DocumentId::local("t"));
    std::string joined;
    for (const auto& p : split_parts(d)) joined += plain_text(p.nodes);
    CHECK(joined == plain_text(d.root));
  }
}

TEST_CASE("generated documents are structurally valid") {
  gen::Rng r(3);
  for (int i = 0; i < 300; ++i) {
    auto d = gen::document(r, DocumentId::local("t"));
    auto rep = validate_structure(d);
    INFO(i);
    CHECK(rep.empty());
  }
}

TEST_CASE("style sheet maps descriptive kinds to presentation") {
  MarkedSpan s{{Markup::bold(), Markup::descriptive(DescriptiveKind::heading)}, {text("H")}};
  auto kinds = effective_presentation(s, {{"heading", "underline"}});
  CHECK(std::find(kinds.begin(), kinds.end(), PresentationalKind::bold) != kinds.end());
  CHECK(std::find(kinds.begin(), kinds.end(), PresentationalKind::underline) != kinds.end());
}
