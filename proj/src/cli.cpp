#include "sla/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sla/crossrefs.hpp"
#include "sla/format.hpp"
#include "sla/lifecycle.hpp"
#include "sla/parameters.hpp"

namespace sla {

namespace {

// Exit-code carriers. Anything else escaping a command is a bug.
struct UsageFailure {
  std::string message;
};
struct Findings {};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool color = false;

  void report(const Diagnostic& d) const {
    std::string line = format_diagnostic(d);
    if (color) {
      const char* tint = d.severity == Severity::error ? "\033[31m" : "\033[33m";
      err << tint << line << "\033[0m\n";
    } else {
      err << line << "\n";
    }
  }
  void report(const ValidationReport& r) const {
    for (const auto& d : r) report(d);
  }
  void fail(const std::string& code, const std::string& message) const {
    report(Diagnostic{Severity::error, code, "", "", message});
  }
};

std::string read_input(const Io& io, const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << io.in.rdbuf();
    return buf.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageFailure{"cannot read " + path};
  buf << f.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageFailure{"cannot write " + path};
  f << bytes;
  if (!f) throw UsageFailure{"cannot write " + path};
}

ModelValue load(const Io& io, const std::string& path) { return parse(read_input(io, path)); }

// The one agreement a file holds, whether stored bare or wrapped in a
// single-agreement contract.
SmartLegalAgreement& only_agreement(ModelValue& v) {
  if (auto* a = std::get_if<SmartLegalAgreement>(&v)) return *a;
  if (auto* c = std::get_if<SmartContract>(&v)) {
    if (c->agreements.size() == 1) return c->agreements.front();
    throw Error("NOT_A_SINGLE_AGREEMENT", "file holds " + std::to_string(c->agreements.size()) + " agreements");
  }
  throw Error("NOT_A_SINGLE_AGREEMENT", "file holds a bare document");
}

std::string bytes_of(const ModelValue& v) {
  return std::visit([](const auto& x) { return serialize(x); }, v);
}

std::vector<SmartLegalAgreement> agreements_of(const ModelValue& v) {
  if (auto* a = std::get_if<SmartLegalAgreement>(&v)) return {*a};
  if (auto* c = std::get_if<SmartContract>(&v)) return c->agreements;
  SmartLegalAgreement a;
  a.documents.push_back(std::get<ProseDocument>(v));
  return {a};
}

const ProseDocument& find_doc(const SmartLegalAgreement& a, const std::string& value) {
  for (const auto& d : a.documents)
    if (d.id.value == value) return d;
  throw Error("LOCATOR_INVALID", "no document " + value);
}

DocumentId id_from_arg(const std::string& s) {
  if (s.rfind("global:", 0) == 0) return DocumentId::global(s.substr(7));
  if (s.rfind("local:", 0) == 0) return DocumentId::local(s.substr(6));
  return DocumentId::local(s);
}

EditStamp stamp_from(const std::string& ts) {
  EditStamp stamp;
  stamp.actor = "sla";
  if (!ts.empty()) {
    auto t = parse_timestamp(ts);
    if (!t) throw UsageFailure{"bad --timestamp " + ts + " (want YYYY-MM-DDTHH:MM:SSZ)"};
    stamp.timestamp = *t;
  }
  return stamp;
}

std::optional<PlacementPolicy> policy_from(const std::string& s) {
  for (auto p : {PlacementPolicy::prose_only, PlacementPolicy::element_only, PlacementPolicy::dual})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

// --- commands ---------------------------------------------------------------

void cmd_validate(const Io& io, const std::vector<std::string>& files, const std::string& policy_name) {
  std::optional<PlacementPolicy> policy = policy_from(policy_name);
  if (!policy) throw UsageFailure{"unknown --policy " + policy_name};
  bool found = false;
  for (const auto& f : files) {
    ModelValue v;
    try {
      v = load(io, f);
    } catch (const ParseError& e) {
      io.report(Diagnostic{Severity::error, e.code(), f, "@" + std::to_string(e.offset()), e.what()});
      found = true;
      continue;
    }
    ValidationReport r;
    if (auto* c = std::get_if<SmartContract>(&v)) r = validate_contract(*c, *policy);
    else if (auto* a = std::get_if<SmartLegalAgreement>(&v)) r = validate_agreement(*a, *policy);
    else r = validate_structure(std::get<ProseDocument>(v));
    io.report(r);
    found = found || r.has_errors();
  }
  if (found) throw Findings{};
}

void cmd_canonicalize(const Io& io, const std::string& file) { io.out << bytes_of(load(io, file)); }

void cmd_hash(const Io& io, const std::string& file) {
  io.out << hash_value(load(io, file)).to_string() << "\n";
}

void cmd_verify(const Io& io, const std::string& file, const std::string& expect) {
  VerifyResult r = verify(read_input(io, file), expect);
  io.report(r.report);
  if (!r.ok) throw Findings{};
  io.out << "OK\n";
}

std::string markup_attr(const Attributes& attrs, const std::string& key, const std::string& fallback) {
  auto it = attrs.find(key);
  return it == attrs.end() ? fallback : it->second;
}

void cmd_extract(const Io& io, const std::string& file) {
  ModelValue v = load(io, file);
  for (const auto& a0 : agreements_of(v)) {
    SmartLegalAgreement a = canonicalize(a0);
    for (const auto& set : a.parameter_sets) {
      DocumentId owner = set.owner ? *set.owner : agreement_level_owner();
      for (const auto& p : set.entries) {
        io.out << to_string(QualifiedName{owner, p.name}) << "\t" << to_string(p.type) << "\t"
               << (p.value ? to_literal(*p.value) : "") << "\t" << status_name(p.status) << "\n";
      }
    }
    // Parameters that live only in prose markup.
    const ParameterSet* global = a.parameter_set_for(std::nullopt);
    for (const auto& d : a.documents) {
      const ParameterSet* own = a.parameter_set_for(d.id);
      for (const auto& occ : identify_parameters(d)) {
        if ((own && own->find(occ.param_id)) || (global && global->find(occ.param_id))) continue;
        const MarkedSpan* s = span_at(d, occ.locator.path);
        Attributes attrs;
        for (const auto& m : s->markups) {
          auto* desc = std::get_if<Descriptive>(&m.value);
          if (desc && desc->kind == DescriptiveKind::parameter && desc->id == occ.param_id) attrs = desc->attributes;
        }
        io.out << to_string(QualifiedName{d.id, occ.param_id}) << "\t" << markup_attr(attrs, "type", "text") << "\t"
               << markup_attr(attrs, "value", "") << "\t" << markup_attr(attrs, "status", "unbound") << "\n";
      }
    }
  }
}

void cmd_resolve(const Io& io, const std::vector<std::string>& files) {
  std::vector<DocumentParameters> inputs;
  for (const auto& f : files) {
    ModelValue v = load(io, f);
    for (const auto& a : agreements_of(v)) {
      auto part = binding_inputs(a);
      inputs.insert(inputs.end(), part.begin(), part.end());
    }
  }
  BindingResolution r = resolve_bindings(inputs);
  for (const auto& [q, b] : r.environment.bindings) {
    io.out << to_string(q) << "\t" << to_literal(b.value) << "\t" << to_string(b.provenance) << "\n";
  }
  for (const auto& e : r.errors) io.report(Diagnostic{Severity::error, e.code, to_string(e.name.doc), e.name.name, e.message});
  if (!r.errors.empty()) throw Findings{};
}

bool path_prefix(const NodePath& a, const NodePath& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

void cmd_redact(const Io& io, const std::string& file, const std::string& out_path) {
  ModelValue v = load(io, file);
  auto redact_agreement = [](SmartLegalAgreement& a) {
    for (auto& d : a.documents) {
      RedactionResult r = redact(d);
      d = std::move(r.document);
      if (AgreementHeader* h = a.header_for(d.id)) {
        std::erase_if(h->other_data, [&](const OtherDataRecord& rec) {
          return std::any_of(r.report.locators.begin(), r.report.locators.end(), [&](const NodePath& p) {
            return path_prefix(p, rec.locator.path) || path_prefix(rec.locator.path, p);
          });
        });
      }
    }
  };
  if (auto* d = std::get_if<ProseDocument>(&v)) *d = redact(*d).document;
  else if (auto* a = std::get_if<SmartLegalAgreement>(&v)) redact_agreement(*a);
  else for (auto& a : std::get<SmartContract>(v).agreements) redact_agreement(a);
  write_output(out_path, bytes_of(v));
}

void cmd_choices(const Io& io, const std::string& file, const std::vector<std::string>& picks,
                 const std::string& out_path) {
  ModelValue v = load(io, file);
  SmartLegalAgreement& a = only_agreement(v);
  if (picks.empty()) {
    for (const auto& d : a.documents) {
      for_each_node(d, [&](const ProseNode& n, const NodePath& p) {
        if (auto* c = n.as<ChoiceBlock>())
          io.out << to_string(d.id) << "\t" << c->choice_id << "\t" << c->options.size() << "\t" << format_path(p) << "\n";
      });
    }
    return;
  }
  for (const auto& pick : picks) {
    auto eq = pick.find('=');
    if (eq == std::string::npos) throw UsageFailure{"--resolve wants <choice_id>=<index>, got " + pick};
    std::string id = pick.substr(0, eq);
    std::size_t index = 0;
    try {
      std::size_t used = 0;
      index = std::stoul(pick.substr(eq + 1), &used);
      if (used != pick.size() - eq - 1) throw std::invalid_argument(pick);
    } catch (const std::exception&) {
      throw UsageFailure{"bad option index in " + pick};
    }
    bool done = false;
    for (auto& d : a.documents) {
      bool here = false;
      for_each_node(d, [&](const ProseNode& n, const NodePath&) {
        if (auto* c = n.as<ChoiceBlock>(); c && c->choice_id == id) here = true;
      });
      if (here) {
        d = resolve_choice(d, id, index);
        done = true;
        break;
      }
    }
    if (!done) throw Error("CHOICE_NOT_FOUND", "no choice " + id);
  }
  std::string bytes = bytes_of(v);
  if (out_path.empty()) io.out << bytes;
  else write_output(out_path, bytes);
}

void cmd_xrefs(const Io& io, const std::string& file, bool check) {
  ModelValue v = load(io, file);
  bool found = false;
  for (const auto& a : agreements_of(v)) {
    if (check) {
      ValidationReport r = validate_crossrefs(a);
      io.report(r);
      found = found || r.has_errors();
      continue;
    }
    const AgreementHeader* h = a.agreement_header();
    if (!h) continue;
    std::vector<CrossReference> refs = h->xref_table;
    std::sort(refs.begin(), refs.end(), [](const auto& x, const auto& y) { return x.xref_id < y.xref_id; });
    for (const auto& x : refs) {
      io.out << x.xref_id << "\t" << (x.kind == XrefKind::inter ? "inter" : "intra") << "\t"
             << format_locator(x.source) << "\t" << format_target(x.target) << "\n";
    }
  }
  if (found) throw Findings{};
}

void cmd_derive(const Io& io, const std::string& file, const std::string& doc, const std::string& type,
                const std::string& child, const std::string& out_path, const std::string& ts) {
  ModelValue v = load(io, file);
  SmartLegalAgreement& a = only_agreement(v);
  const DocumentId parent = find_doc(a, doc).id;
  std::optional<DocumentId> child_id;
  if (!child.empty()) child_id = id_from_arg(child);
  a = derive_in_agreement(a, parent, type, child_id, stamp_from(ts));
  write_output(out_path, bytes_of(v));
}

CodeRef code_from(const std::string& platform, const std::string& version) { return CodeRef{platform, version, {}}; }

void cmd_bind(const Io& io, const std::string& file, const std::string& platform, const std::string& version) {
  ModelValue v = load(io, file);
  SmartLegalAgreement& a = only_agreement(v);
  BindingResolution r = resolve_bindings(binding_inputs(a));
  io.out << serialize(bind_code(a, code_from(platform, version), r.environment)) << "\n";
}

void cmd_integrate(const Io& io, const std::string& file, const std::string& platform, const std::string& version,
                   const std::string& instance, const std::string& out_path, const std::string& ts) {
  ModelValue v = load(io, file);
  SmartLegalAgreement& a = only_agreement(v);
  a = dual_integrate(a, code_from(platform, version), instance, stamp_from(ts));
  write_output(out_path, bytes_of(v));
}

void cmd_history(const Io& io, const std::string& file, const std::string& doc) {
  ModelValue v = load(io, file);
  for (const auto& a : agreements_of(v)) {
    const AgreementHeader* h = nullptr;
    if (doc.empty()) h = a.agreement_header();
    else h = a.header_for(find_doc(a, doc).id);
    if (h) io.out << format_history(h->edit_history);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  const bool tty = &err == &std::cerr && ::isatty(STDERR_FILENO);
  Io io{in, out, err, tty && std::getenv("SLA_NO_COLOR") == nullptr};

  CLI::App app{"Smart legal agreement toolchain", "sla"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string file, expect, policy = "dual", out_path, doc, type, child, platform, version = "1", instance, ts;
  std::vector<std::string> picks;
  bool check = false;

  auto* validate = app.add_subcommand("validate", "structural, placement and cross-reference checks");
  validate->add_option("files", files, "input files")->required();
  validate->add_option("--policy", policy, "placement policy: prose-only, element-only or dual");

  auto* canon = app.add_subcommand("canonicalize", "print canonical bytes");
  canon->add_option("file", file, "input file or -")->required();

  auto* hash = app.add_subcommand("hash", "print the canonical digest");
  hash->add_option("file", file, "input file or -")->required();

  auto* ver = app.add_subcommand("verify", "compare a file against an expected digest");
  ver->add_option("file", file, "input file or -")->required();
  ver->add_option("--expect", expect, "expected hex digest")->required();

  auto* extract = app.add_subcommand("extract-params", "list parameters");
  extract->add_option("file", file, "input file or -")->required();

  auto* resolve = app.add_subcommand("resolve", "resolve parameter bindings across files");
  resolve->add_option("files", files, "input files")->required();

  auto* red = app.add_subcommand("redact", "write a redacted copy");
  red->add_option("file", file, "input file or -")->required();
  red->add_option("--out", out_path, "output path")->required();

  auto* choices = app.add_subcommand("choices", "list or resolve choice blocks");
  choices->add_option("file", file, "input file or -")->required();
  choices->add_option("--resolve", picks, "<choice_id>=<index>");
  choices->add_option("--out", out_path, "output path (default stdout)");

  auto* xrefs = app.add_subcommand("xrefs", "list or check cross-references");
  xrefs->add_option("file", file, "input file or -")->required();
  xrefs->add_flag("--check", check, "validate instead of listing");

  auto* derive = app.add_subcommand("derive", "derive a child document");
  derive->add_option("file", file, "input file or -")->required();
  derive->add_option("--doc", doc, "parent document id")->required();
  derive->add_option("--type", type, "document type of the child")->required();
  derive->add_option("--id", child, "child id (default: fresh global id)");
  derive->add_option("--out", out_path, "output path")->required();
  derive->add_option("--timestamp", ts, "version timestamp");

  auto* bind = app.add_subcommand("bind", "print the instantiation request");
  bind->add_option("file", file, "input file or -")->required();
  bind->add_option("--platform", platform, "code platform")->required();
  bind->add_option("--version", version, "code version");

  auto* integ = app.add_subcommand("integrate", "store the code instance id");
  integ->add_option("file", file, "input file or -")->required();
  integ->add_option("--platform", platform, "code platform")->required();
  integ->add_option("--version", version, "code version");
  integ->add_option("--instance", instance, "instance id")->required();
  integ->add_option("--out", out_path, "output path")->required();
  integ->add_option("--timestamp", ts, "history timestamp");

  auto* history = app.add_subcommand("history", "print edit history records");
  history->add_option("file", file, "input file or -")->required();
  history->add_option("--doc", doc, "document header (default: agreement level)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (validate->parsed()) cmd_validate(io, files, policy);
    else if (canon->parsed()) cmd_canonicalize(io, file);
    else if (hash->parsed()) cmd_hash(io, file);
    else if (ver->parsed()) cmd_verify(io, file, expect);
    else if (extract->parsed()) cmd_extract(io, file);
    else if (resolve->parsed()) cmd_resolve(io, files);
    else if (red->parsed()) cmd_redact(io, file, out_path);
    else if (choices->parsed()) cmd_choices(io, file, picks, out_path);
    else if (xrefs->parsed()) cmd_xrefs(io, file, check);
    else if (derive->parsed()) cmd_derive(io, file, doc, type, child, out_path, ts);
    else if (bind->parsed()) cmd_bind(io, file, platform, version);
    else if (integ->parsed()) cmd_integrate(io, file, platform, version, instance, out_path, ts);
    else if (history->parsed()) cmd_history(io, file, doc);
  } catch (const UsageFailure& u) {
    err << "sla: " << u.message << "\n";
    return 2;
  } catch (const Findings&) {
    return 1;
  } catch (const ParseError& e) {
    io.report(Diagnostic{Severity::error, e.code(), file, "@" + std::to_string(e.offset()), e.what()});
    return 1;
  } catch (const ModelError& e) {
    io.report(e.report());
    return 1;
  } catch (const Error& e) {
    io.fail(e.code(), e.what());
    return 1;
  }
  return 0;
}

}  // namespace sla
