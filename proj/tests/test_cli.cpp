#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "doctest.h"
#include "sla/format.hpp"
#include "support/cli_run.hpp"
#include "support/fixtures.hpp"

using namespace sla;
using sla::testing::corpus;
using sla::testing::run;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string scratch(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sla_cli_" + name)).string();
}

const std::vector<std::string> kGolden = {"empty.sla.json", "generated.sla.json", "msc.sla.json", "template.sla.json"};

}  // namespace

TEST_CASE("golden files validate clean") {
  for (const auto& f : kGolden) {
    auto r = run({"validate", corpus("golden/" + f)});
    INFO(f << "\n" << r.err);
    CHECK(r.rc == 0);
    CHECK(r.err.empty());
  }
}

TEST_CASE("golden files are already canonical") {
  for (const auto& f : kGolden) {
    auto r = run({"canonicalize", corpus("golden/" + f)});
    CHECK(r.rc == 0);
    CHECK(r.out == slurp(corpus("golden/" + f)));
  }
}

TEST_CASE("the msc file matches the fixture") {
  auto r = run({"hash", corpus("golden/msc.sla.json")});
  CHECK(r.rc == 0);
  CHECK(r.out == hash_contract(fixtures::wrap(fixtures::msc())).to_string() + "\n");
}

TEST_CASE("hash is deterministic and reads stdin") {
  const std::string f = corpus("golden/template.sla.json");
  auto a = run({"hash", f});
  auto b = run({"hash", f});
  auto c = run({"hash", "-"}, run({"canonicalize", f}).out);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out.rfind("sha-256:", 0) == 0);
}

TEST_CASE("verify") {
  const std::string f = corpus("golden/msc.sla.json");
  std::string digest = run({"hash", f}).out;
  digest = digest.substr(8, 64);
  auto ok = run({"verify", f, "--expect", digest});
  CHECK(ok.rc == 0);
  CHECK(ok.out == "OK\n");

  std::string tampered = slurp(f);
  tampered.replace(tampered.find("England"), 7, "Englanc");
  auto bad = run({"verify", "-", "--expect", digest}, tampered);
  CHECK(bad.rc == 1);
  CHECK(bad.err.find("DIGEST_MISMATCH") != std::string::npos);
  CHECK(bad.err.find("STORED_HASH_MISMATCH") != std::string::npos);
}

TEST_CASE("every invalid corpus file reports its code") {
  std::ifstream manifest(corpus("invalid/manifest.tsv"));
  std::string line;
  int n = 0;
  while (std::getline(manifest, line)) {
    auto tab = line.find('\t');
    std::string file = line.substr(0, tab), code = line.substr(tab + 1);
    auto r = run({"validate", corpus("invalid/" + file)});
    INFO(file << "\n" << r.err);
    CHECK(r.rc == 1);
    CHECK(r.err.find(code) != std::string::npos);
    ++n;
  }
  CHECK(n == 20);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).rc == 2);
  CHECK(run({"frobnicate"}).rc == 2);
  CHECK(run({"hash"}).rc == 2);
  CHECK(run({"hash", "/nonexistent/x.sla.json"}).rc == 2);
  CHECK(run({"validate", "--policy", "loose", corpus("golden/msc.sla.json")}).rc == 2);
  CHECK(run({"choices", corpus("golden/template.sla.json"), "--resolve", "term"}).rc == 2);
  CHECK(run({"--help"}).rc == 0);
}

TEST_CASE("extract-params lists the msc parameters") {
  auto r = run({"extract-params", corpus("golden/msc.sla.json")});
  CHECK(r.rc == 0);
  CHECK(r.out.find("master/notional\tinteger\t1000000\tbound\n") != std::string::npos);
  CHECK(r.out.find("confirmation/rate\tdecimal\t\tunbound\n") != std::string::npos);
}

TEST_CASE("resolve prints bindings with provenance") {
  auto r = run({"resolve", corpus("golden/msc.sla.json")});
  CHECK(r.rc == 0);
  CHECK(r.out.find("master/rate\t4.5\tschedule") != std::string::npos);
  CHECK(r.out.find("confirmation/rate\t4.5\t") != std::string::npos);
}

TEST_CASE("redact writes a copy without the secret") {
  const std::string out = scratch("redacted.sla.json");
  auto r = run({"redact", corpus("golden/template.sla.json"), "--out", out});
  CHECK(r.rc == 0);
  std::string bytes = slurp(out);
  CHECK(bytes.find("internal margin") == std::string::npos);
  CHECK(run({"validate", out}).rc == 0);
  std::remove(out.c_str());
}

TEST_CASE("choices list and resolve") {
  const std::string f = corpus("golden/template.sla.json");
  auto list = run({"choices", f});
  CHECK(list.out == "nda-template\tterm\t2\t/3\n");
  auto picked = run({"choices", f, "--resolve", "term=1"});
  CHECK(picked.rc == 0);
  CHECK(picked.out.find("until terminated") != std::string::npos);
  CHECK(picked.out.find("one year") == std::string::npos);
  CHECK(run({"choices", f, "--resolve", "term=5"}).rc == 1);
}

TEST_CASE("xrefs") {
  auto r = run({"xrefs", corpus("golden/msc.sla.json")});
  CHECK(r.out.rfind("x1\tinter\t", 0) == 0);
  CHECK(run({"xrefs", corpus("golden/msc.sla.json"), "--check"}).rc == 0);
  CHECK(run({"xrefs", corpus("invalid/dangling_slot.sla.json"), "--check"}).rc == 1);
}

TEST_CASE("derive, bind, integrate and history") {
  const std::string derived = scratch("derived.sla.json");
  auto d = run({"derive", corpus("golden/template.sla.json"), "--doc", "nda-template", "--type", "agreement", "--id",
                "acme-nda", "--out", derived, "--timestamp", "2024-03-01T00:00:00Z"});
  CHECK(d.rc == 0);
  CHECK(run({"validate", derived}).rc == 0);
  CHECK(run({"history", derived, "--doc", "acme-nda"}).rc == 0);
  CHECK(run({"derive", corpus("golden/template.sla.json"), "--doc", "nda-template", "--type", "x", "--out", derived,
             "--timestamp", "yesterday"})
            .rc == 2);

  auto bind = run({"bind", corpus("golden/msc.sla.json"), "--platform", "evm", "--version", "1.0"});
  CHECK(bind.rc == 0);
  CHECK(bind.out.find("agreement_hash") != std::string::npos);
  CHECK(run({"bind", corpus("golden/template.sla.json"), "--platform", "evm"}).rc == 1);

  const std::string integrated = scratch("integrated.sla.json");
  auto i = run({"integrate", corpus("golden/msc.sla.json"), "--platform", "evm", "--version", "1.0", "--instance", "0xabc",
                "--out", integrated, "--timestamp", "2024-05-03T00:00:00Z"});
  CHECK(i.rc == 0);
  auto h = run({"history", integrated});
  CHECK(h.out.find("code-bound") != std::string::npos);
  CHECK(h.out.find("instance=0xabc") != std::string::npos);
  std::remove(derived.c_str());
  std::remove(integrated.c_str());
}
