#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "sla/cli.hpp"

namespace sla::testing {

struct CliRun {
  int rc = 0;
  std::string out;
  std::string err;
};

inline CliRun run(const std::vector<std::string>& args, const std::string& in = "") {
  std::istringstream input(in);
  std::ostringstream out, err;
  CliRun r;
  r.rc = run_cli(args, input, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

inline std::string corpus(const std::string& rel) { return std::string(SLA_CORPUS_DIR) + "/" + rel; }

}  // namespace sla::testing
