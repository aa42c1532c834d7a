#include <iostream>

#include "sla/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sla::run_cli(args, std::cin, std::cout, std::cerr);
}
