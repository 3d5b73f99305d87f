#include <iostream>
#include <string>
#include <vector>

#include "supply_audit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return supply_audit::cli::run(args, std::cout, std::cerr);
}
